#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aqrm {

/// Arbitrary-precision rational. gmpxx keeps results of arithmetic in
/// canonical form (coprime, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "p/q", or a finite decimal such as "0.45" or "-1.5e-2" into an
/// exact rational. Throws std::invalid_argument on malformed input or q == 0.
Rational parse_rational(std::string_view text);

/// Formats as "num/den" (denominator always present).
std::string to_fraction_string(const Rational& r);

/// Shorter human form: "3", "-1/2".
std::string to_display_string(const Rational& r);

inline Rational rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

Rational factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

/// Continued-fraction reconstruction of x as p/q with q <= max_den.
/// Returns false when no such fraction is within tol of x.
bool reconstruct_rational(double x, long max_den, double tol, Rational& out);

}  // namespace aqrm
