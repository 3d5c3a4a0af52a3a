#pragma once

#include "aqrm/laurent.hpp"

#include <string>
#include <vector>

namespace aqrm {

// Polynomials in (g, Delta, eps) reuse ExtScalar. Everything in this header
// assumes nonnegative exponents, except that RatFunc moves negative powers of
// g into its denominator.

/// q = a / b when b divides a exactly.
bool divide_exact(const ExtScalar& a, const ExtScalar& b, ExtScalar& q);

/// Integer primitive part with positive leading coefficient (lex order,
/// highest g power first). The removed rational factor goes to `content`.
ExtScalar primitive_part(const ExtScalar& p, Rational* content = nullptr);

/// A greatest common divisor, normalized like primitive_part. Uses the
/// heuristic integer-evaluation method; when that gives up, falls back to
/// the common monomial factor, which is still a valid common divisor.
ExtScalar poly_gcd(const ExtScalar& a, const ExtScalar& b);

/// Element of Q(g, Delta, eps), kept reduced with a denominator of leading
/// coefficient 1.
class RatFunc {
 public:
  RatFunc() : num_(), den_(1L) {}
  RatFunc(const ExtScalar& p);
  RatFunc(const ExtScalar& num, const ExtScalar& den);
  RatFunc(const Rational& c) : RatFunc(ExtScalar(c)) {}

  const ExtScalar& num() const { return num_; }
  const ExtScalar& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  std::size_t size() const { return num_.size() + den_.size(); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  std::string to_string() const;

 private:
  void normalize();
  ExtScalar num_, den_;
};

inline bool is_zero(const RatFunc& r) { return r.is_zero(); }

/// Univariate polynomial over Q, ascending coefficients, no trailing zeros.
using UniPoly = std::vector<Rational>;

UniPoly uni_trim(UniPoly p);
UniPoly uni_gcd(UniPoly a, UniPoly b);  // monic; gcd(0, 0) = 0
UniPoly uni_mul(const UniPoly& a, const UniPoly& b);
std::string uni_to_string(const UniPoly& p, const char* var);

/// Distinct rational roots, ascending.
std::vector<Rational> rational_roots(const UniPoly& p);

/// gcd over the (g, Delta)-monomials of the eps-coefficient polynomials:
/// the largest factor of p that depends on eps alone.
UniPoly epsilon_content(const ExtScalar& p);

/// Row-reduced echelon form over Q(g, Delta, eps). Returns the nullspace
/// basis, one vector per free column.
struct Elimination {
  std::vector<int> pivot_columns;
  std::vector<RatFunc> pivots;  // pivot values before row scaling
  std::vector<std::vector<RatFunc>> nullspace;
  int rank() const { return static_cast<int>(pivot_columns.size()); }
};

Elimination eliminate(std::vector<std::vector<RatFunc>> rows, int columns);

}  // namespace aqrm
