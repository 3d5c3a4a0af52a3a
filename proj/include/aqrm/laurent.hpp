#pragma once

#include "aqrm/rational.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace aqrm {

/// Sparse polynomial over the rationals in N variables. Variable 0 (the
/// coupling g) may carry negative exponents; all other variables are
/// polynomial. No zero coefficient is ever stored.
template <int N>
class LaurentPoly {
 public:
  using Exponent = std::array<int, N>;
  using Terms = std::map<Exponent, Rational>;

  LaurentPoly() = default;
  LaurentPoly(const Rational& c) { add_term(Exponent{}, c); }
  LaurentPoly(long c) { add_term(Exponent{}, Rational(c)); }
  LaurentPoly(int c) : LaurentPoly(static_cast<long>(c)) {}

  static LaurentPoly monomial(const Exponent& e, const Rational& c = 1) {
    LaurentPoly p;
    p.add_term(e, c);
    return p;
  }
  static LaurentPoly variable(int index, int power = 1) {
    Exponent e{};
    e[index] = power;
    return monomial(e);
  }

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{});
  }
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_term() const {
    auto it = terms_.find(Exponent{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (is_zero_coeff(c)) return;
    for (int i = 1; i < N; ++i)
      if (e[i] < 0) throw std::domain_error("LaurentPoly: negative exponent on a polynomial variable");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  LaurentPoly& operator*=(const Rational& c) {
    if (is_zero_coeff(c)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator-(LaurentPoly a) { return a *= Rational(-1); }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e;
        for (int i = 0; i < N; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  LaurentPoly pow(unsigned k) const {
    LaurentPoly out(1L), base = *this;
    while (k) {
      if (k & 1u) out = out * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return out;
  }

  /// Inverse of a single-term element. Only the g exponent may go negative.
  LaurentPoly inverse() const {
    if (terms_.size() != 1) throw std::domain_error("LaurentPoly: only monomials are invertible");
    const auto& [e, c] = *terms_.begin();
    Exponent inv{};
    inv[0] = -e[0];
    for (int i = 1; i < N; ++i)
      if (e[i] != 0) throw std::domain_error("LaurentPoly: cannot invert a polynomial variable");
    return monomial(inv, 1 / c);
  }

  /// x_var -> -x_var.
  LaurentPoly reflect(int var) const {
    LaurentPoly out = *this;
    for (auto& [e, c] : out.terms_)
      if (e[var] % 2 != 0) c = -c;
    return out;
  }

  int max_degree(int var) const {
    int d = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first || e[var] > d) d = e[var];
      first = false;
    }
    return d;
  }
  int min_degree(int var) const {
    int d = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first || e[var] < d) d = e[var];
      first = false;
    }
    return d;
  }
  bool depends_on(int var) const {
    for (const auto& [e, c] : terms_)
      if (e[var] != 0) return true;
    return false;
  }

  /// Exact substitution. Throws std::domain_error when a negative power of a
  /// zero value is requested.
  Rational eval(const std::array<Rational, N>& at) const {
    Rational out = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < N; ++i) t *= rational_pow(at[i], e[i]);
      out += t;
    }
    return out;
  }
  double eval(const std::array<double, N>& at) const {
    double out = 0;
    for (const auto& [e, c] : terms_) {
      double t = c.get_d();
      for (int i = 0; i < N; ++i) {
        if (e[i] < 0 && at[i] == 0.0) throw std::domain_error("LaurentPoly: division by zero in eval");
        t *= std::pow(at[i], e[i]);
      }
      out += t;
    }
    return out;
  }

  std::string to_string(const std::array<const char*, N>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rational mag = abs(c);
      out += first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
      first = false;
      bool unit = mag == 1;
      bool has_var = false;
      std::string vars;
      for (int i = 0; i < N; ++i) {
        if (e[i] == 0) continue;
        if (has_var) vars += "*";
        has_var = true;
        vars += names[i];
        if (e[i] != 1) vars += "^" + std::to_string(e[i]);
      }
      if (!has_var)
        out += mag.get_str();
      else if (unit)
        out += vars;
      else
        out += mag.get_str() + "*" + vars;
    }
    return out;
  }

 private:
  static bool is_zero_coeff(const Rational& c) { return sgn(c) == 0; }
  static Rational rational_pow(const Rational& x, int k) {
    if (k == 0) return 1;
    if (k < 0) {
      if (sgn(x) == 0) throw std::domain_error("LaurentPoly: division by zero in eval");
      return 1 / rational_pow(x, -k);
    }
    Rational out = 1;
    for (int i = 0; i < k; ++i) out *= x;
    return out;
  }

  Terms terms_;
};

template <int N>
inline bool is_zero(const LaurentPoly<N>& p) {
  return p.is_zero();
}

/// Coefficient ring of all exact operator algebra: Laurent in g, polynomial in
/// Delta. The bias enters as an exact rational, never as a variable.
using Scalar = LaurentPoly<2>;

/// Scalar extended by the bias as a third variable. Used where the bias must
/// stay symbolic (gauge tuples, the derivation engine).
using ExtScalar = LaurentPoly<3>;

namespace sym {
inline Scalar g() { return Scalar::variable(0); }
inline Scalar delta() { return Scalar::variable(1); }
inline ExtScalar g3() { return ExtScalar::variable(0); }
inline ExtScalar delta3() { return ExtScalar::variable(1); }
inline ExtScalar eps3() { return ExtScalar::variable(2); }
}  // namespace sym

inline std::string to_string(const Scalar& s) { return s.to_string({"g", "Delta"}); }
inline std::string to_string(const ExtScalar& s) { return s.to_string({"g", "Delta", "eps"}); }

inline Rational scalar_eval(const Scalar& s, const Rational& g, const Rational& delta) {
  return s.eval({g, delta});
}

/// Delta -> -Delta.
inline Scalar flip_delta(const Scalar& s) { return s.reflect(1); }
inline ExtScalar flip_delta(const ExtScalar& s) { return s.reflect(1); }

inline ExtScalar extend(const Scalar& s) {
  ExtScalar out;
  for (const auto& [e, c] : s.terms()) out.add_term({e[0], e[1], 0}, c);
  return out;
}

/// Substitutes an exact value for the bias.
inline Scalar fix_epsilon(const ExtScalar& s, const Rational& eps) {
  Scalar out;
  for (const auto& [e, c] : s.terms()) {
    Rational w = c;
    for (int i = 0; i < e[2]; ++i) w *= eps;
    out.add_term({e[0], e[1]}, w);
  }
  return out;
}

/// Substitutes exact values for g and Delta, keeping the scalar type.
template <int N>
LaurentPoly<N> fix_parameters(const LaurentPoly<N>& s, const Rational& g, const Rational& delta) {
  LaurentPoly<N> out;
  for (const auto& [e, c] : s.terms()) {
    typename LaurentPoly<N>::Exponent rest = e;
    rest[0] = 0;
    rest[1] = 0;
    std::array<Rational, 2> at{g, delta};
    Rational w = c * Scalar::monomial({e[0], e[1]}).eval(at);
    out.add_term(rest, w);
  }
  return out;
}

}  // namespace aqrm
