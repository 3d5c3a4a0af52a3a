#pragma once

#include "aqrm/laurent.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace aqrm {

namespace detail {

template <class S>
struct ScalarTraits {
  static S from_rational(const Rational& r) { return S(r); }
};
template <>
struct ScalarTraits<double> {
  static double from_rational(const Rational& r) { return r.get_d(); }
};

}  // namespace detail

template <class S>
S from_rational(const Rational& r) {
  return detail::ScalarTraits<S>::from_rational(r);
}

/// Normal-ordered boson operator sum_{m,n} c_{m,n} (a^dagger)^m a^n.
template <class S>
class NOOp {
 public:
  using Index = std::pair<int, int>;  // (creation power m, annihilation power n)
  using Terms = std::map<Index, S>;

  NOOp() = default;

  static NOOp constant(const S& c) { return term(0, 0, c); }
  static NOOp identity() { return constant(from_rational<S>(1)); }
  static NOOp term(int m, int n, const S& c) {
    NOOp op;
    op.add_term(m, n, c);
    return op;
  }
  static NOOp create(int power = 1) { return term(power, 0, from_rational<S>(1)); }
  static NOOp annihilate(int power = 1) { return term(0, power, from_rational<S>(1)); }
  static NOOp number() { return term(1, 1, from_rational<S>(1)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  S coeff(int m, int n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? S{} : it->second;
  }

  void add_term(int m, int n, const S& c) {
    if (m < 0 || n < 0) throw std::out_of_range("NOOp: negative power");
    if (aqrm::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(Index{m, n}, c);
    if (!inserted) {
      it->second += c;
      if (aqrm::is_zero(it->second)) terms_.erase(it);
    }
  }

  int creation_degree() const {
    int d = 0;
    for (const auto& [mn, c] : terms_) d = std::max(d, mn.first);
    return d;
  }
  int annihilation_degree() const {
    int d = 0;
    for (const auto& [mn, c] : terms_) d = std::max(d, mn.second);
    return d;
  }
  int total_degree() const {
    int d = 0;
    for (const auto& [mn, c] : terms_) d = std::max(d, mn.first + mn.second);
    return d;
  }

  NOOp& operator+=(const NOOp& o) {
    for (const auto& [mn, c] : o.terms_) add_term(mn.first, mn.second, c);
    return *this;
  }
  NOOp& operator-=(const NOOp& o) {
    for (const auto& [mn, c] : o.terms_) add_term(mn.first, mn.second, -c);
    return *this;
  }
  NOOp& operator*=(const S& s) {
    Terms scaled;
    for (const auto& [mn, c] : terms_) {
      S v = c * s;
      if (!aqrm::is_zero(v)) scaled.emplace(mn, std::move(v));
    }
    terms_ = std::move(scaled);
    return *this;
  }

  friend NOOp operator+(NOOp a, const NOOp& b) { return a += b; }
  friend NOOp operator-(NOOp a, const NOOp& b) { return a -= b; }
  friend NOOp operator-(NOOp a) { return a *= from_rational<S>(-1); }
  friend NOOp operator*(NOOp a, const S& s) { return a *= s; }
  friend NOOp operator*(const S& s, NOOp a) { return a *= s; }
  friend bool operator==(const NOOp& a, const NOOp& b) { return a.terms_ == b.terms_; }

  /// Applies f to every coefficient, dropping results that vanish.
  template <class T, class F>
  NOOp<T> map_coeffs(F&& f) const {
    NOOp<T> out;
    for (const auto& [mn, c] : terms_) out.add_term(mn.first, mn.second, f(c));
    return out;
  }

 private:
  Terms terms_;
};

/// Normal-ordered product using
/// (a+)^m a^n (a+)^p a^q = sum_k k! C(n,k) C(p,k) (a+)^{m+p-k} a^{n+q-k}.
template <class S>
NOOp<S> no_product(const NOOp<S>& x, const NOOp<S>& y) {
  NOOp<S> out;
  for (const auto& [mn, cx] : x.terms()) {
    const auto [m, n] = mn;
    for (const auto& [pq, cy] : y.terms()) {
      const auto [p, q] = pq;
      S c = cx * cy;
      for (int k = 0; k <= std::min(n, p); ++k) {
        Rational w = factorial(k) * Rational(binomial(n, k) * binomial(p, k));
        out.add_term(m + p - k, n + q - k, c * from_rational<S>(w));
      }
    }
  }
  return out;
}

template <class S>
NOOp<S> operator*(const NOOp<S>& x, const NOOp<S>& y) {
  return no_product(x, y);
}

/// P X P^{-1}: c_{m,n} -> (-1)^{m+n} c_{m,n}.
template <class S>
NOOp<S> sigma_flip(const NOOp<S>& x) {
  NOOp<S> out;
  for (const auto& [mn, c] : x.terms()) {
    S v = c;
    if ((mn.first + mn.second) % 2) v = -v;
    out.add_term(mn.first, mn.second, v);
  }
  return out;
}

/// Hermitian adjoint for real coefficients: (a+)^m a^n -> (a+)^n a^m.
template <class S>
NOOp<S> dagger(const NOOp<S>& x) {
  NOOp<S> out;
  for (const auto& [mn, c] : x.terms()) out.add_term(mn.second, mn.first, c);
  return out;
}

/// P^grade * body, with the parity operator P carried as a formal grade bit.
/// A zero body always has grade 0.
template <class S>
class GradedOp {
 public:
  GradedOp() = default;
  GradedOp(int grade, NOOp<S> body) : grade_(grade), body_(std::move(body)) {
    if (grade != 0 && grade != 1) throw std::invalid_argument("GradedOp: grade must be 0 or 1");
    if (body_.is_zero()) grade_ = 0;
  }
  GradedOp(NOOp<S> body) : GradedOp(0, std::move(body)) {}

  static GradedOp parity() { return GradedOp(1, NOOp<S>::identity()); }

  int grade() const { return grade_; }
  const NOOp<S>& body() const { return body_; }
  bool is_zero() const { return body_.is_zero(); }

  GradedOp& operator+=(const GradedOp& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (grade_ != o.grade_) throw std::logic_error("GradedOp: sum of mixed parity grades");
    body_ += o.body_;
    if (body_.is_zero()) grade_ = 0;
    return *this;
  }
  GradedOp& operator-=(const GradedOp& o) { return *this += -o; }
  GradedOp& operator*=(const S& s) {
    body_ *= s;
    if (body_.is_zero()) grade_ = 0;
    return *this;
  }

  friend GradedOp operator+(GradedOp a, const GradedOp& b) { return a += b; }
  friend GradedOp operator-(GradedOp a, const GradedOp& b) { return a -= b; }
  friend GradedOp operator-(const GradedOp& a) { return GradedOp(a.grade_, -a.body_); }
  friend GradedOp operator*(GradedOp a, const S& s) { return a *= s; }
  friend GradedOp operator*(const S& s, GradedOp a) { return a *= s; }
  friend bool operator==(const GradedOp& a, const GradedOp& b) {
    return a.grade_ == b.grade_ && a.body_ == b.body_;
  }

  template <class T, class F>
  GradedOp<T> map_coeffs(F&& f) const {
    return GradedOp<T>(grade_, body_.template map_coeffs<T>(std::forward<F>(f)));
  }

 private:
  int grade_ = 0;
  NOOp<S> body_;
};

/// (P^s1 X)(P^s2 Y) = P^{s1 xor s2} flip^{s2}(X) Y.
template <class S>
GradedOp<S> graded_product(const GradedOp<S>& a, const GradedOp<S>& b) {
  NOOp<S> left = b.grade() ? sigma_flip(a.body()) : a.body();
  return GradedOp<S>(a.grade() ^ b.grade(), no_product(left, b.body()));
}

template <class S>
GradedOp<S> operator*(const GradedOp<S>& a, const GradedOp<S>& b) {
  return graded_product(a, b);
}

/// (P^s X)^dagger = X^dagger P^s = P^s flip^s(X^dagger).
template <class S>
GradedOp<S> adjoint(const GradedOp<S>& a) {
  NOOp<S> d = dagger(a.body());
  return GradedOp<S>(a.grade(), a.grade() ? sigma_flip(d) : d);
}

template <class S>
bool is_zero(const GradedOp<S>& a) {
  return a.is_zero();
}

}  // namespace aqrm
