#pragma once

#include "aqrm/block.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

namespace aqrm {

/// Sparse bivariate polynomial. The two variables are (x, y) for raw
/// generating functions and (u, v) = (xy, x + y) in symmetric form.
template <class C>
class BiPoly {
 public:
  using Index = std::pair<int, int>;
  using Terms = std::map<Index, C>;

  BiPoly() = default;
  static BiPoly constant(const C& c) { return term(0, 0, c); }
  static BiPoly term(int i, int j, const C& c) {
    BiPoly p;
    p.add_term(i, j, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  C coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? C{} : it->second;
  }

  void add_term(int i, int j, const C& c) {
    if (i < 0 || j < 0) throw std::out_of_range("BiPoly: negative power");
    if (aqrm::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(Index{i, j}, c);
    if (!inserted) {
      it->second += c;
      if (aqrm::is_zero(it->second)) terms_.erase(it);
    }
  }

  int degree(int var) const {
    int d = 0;
    for (const auto& [ij, c] : terms_) d = std::max(d, var == 0 ? ij.first : ij.second);
    return d;
  }

  BiPoly& operator+=(const BiPoly& o) {
    for (const auto& [ij, c] : o.terms_) add_term(ij.first, ij.second, c);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    for (const auto& [ij, c] : o.terms_) add_term(ij.first, ij.second, -c);
    return *this;
  }
  BiPoly& operator*=(const C& s) {
    Terms out;
    for (const auto& [ij, c] : terms_) {
      C v = c * s;
      if (!aqrm::is_zero(v)) out.emplace(ij, std::move(v));
    }
    terms_ = std::move(out);
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator-(BiPoly a) { return a *= from_rational<C>(-1); }
  friend BiPoly operator*(BiPoly a, const C& s) { return a *= s; }
  friend BiPoly operator*(const C& s, BiPoly a) { return a *= s; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    for (const auto& [ia, ca] : a.terms_)
      for (const auto& [ib, cb] : b.terms_) out.add_term(ia.first + ib.first, ia.second + ib.second, ca * cb);
    return out;
  }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

  /// Partial derivative in variable 0 or 1.
  BiPoly derivative(int var) const {
    BiPoly out;
    for (const auto& [ij, c] : terms_) {
      int k = var == 0 ? ij.first : ij.second;
      if (k == 0) continue;
      if (var == 0)
        out.add_term(k - 1, ij.second, c * from_rational<C>(k));
      else
        out.add_term(ij.first, k - 1, c * from_rational<C>(k));
    }
    return out;
  }
  /// Antiderivative in variable 1 with zero constant of integration.
  BiPoly integrate_second() const {
    BiPoly out;
    for (const auto& [ij, c] : terms_) out.add_term(ij.first, ij.second + 1, c * from_rational<C>(Rational(1, ij.second + 1)));
    return out;
  }
  /// (i, j) -> (j, i).
  BiPoly swapped() const {
    BiPoly out;
    for (const auto& [ij, c] : terms_) out.add_term(ij.second, ij.first, c);
    return out;
  }
  /// Negates the first variable.
  BiPoly reflect_first() const {
    BiPoly out;
    for (const auto& [ij, c] : terms_) {
      C v = c;
      if (ij.first % 2) v = -v;
      out.add_term(ij.first, ij.second, v);
    }
    return out;
  }

  template <class T, class F>
  BiPoly<T> map_coeffs(F&& f) const {
    BiPoly<T> out;
    for (const auto& [ij, c] : terms_) out.add_term(ij.first, ij.second, f(c));
    return out;
  }

 private:
  Terms terms_;
};

template <class C>
bool is_zero(const BiPoly<C>& p) {
  return p.is_zero();
}

/// poly + exp * e^{-2u} in symmetric variables (u, v), or
/// poly + exp * e^{-2xy} in raw variables (x, y).
template <class C>
struct GenFun {
  BiPoly<C> poly;
  BiPoly<C> exp;

  bool is_zero() const { return poly.is_zero() && exp.is_zero(); }

  GenFun& operator+=(const GenFun& o) {
    poly += o.poly;
    exp += o.exp;
    return *this;
  }
  GenFun& operator-=(const GenFun& o) {
    poly -= o.poly;
    exp -= o.exp;
    return *this;
  }
  friend GenFun operator+(GenFun a, const GenFun& b) { return a += b; }
  friend GenFun operator-(GenFun a, const GenFun& b) { return a -= b; }
  friend GenFun operator-(const GenFun& a) { return {-a.poly, -a.exp}; }
  friend GenFun operator*(const BiPoly<C>& p, const GenFun& f) { return {p * f.poly, p * f.exp}; }
  friend GenFun operator*(const C& s, const GenFun& f) { return {f.poly * s, f.exp * s}; }
  friend bool operator==(const GenFun& a, const GenFun& b) { return a.poly == b.poly && a.exp == b.exp; }

  /// d/du, acting on e^{-2u} as multiplication by -2.
  GenFun du() const { return {poly.derivative(0), exp.derivative(0) - exp * from_rational<C>(2)}; }
  GenFun dv() const { return {poly.derivative(1), exp.derivative(1)}; }
  GenFun integrate_v() const { return {poly.integrate_second(), exp.integrate_second()}; }

  template <class T, class F>
  GenFun<T> map_coeffs(F&& f) const {
    return {poly.template map_coeffs<T>(f), exp.template map_coeffs<T>(f)};
  }

  static GenFun polynomial(BiPoly<C> p) { return {std::move(p), {}}; }
  static GenFun exponential(BiPoly<C> p) { return {{}, std::move(p)}; }
};

/// The four functions (d+, d-, b+, b-) of a symmetry candidate in symmetric
/// variables. b- is the symmetric cofactor of the antisymmetric B- = (x - y) b-.
template <class C>
struct QuadSolution {
  GenFun<C> d_plus, d_minus, b_plus, b_minus;
  std::optional<Rational> epsilon;  // empty: bias kept symbolic

  bool is_zero() const { return d_plus.is_zero() && d_minus.is_zero() && b_plus.is_zero() && b_minus.is_zero(); }
  std::array<const GenFun<C>*, 4> parts() const { return {&d_plus, &d_minus, &b_plus, &b_minus}; }

  template <class T, class F>
  QuadSolution<T> map_coeffs(F&& f) const {
    return {d_plus.template map_coeffs<T>(f), d_minus.template map_coeffs<T>(f), b_plus.template map_coeffs<T>(f),
            b_minus.template map_coeffs<T>(f), epsilon};
  }
};

/// Left-hand sides of the four first-order PDEs in (u, v):
///   dv d+ - g du b+
///   dv d- + 2(eps + g v) b- + g(2 dv + v du) b-
///   dv b+ - g du d+ + 2 Delta^2 b-
///   [(v^2 - 4u) dv + v] b- + 2 b+ + [2 eps + g(2v + 2 dv + v du)] d-
template <class C>
std::array<GenFun<C>, 4> pde_residual(const QuadSolution<C>& q, const C& g, const C& delta, const C& eps) {
  using P = BiPoly<C>;
  const C one = from_rational<C>(1), two = from_rational<C>(2);
  const P v = P::term(0, 1, one), u = P::term(1, 0, one);
  const P gv = P::term(0, 1, g);
  const auto &dp = q.d_plus, &dm = q.d_minus, &bp = q.b_plus, &bm = q.b_minus;

  GenFun<C> r1 = dp.dv() - g * bp.du();
  GenFun<C> r2 = dm.dv() + (P::constant(two * eps) + gv * two) * bm + g * (two * bm.dv() + v * bm.du());
  GenFun<C> r3 = bp.dv() - g * dp.du() + (two * delta * delta) * bm;
  GenFun<C> r4 = (v * v - u * from_rational<C>(4)) * bm.dv() + v * bm + two * bp + (two * eps) * dm +
                 g * (two * (v * dm) + two * dm.dv() + v * dm.du());
  return {r1, r2, r3, r4};
}

/// Raised when a generating function cannot be written with a single parity
/// grade per entry.
struct RepresentationMiss : std::logic_error {
  using std::logic_error::logic_error;
};

/// Rewrites a symmetric polynomial in (x, y) in terms of u = xy, v = x + y.
template <class C>
BiPoly<C> symmetrize(const BiPoly<C>& p) {
  if (!(p == p.swapped())) throw std::invalid_argument("symmetrize: polynomial is not symmetric in x, y");
  BiPoly<C> rest = p, out;
  const C one = from_rational<C>(1);
  while (!rest.is_zero()) {
    // leading term in lex order with i >= j
    auto it = std::prev(rest.terms().end());
    auto [i, j] = it->first;
    C c = it->second;
    if (i < j) throw std::logic_error("symmetrize: inconsistent leading term");
    out.add_term(j, i - j, c);
    BiPoly<C> sub = BiPoly<C>::constant(c);
    for (int k = 0; k < j; ++k) sub = sub * BiPoly<C>::term(1, 1, one);
    for (int k = 0; k < i - j; ++k) sub = sub * (BiPoly<C>::term(1, 0, one) + BiPoly<C>::term(0, 1, one));
    rest -= sub;
  }
  return out;
}

/// u -> xy, v -> x + y.
template <class C>
BiPoly<C> back_substitute(const BiPoly<C>& p) {
  const C one = from_rational<C>(1);
  const BiPoly<C> u = BiPoly<C>::term(1, 1, one), v = BiPoly<C>::term(1, 0, one) + BiPoly<C>::term(0, 1, one);
  BiPoly<C> out;
  for (const auto& [ij, c] : p.terms()) {
    BiPoly<C> t = BiPoly<C>::constant(c);
    for (int k = 0; k < ij.first; ++k) t = t * u;
    for (int k = 0; k < ij.second; ++k) t = t * v;
    out += t;
  }
  return out;
}

/// Exact quotient p / (x - y); throws when p is not divisible.
template <class C>
BiPoly<C> divide_x_minus_y(const BiPoly<C>& p) {
  BiPoly<C> rest = p, quotient;
  while (!rest.is_zero()) {
    auto it = std::prev(rest.terms().end());  // largest x power
    auto [i, j] = it->first;
    C c = it->second;
    if (i == 0) throw std::invalid_argument("divide_x_minus_y: not divisible by (x - y)");
    quotient.add_term(i - 1, j, c);
    rest.add_term(i, j, -c);
    rest.add_term(i - 1, j + 1, c);
  }
  return quotient;
}

template <class C>
GenFun<C> symmetrize(const GenFun<C>& f) {
  return {symmetrize(f.poly), symmetrize(f.exp)};
}
template <class C>
GenFun<C> back_substitute(const GenFun<C>& f) {
  return {back_substitute(f.poly), back_substitute(f.exp)};
}

/// Raw generating function of P^s X: X(x, y) for s = 0, e^{-2xy} X(-x, y) for s = 1.
template <class C>
GenFun<C> generating_function(const GradedOp<C>& op) {
  BiPoly<C> body;
  for (const auto& [mn, c] : op.body().terms()) body.add_term(mn.first, mn.second, c);
  if (op.grade() == 0) return GenFun<C>::polynomial(body);
  return GenFun<C>::exponential(body.reflect_first());
}

/// Inverse of generating_function.
template <class C>
GradedOp<C> from_generating_function(const GenFun<C>& f) {
  if (!f.poly.is_zero() && !f.exp.is_zero())
    throw RepresentationMiss("generating function mixes polynomial and e^{-2xy} parts in one entry");
  NOOp<C> body;
  if (!f.exp.is_zero()) {
    const BiPoly<C> reflected = f.exp.reflect_first();
    for (const auto& [ij, c] : reflected.terms()) body.add_term(ij.first, ij.second, c);
    return GradedOp<C>(1, body);
  }
  for (const auto& [ij, c] : f.poly.terms()) body.add_term(ij.first, ij.second, c);
  return GradedOp<C>(0, body);
}

namespace detail {

/// Multiplies by Delta^k (k may be negative when divisible).
template <int N>
LaurentPoly<N> shift_delta(const LaurentPoly<N>& s, int k) {
  LaurentPoly<N> out;
  for (const auto& [e, c] : s.terms()) {
    auto f = e;
    f[1] += k;
    if (f[1] < 0) throw std::invalid_argument("delta_decompose: input not divisible by Delta");
    out.add_term(f, c);
  }
  return out;
}

template <int N>
bool even_in_delta(const LaurentPoly<N>& s) {
  for (const auto& [e, c] : s.terms())
    if (e[1] % 2) return false;
  return true;
}

template <int N>
GenFun<LaurentPoly<N>> shift_delta(const GenFun<LaurentPoly<N>>& f, int k) {
  return f.template map_coeffs<LaurentPoly<N>>([k](const LaurentPoly<N>& s) { return shift_delta(s, k); });
}

template <int N>
bool even_in_delta(const GenFun<LaurentPoly<N>>& f) {
  for (const auto* part : {&f.poly, &f.exp})
    for (const auto& [ij, c] : part->terms())
      if (!even_in_delta(c)) return false;
  return true;
}

}  // namespace detail

/// Splits the raw generating functions (A, B, C, D) of a block operator into
///   A = D+ - Delta D-,  D = D+ + Delta D-,  B = B+ + Delta B-,  C = B+ - Delta B-,
/// checks evenness in Delta and the x <-> y symmetries, factors B- = (x - y) b-
/// and returns the result in symmetric variables.
template <int N>
QuadSolution<LaurentPoly<N>> delta_decompose(const GenFun<LaurentPoly<N>>& a, const GenFun<LaurentPoly<N>>& b,
                                             const GenFun<LaurentPoly<N>>& c, const GenFun<LaurentPoly<N>>& d) {
  using K = LaurentPoly<N>;
  const K half(Rational(1, 2));
  GenFun<K> dp = half * (a + d);
  GenFun<K> dm = detail::shift_delta(half * (d - a), -1);
  GenFun<K> bp = half * (b + c);
  GenFun<K> bm = detail::shift_delta(half * (b - c), -1);
  for (const auto* f : {&dp, &dm, &bp, &bm})
    if (!detail::even_in_delta(*f)) throw std::invalid_argument("delta_decompose: components are not even in Delta");
  auto symmetric = [](const GenFun<K>& f) { return f.poly == f.poly.swapped() && f.exp == f.exp.swapped(); };
  if (!symmetric(dp) || !symmetric(dm) || !symmetric(bp))
    throw std::invalid_argument("delta_decompose: D+, D- or B+ is not symmetric in x, y");
  GenFun<K> bm_bar{divide_x_minus_y(bm.poly), divide_x_minus_y(bm.exp)};
  QuadSolution<K> out;
  out.d_plus = symmetrize(dp);
  out.d_minus = symmetrize(dm);
  out.b_plus = symmetrize(bp);
  out.b_minus = symmetrize(bm_bar);
  return out;
}

/// Generating-function tuple of a block operator.
template <int N>
QuadSolution<LaurentPoly<N>> blockop_to_quad(const BlockOp<LaurentPoly<N>>& j) {
  return delta_decompose(generating_function(j(0, 0)), generating_function(j(0, 1)), generating_function(j(1, 0)),
                         generating_function(j(1, 1)));
}

/// Reassembles the block operator from a tuple in symmetric variables.
template <int N>
BlockOp<LaurentPoly<N>> genfun_to_blockop(const QuadSolution<LaurentPoly<N>>& q) {
  using K = LaurentPoly<N>;
  const K one(1L);
  const BiPoly<K> x_minus_y = BiPoly<K>::term(1, 0, one) - BiPoly<K>::term(0, 1, one);
  GenFun<K> dp = back_substitute(q.d_plus), dm = detail::shift_delta(back_substitute(q.d_minus), 1);
  GenFun<K> bp = back_substitute(q.b_plus), bm = detail::shift_delta(x_minus_y * back_substitute(q.b_minus), 1);
  return BlockOp<K>(from_generating_function(dp - dm), from_generating_function(bp + bm),
                    from_generating_function(bp - bm), from_generating_function(dp + dm));
}

/// Tuple for J = H^k with g, Delta and the bias all symbolic (0 <= k <= 4).
inline QuadSolution<ExtScalar> gauge_solution(int k) {
  if (k < 0 || k > 4) throw std::out_of_range("gauge_solution: k must lie in 0..4");
  BlockOp<ExtScalar> h = build_hamiltonian<ExtScalar>(sym::g3(), sym::delta3(), sym::eps3());
  return blockop_to_quad(power(h, static_cast<unsigned>(k)));
}

}  // namespace aqrm
