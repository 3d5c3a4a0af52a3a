#pragma once

#include "aqrm/boson.hpp"

#include <array>

namespace aqrm {

/// 2x2 matrix of graded boson operators acting on C^2 (x) Fock space,
/// in the basis where sigma_z is diagonal.
template <class S>
class BlockOp {
 public:
  using Entry = GradedOp<S>;

  BlockOp() = default;
  BlockOp(Entry e11, Entry e12, Entry e21, Entry e22)
      : entries_{std::move(e11), std::move(e12), std::move(e21), std::move(e22)} {}

  static BlockOp identity() {
    return BlockOp(Entry(NOOp<S>::identity()), {}, {}, Entry(NOOp<S>::identity()));
  }
  static BlockOp diagonal(const Entry& e) { return BlockOp(e, {}, {}, e); }

  /// Zero-based row/column.
  const Entry& operator()(int i, int j) const { return entries_[2 * i + j]; }
  Entry& operator()(int i, int j) { return entries_[2 * i + j]; }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  BlockOp& operator+=(const BlockOp& o) {
    for (int i = 0; i < 4; ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  BlockOp& operator-=(const BlockOp& o) {
    for (int i = 0; i < 4; ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  BlockOp& operator*=(const S& s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }

  friend BlockOp operator+(BlockOp a, const BlockOp& b) { return a += b; }
  friend BlockOp operator-(BlockOp a, const BlockOp& b) { return a -= b; }
  friend BlockOp operator-(BlockOp a) { return a *= from_rational<S>(-1); }
  friend BlockOp operator*(BlockOp a, const S& s) { return a *= s; }
  friend BlockOp operator*(const S& s, BlockOp a) { return a *= s; }
  friend BlockOp operator*(const BlockOp& a, const BlockOp& b) {
    BlockOp out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(i, j) = graded_product(a(i, 0), b(0, j)) + graded_product(a(i, 1), b(1, j));
    return out;
  }
  friend bool operator==(const BlockOp& a, const BlockOp& b) { return a.entries_ == b.entries_; }

  template <class T, class F>
  BlockOp<T> map_coeffs(F&& f) const {
    BlockOp<T> out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(i, j) = (*this)(i, j).template map_coeffs<T>(f);
    return out;
  }

  /// Largest m + n over all entries.
  int total_degree() const {
    int d = 0;
    for (const auto& e : entries_) d = std::max(d, e.body().total_degree());
    return d;
  }

 private:
  std::array<Entry, 4> entries_;
};

template <class S>
BlockOp<S> commutator(const BlockOp<S>& x, const BlockOp<S>& y) {
  return x * y - y * x;
}

template <class S>
BlockOp<S> adjoint(const BlockOp<S>& x) {
  return BlockOp<S>(adjoint(x(0, 0)), adjoint(x(1, 0)), adjoint(x(0, 1)), adjoint(x(1, 1)));
}

template <class S>
BlockOp<S> power(const BlockOp<S>& x, unsigned k) {
  BlockOp<S> out = BlockOp<S>::identity();
  for (unsigned i = 0; i < k; ++i) out = out * x;
  return out;
}

/// U X U^{-1} with U = [[1,1],[1,-1]]/sqrt(2); U is its own inverse.
template <class S>
BlockOp<S> transform_basis(const BlockOp<S>& x) {
  const S half = from_rational<S>(Rational(1, 2));
  const auto &a = x(0, 0), &b = x(0, 1), &c = x(1, 0), &d = x(1, 1);
  return BlockOp<S>((a + b + c + d) * half, (a - b + c - d) * half, (a + b - c - d) * half, (a - b - c + d) * half);
}

/// sigma_x X sigma_x.
template <class S>
BlockOp<S> conjugate_sigma_x(const BlockOp<S>& x) {
  return BlockOp<S>(x(1, 1), x(1, 0), x(0, 1), x(0, 0));
}

/// (sigma_z (x) P) X (sigma_z (x) P): maps a -> -a and negates off-diagonal blocks.
template <class S>
BlockOp<S> conjugate_sigma_z_parity(const BlockOp<S>& x) {
  BlockOp<S> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      GradedOp<S> e(x(i, j).grade(), sigma_flip(x(i, j).body()));
      out(i, j) = i == j ? e : -e;
    }
  return out;
}

/// Model parameters with omega = 1. g and Delta are symbolic or exact
/// constants; the bias is always an exact rational.
struct ModelParams {
  Scalar g = sym::g();
  Scalar delta = sym::delta();
  Rational epsilon = 0;

  static ModelParams symbolic(const Rational& eps) { return {sym::g(), sym::delta(), eps}; }
  static ModelParams exact(const Rational& g, const Rational& delta, const Rational& eps) {
    return {Scalar(g), Scalar(delta), eps};
  }
  bool is_symbolic() const { return !g.is_constant() || !delta.is_constant(); }
};

/// H = [[a+a + Delta, g(a + a+) + eps], [g(a + a+) + eps, a+a - Delta]].
template <class S>
BlockOp<S> build_hamiltonian(const S& g, const S& delta, const S& eps) {
  using Op = NOOp<S>;
  Op coupling = Op::annihilate() * g + Op::create() * g + Op::constant(eps);
  return BlockOp<S>(Op::number() + Op::constant(delta), coupling, coupling, Op::number() - Op::constant(delta));
}

inline BlockOp<Scalar> build_hamiltonian(const ModelParams& p) {
  return build_hamiltonian<Scalar>(p.g, p.delta, Scalar(p.epsilon));
}

/// Tests sigma_x X(Delta) sigma_x == sign * X(-Delta) exactly.
template <class S>
bool check_delta_flip(const BlockOp<S>& x, int sign) {
  BlockOp<S> flipped = x.template map_coeffs<S>([](const S& s) { return flip_delta(s); });
  if (sign < 0) flipped = -flipped;
  return conjugate_sigma_x(x) == flipped;
}

}  // namespace aqrm
