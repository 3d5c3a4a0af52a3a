#pragma once

#include "aqrm/boson.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace aqrm {

/// Matrix of P^s X on Fock levels 0..N: entry (j,k) = <j| P^s X |k>.
inline Eigen::MatrixXd fock_matrix(const GradedOp<double>& op, int N) {
  if (N < 0) throw std::invalid_argument("fock_matrix: negative truncation");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N + 1, N + 1);
  // sqrt(k!/(k-n)!) * sqrt(j!/(k-n)!) with j = k - n + m
  std::vector<double> log_fact(2 * N + 2 + op.body().total_degree(), 0.0);
  for (std::size_t i = 1; i < log_fact.size(); ++i) log_fact[i] = log_fact[i - 1] + std::log(double(i));
  for (const auto& [mn, c] : op.body().terms()) {
    const auto [m, n] = mn;
    for (int k = n; k <= N; ++k) {
      int j = k - n + m;
      if (j > N) break;
      double w = std::exp(0.5 * (log_fact[k] + log_fact[j]) - log_fact[k - n]);
      out(j, k) += c * w;
    }
  }
  if (op.grade())
    for (int j = 1; j <= N; j += 2) out.row(j) *= -1.0;
  return out;
}

/// Requires every coefficient to be a constant (g and Delta already
/// substituted); throws std::logic_error otherwise.
inline Eigen::MatrixXd fock_matrix(const GradedOp<Scalar>& op, int N) {
  auto numeric = op.template map_coeffs<double>([](const Scalar& s) {
    if (!s.is_constant()) throw std::logic_error("fock_matrix: coefficient " + to_string(s) + " is still symbolic");
    return s.constant_term().get_d();
  });
  return fock_matrix(numeric, N);
}

template <class S>
GradedOp<double> evaluate(const GradedOp<S>& op, double g, double delta) {
  return op.template map_coeffs<double>([&](const S& s) { return s.eval(std::array<double, 2>{g, delta}); });
}

/// Exact Fock representation. Entry (j,k) equals reduced(j,k) * sqrt(j! k!),
/// so the irrational factor is carried implicitly and all arithmetic on the
/// reduced part is exact.
class ExactFockMatrix {
 public:
  explicit ExactFockMatrix(int N) : N_(N), reduced_((N + 1) * (N + 1), Rational(0)) {}

  ExactFockMatrix(const GradedOp<Rational>& op, int N) : ExactFockMatrix(N) {
    for (const auto& [mn, c] : op.body().terms()) {
      const auto [m, n] = mn;
      for (int k = n; k <= N; ++k) {
        int j = k - n + m;
        if (j > N) break;
        Rational w = c / factorial(k - n);
        if (op.grade() && j % 2) w = -w;
        at(j, k) += w;
      }
    }
  }

  int truncation() const { return N_; }
  const Rational& reduced(int j, int k) const { return reduced_[j * (N_ + 1) + k]; }
  Rational& at(int j, int k) { return reduced_[j * (N_ + 1) + k]; }

  /// sign(entry) * entry^2, exact.
  Rational signed_square(int j, int k) const {
    const Rational& r = reduced(j, k);
    Rational sq = r * r * factorial(j) * factorial(k);
    return sgn(r) < 0 ? Rational(-sq) : sq;
  }

  double value(int j, int k) const {
    return reduced(j, k).get_d() * std::sqrt(factorial(j).get_d() * factorial(k).get_d());
  }

  /// Truncated matrix product: sum over intermediate levels l <= N, with the
  /// sqrt(l!)^2 = l! factor made explicit.
  friend ExactFockMatrix operator*(const ExactFockMatrix& a, const ExactFockMatrix& b) {
    if (a.N_ != b.N_) throw std::invalid_argument("ExactFockMatrix: truncation mismatch");
    ExactFockMatrix out(a.N_);
    for (int j = 0; j <= a.N_; ++j)
      for (int l = 0; l <= a.N_; ++l) {
        const Rational& x = a.reduced(j, l);
        if (sgn(x) == 0) continue;
        Rational xl = x * factorial(l);
        for (int k = 0; k <= a.N_; ++k)
          if (sgn(b.reduced(l, k)) != 0) out.at(j, k) += xl * b.reduced(l, k);
      }
    return out;
  }

 private:
  int N_;
  std::vector<Rational> reduced_;
};

/// Applies the normal-ordered exponential :exp(mu a+ a): truncated at order n
/// (higher terms annihilate |n>) to |n> and returns the eigenvalue. The closed
/// form is (1 + mu)^n.
inline Rational normal_exp_check(const Rational& mu, int n) {
  if (n < 0) throw std::invalid_argument("normal_exp_check: negative Fock index");
  NOOp<Rational> series;
  Rational mu_k = 1;
  for (int k = 0; k <= n; ++k) {
    series.add_term(k, k, mu_k / factorial(k));
    mu_k *= mu;
  }
  ExactFockMatrix mat(GradedOp<Rational>(0, series), n);
  return mat.reduced(n, n) * factorial(n);
}

}  // namespace aqrm
