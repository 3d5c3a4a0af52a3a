#include "aqrm/catalog.hpp"

#include <algorithm>

namespace aqrm {

namespace {

using Op = NOOp<Scalar>;

Op cre(int k = 1) { return Op::create(k); }
Op ann(int k = 1) { return Op::annihilate(k); }
Op num(const Scalar& s) { return Op::constant(s); }
GradedOp<Scalar> parity_times(const Op& x) { return GradedOp<Scalar>(1, x); }

BlockOp<Scalar> j_zero() {
  return BlockOp<Scalar>(GradedOp<Scalar>::parity(), {}, {}, -GradedOp<Scalar>::parity());
}

BlockOp<Scalar> j_half(const ModelParams& p) {
  if (p.g.is_zero()) throw SingularParameter("j_catalog: g = 0 is singular at eps = +-1/2");
  const Scalar& g = p.g;
  Scalar two_eps(2 * p.epsilon);
  Scalar diag = g * Scalar(2) + p.delta * g.inverse();
  Op hop = cre() + ann();
  return BlockOp<Scalar>(parity_times((cre() - ann()) * two_eps + num(diag)), parity_times(hop),
                         parity_times(-hop),
                         parity_times((ann() - cre()) * two_eps - num(g * Scalar(4)) + num(diag)));
}

BlockOp<Scalar> j_one(const ModelParams& p) {
  const Scalar &g = p.g, &d = p.delta;
  const Scalar g2 = g * g, g3 = g2 * g;
  const Scalar two = Scalar(2), four = Scalar(4);
  const Scalar plus = two * g2 + d, minus = two * g2 - d;
  Op squares = cre(2) + ann(2);
  Op antisq = cre(2) - ann(2);
  Op hop = cre() + ann();
  Op drift = cre() - ann();
  Op j11 = squares * (two * g2) + drift * (two * g * plus) + num(plus * plus);
  Op j12 = antisq * (two * g2) + hop * (four * g3) + num(d);
  Op j21 = -(antisq * (two * g2)) - hop * (four * g3) + num(d);
  Op j22 = -(squares * (two * g2)) - drift * (two * g * minus) - num(minus * minus);
  return BlockOp<Scalar>(parity_times(j11), parity_times(j12), parity_times(j21), parity_times(j22));
}

}  // namespace

std::vector<Rational> supported_epsilons() {
  return {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
}

bool in_catalog(const Rational& eps) {
  auto all = supported_epsilons();
  return std::find(all.begin(), all.end(), eps) != all.end();
}

BlockOp<Scalar> j_catalog(const ModelParams& p, Basis basis) {
  const Rational& eps = p.epsilon;
  if (!in_catalog(eps))
    throw CatalogMiss("no catalog operator for eps = " + eps.get_str() + " (supported: 0, +-1/2, +-1)");
  BlockOp<Scalar> j;
  if (eps == 0) {
    j = j_zero();
  } else if (abs(eps) == Rational(1, 2)) {
    // the closed form is valid for both signs of the bias
    j = j_half(p);
  } else {
    ModelParams positive = p;
    positive.epsilon = 1;
    j = j_one(positive);
    if (sgn(eps) < 0) j = conjugate_sigma_z_parity(j);
  }
  return basis == Basis::transformed ? transform_basis(j) : j;
}

std::string catalog_normalization(const Rational& eps) {
  if (eps == 0) return "J = diag(P, -P): generating-function solution divided by Delta";
  if (abs(eps) == Rational(1, 2)) return "overall factor Delta removed; entries carry Delta/g";
  if (abs(eps) == 1)
    return "overall factor removed so that J11 has constant term (2g^2 + Delta)^2"
           + std::string(sgn(eps) < 0 ? "; conjugated by sigma_z (x) P from eps = 1" : "");
  return "";
}

Scalar jsquared_lambda(const Scalar& g, const Scalar& delta) {
  Scalar ginv = g.inverse();
  return Scalar(4) * g * g + delta * delta * ginv * ginv + Scalar(2);
}

std::vector<Scalar> jsquared_polynomial(const ModelParams& p) {
  const Rational& eps = p.epsilon;
  if (!in_catalog(eps)) throw CatalogMiss("no J^2 identity for eps = " + eps.get_str());
  if (eps == 0) return {Scalar(1)};
  if (abs(eps) == Rational(1, 2)) return {jsquared_lambda(p.g, p.delta), Scalar(4)};
  const Scalar &g = p.g, &d = p.delta;
  const Scalar g2 = g * g, g4 = g2 * g2, g6 = g4 * g2, d2 = d * d;
  Scalar a2 = Scalar(16) * g4;
  Scalar a1 = Scalar(8) * g2 * (Scalar(4) * g4 + Scalar(2) * g2 + d2);
  Scalar a0 = Scalar(16) * g6 * (g2 + Scalar(1)) + d2 * (Scalar(8) * g4 + Scalar(4) * g2 + Scalar(1)) + d2 * d2;
  return {a0, a1, a2};
}

IdentityReport verify_jsquared(const ModelParams& p) {
  BlockOp<Scalar> j = j_catalog(p);
  BlockOp<Scalar> h = build_hamiltonian(p);
  std::vector<Scalar> poly = jsquared_polynomial(p);
  IdentityReport report;
  if (p.epsilon == 0)
    report.claim = "J^2 = 1";
  else if (abs(p.epsilon) == Rational(1, 2))
    report.claim = "J^2 = 4H + lambda, lambda = 4g^2 + Delta^2/g^2 + 2";
  else
    report.claim =
        "J^2 = 16g^4 H^2 + 8g^2(4g^4 + 2g^2 + Delta^2) H + 16g^6(g^2 + 1) + Delta^2(8g^4 + 4g^2 + 1) + Delta^4";
  report.residual = j * j - polynomial_in(h, poly);
  return report;
}

NOOp<Scalar> expand_parity(const GradedOp<Scalar>& op, int order) {
  if (op.grade() == 0) return op.body();
  NOOp<Scalar> series;
  Rational c = 1;
  for (int k = 0; k <= order; ++k) {
    series.add_term(k, k, Scalar(c));
    c *= rational(-2, k + 1);
  }
  NOOp<Scalar> full = no_product(series, op.body());
  NOOp<Scalar> out;
  for (const auto& [mn, v] : full.terms())
    if (mn.first <= order) out.add_term(mn.first, mn.second, v);
  return out;
}

std::vector<RecurrenceResidual> recurrence_check(const BlockOp<Scalar>& j, const ModelParams& p, int bound) {
  const int order = bound + 1 + j.total_degree();
  const NOOp<Scalar> a = expand_parity(j(0, 0), order), b = expand_parity(j(0, 1), order),
                     c = expand_parity(j(1, 0), order), d = expand_parity(j(1, 1), order);
  const Scalar eps(p.epsilon);
  const Scalar& g = p.g;
  const Scalar two_delta = Scalar(2) * p.delta;

  auto at = [](const NOOp<Scalar>& x, int m, int n) { return (m < 0 || n < 0) ? Scalar() : x.coeff(m, n); };
  // g (y_{m-1,n} + y_{m,n-1} + (m+1) y_{m+1,n} - x_{m,n-1} - x_{m-1,n} - (n+1) x_{m,n+1})
  auto hop = [&](const NOOp<Scalar>& y, const NOOp<Scalar>& x, int m, int n) {
    Scalar s = at(y, m - 1, n) + at(y, m, n - 1) + Scalar(m + 1) * at(y, m + 1, n) - at(x, m, n - 1) -
               at(x, m - 1, n) - Scalar(n + 1) * at(x, m, n + 1);
    return g * s;
  };

  std::vector<RecurrenceResidual> out;
  for (int m = 0; m <= bound; ++m)
    for (int n = 0; n <= bound; ++n) {
      const Scalar diff(m - n);
      std::array<Scalar, 4> r{
          diff * at(a, m, n) + eps * (at(c, m, n) - at(b, m, n)) + hop(c, b, m, n),
          diff * at(d, m, n) + eps * (at(b, m, n) - at(c, m, n)) + hop(b, c, m, n),
          (diff + two_delta) * at(b, m, n) + eps * (at(d, m, n) - at(a, m, n)) + hop(d, a, m, n),
          (diff - two_delta) * at(c, m, n) + eps * (at(a, m, n) - at(d, m, n)) + hop(a, d, m, n),
      };
      for (int e = 0; e < 4; ++e)
        if (!r[e].is_zero()) out.push_back({e + 1, m, n, r[e]});
    }
  return out;
}

}  // namespace aqrm
