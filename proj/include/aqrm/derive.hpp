#pragma once

#include "aqrm/catalog.hpp"
#include "aqrm/genfun.hpp"
#include "aqrm/json_io.hpp"
#include "aqrm/ratfunc.hpp"

#include <stdexcept>
#include <vector>

namespace aqrm {

/// Which half of the function basis the unknowns live in: u^j or u^j e^{-2u}.
/// The operators in both halves of the basis decouple in every equation.
enum class Sector { polynomial, exponential };

/// b- = sum_{k<M} f_k(u) v^k, with f_k, h1 = d-(u, 0) and h2 = d+(u, 0) of
/// u-degree at most `bound`. Unknowns are ordered f_0, ..., f_{M-1}, h1, h2,
/// each by ascending u power.
struct Ansatz {
  int M = 0;
  int bound = 2;
  Sector sector = Sector::exponential;

  int block() const { return bound + 1; }
  int size() const { return (M + 2) * block(); }
  int f_index(int k, int j) const { return k * block() + j; }
  int h1_index(int j) const { return M * block() + j; }
  int h2_index(int j) const { return (M + 1) * block() + j; }
};

/// Runs the integration pipeline: d- from the second PDE and h1, b+ from the
/// fourth, d+ from the first and h2. The third PDE is left as the only
/// constraint.
template <class C>
QuadSolution<C> ansatz_tuple(const Ansatz& a, const std::vector<C>& x, const C& g, const C& delta, const C& eps) {
  (void)delta;
  using P = BiPoly<C>;
  P bm, h1, h2;
  for (int j = 0; j <= a.bound; ++j) {
    for (int k = 0; k < a.M; ++k) bm.add_term(j, k, x[a.f_index(k, j)]);
    h1.add_term(j, 0, x[a.h1_index(j)]);
    h2.add_term(j, 0, x[a.h2_index(j)]);
  }
  auto wrap = [&](P p) {
    return a.sector == Sector::exponential ? GenFun<C>::exponential(std::move(p)) : GenFun<C>::polynomial(std::move(p));
  };
  const C one = from_rational<C>(1), two = from_rational<C>(2), half = from_rational<C>(Rational(1, 2));
  const P u = P::term(1, 0, one), v = P::term(0, 1, one);

  QuadSolution<C> q;
  q.b_minus = wrap(bm);
  const GenFun<C>& b = q.b_minus;
  GenFun<C> rhs = -((P::constant(two * eps) + v * (two * g)) * b) - g * (two * b.dv() + v * b.du());
  q.d_minus = rhs.integrate_v() + wrap(h1);
  const GenFun<C>& d = q.d_minus;
  q.b_plus = -half * ((v * v - u * from_rational<C>(4)) * b.dv() + v * b + (two * eps) * d +
                      g * (two * (v * d) + two * d.dv() + v * d.du()));
  q.d_plus = (g * q.b_plus.du()).integrate_v() + wrap(h2);
  return q;
}

/// Reads the ansatz unknowns back from a tuple; false when the tuple is not
/// of the ansatz form.
bool ansatz_unknowns(const Ansatz& a, const QuadSolution<Scalar>& q, const Rational& eps, std::vector<Scalar>& x);

struct BoundExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EpsilonCondition {
  UniPoly polynomial;  // vanishes exactly at the admissible biases
  std::vector<Rational> roots;
  std::string text;
};

/// Outcome at one candidate bias.
struct CandidateBias {
  Rational epsilon;
  int nullity = 0;       // nontrivial-sector solutions at this bias
  int induced_rank = 0;  // of those, spanned by lower-ansatz solutions times powers of H
  int fresh() const { return nullity - induced_rank; }
};

struct DerivedSolution {
  Rational epsilon;
  QuadSolution<Scalar> tuple;
  BlockOp<Scalar> op;
  bool commutes = false;
  bool matches_reference = false;
  std::string normalization;  // reference tuple = factor * derived tuple
};

struct DerivationReport {
  int M = 0;
  int bound = 0;
  int gauge_dimension = 0;
  std::vector<QuadSolution<ExtScalar>> gauge_basis;
  EpsilonCondition condition;
  std::vector<CandidateBias> candidates;
  std::vector<DerivedSolution> solutions;
};

/// Finite-ansatz derivation with the bias kept symbolic. bound < 0 selects
/// the default M + 2. Throws BoundExhausted when no bias admits a solution
/// beyond the gauge and induced ones.
DerivationReport derive_symmetry(int M, int bound = -1);

/// Nullspace of the remaining constraint at a fixed bias, as polynomial
/// vectors in (g, Delta).
std::vector<std::vector<Scalar>> ansatz_nullspace(const Ansatz& a, const Rational& eps);

/// Known nontrivial tuples for eps in {0, +-1/2, +-1}. The bias-1 family
/// is multiplied through by Delta^2 so that every coefficient is polynomial
/// in Delta.
QuadSolution<Scalar> reference_tuple(const Rational& eps);

/// True when a = c b for a nonzero scalar c; `factor` receives c.
bool proportional(const QuadSolution<Scalar>& a, const QuadSolution<Scalar>& b, RatFunc* factor = nullptr);

json to_json(const DerivationReport& r);

}  // namespace aqrm
