#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aqrm/derive.hpp"
#include "random_ops.hpp"

#include <chrono>

using namespace aqrm;

namespace {

const Scalar g = sym::g(), d = sym::delta();

bool solves(const QuadSolution<Scalar>& q) {
  for (const auto& r : pde_residual(q, g, d, Scalar(*q.epsilon)))
    if (!r.is_zero()) return false;
  return true;
}

// Flattened coefficients of an ExtScalar tuple, for rank computations.
std::map<std::tuple<int, int, int, int>, ExtScalar> flatten(const QuadSolution<ExtScalar>& q) {
  std::map<std::tuple<int, int, int, int>, ExtScalar> out;
  auto parts = q.parts();
  for (int i = 0; i < 4; ++i) {
    for (const auto& [ij, c] : parts[i]->poly.terms()) out[{i, 0, ij.first, ij.second}] = c;
    for (const auto& [ij, c] : parts[i]->exp.terms()) out[{i, 1, ij.first, ij.second}] = c;
  }
  return out;
}

int tuple_rank(const std::vector<QuadSolution<ExtScalar>>& tuples) {
  std::map<std::tuple<int, int, int, int>, int> index;
  std::vector<std::map<std::tuple<int, int, int, int>, ExtScalar>> flat;
  for (const auto& q : tuples) {
    flat.push_back(flatten(q));
    for (const auto& [k, c] : flat.back()) index.try_emplace(k, static_cast<int>(index.size()));
  }
  std::vector<std::vector<RatFunc>> rows;
  for (const auto& f : flat) {
    std::vector<RatFunc> row(index.size());
    for (const auto& [k, c] : f) row[index[k]] = RatFunc(c);
    rows.push_back(row);
  }
  return eliminate(rows, static_cast<int>(index.size())).rank();
}

bool block_proportional(const BlockOp<Scalar>& x, const BlockOp<Scalar>& y) {
  if (x.is_zero() || y.is_zero()) return false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!y(i, j).is_zero()) {
        const auto& [mn, cy] = *y(i, j).body().terms().begin();
        Scalar cx = x(i, j).body().coeff(mn.first, mn.second);
        return !cx.is_zero() && (x * cy - y * cx).is_zero();
      }
  return false;
}

void check_report(const DerivationReport& r, const std::vector<Rational>& roots) {
  CHECK(r.condition.roots == roots);
  REQUIRE(r.solutions.size() == roots.size());
  for (const auto& s : r.solutions) {
    CAPTURE(s.epsilon.get_str());
    CHECK(solves(s.tuple));
    CHECK(s.commutes);
    CHECK(s.matches_reference);
    CHECK(proportional(s.tuple, reference_tuple(s.epsilon)));
    CHECK(block_proportional(genfun_to_blockop(s.tuple), j_catalog(ModelParams::symbolic(s.epsilon))));
  }
  for (const auto& q : r.gauge_basis)
    for (const auto& res : pde_residual(q, sym::g3(), sym::delta3(), sym::eps3())) CHECK(res.is_zero());
}

}  // namespace

TEST_CASE("the pipeline solves three of the four equations identically") {
  std::mt19937 rng(2);
  for (Sector sector : {Sector::exponential, Sector::polynomial})
    for (int M = 0; M <= 2; ++M) {
      Ansatz a{M, 3, sector};
      std::vector<Scalar> x(a.size());
      for (auto& c : x) c = aqrm::testing::random_scalar(rng, 2);
      const Scalar eps(Rational(2, 3));
      QuadSolution<Scalar> q = ansatz_tuple(a, x, g, d, eps);
      auto r = pde_residual(q, g, d, eps);
      CHECK(r[0].is_zero());
      CHECK(r[1].is_zero());
      CHECK(r[3].is_zero());
      q.epsilon = Rational(2, 3);
      std::vector<Scalar> back;
      REQUIRE(ansatz_unknowns(a, q, Rational(2, 3), back));
      CHECK(back == x);
    }
}

TEST_CASE("reference tuples solve the equations") {
  for (const Rational& eps : supported_epsilons()) {
    CAPTURE(eps.get_str());
    QuadSolution<Scalar> q = reference_tuple(eps);
    CHECK(solves(q));
    BlockOp<Scalar> op = genfun_to_blockop(q);
    CHECK(commutator(op, build_hamiltonian(ModelParams::symbolic(eps))).is_zero());
  }
  CHECK_THROWS_AS(reference_tuple(Rational(3, 2)), CatalogMiss);
  CHECK_FALSE(proportional(reference_tuple(1), reference_tuple(Rational(1, 2))));
  RatFunc factor;
  QuadSolution<Scalar> scaled = reference_tuple(0);
  scaled = scaled.map_coeffs<Scalar>([](const Scalar& s) { return s * Scalar(-3) * sym::g(); });
  REQUIRE(proportional(scaled, reference_tuple(0), &factor));
  CHECK(factor == RatFunc(sym::g3() * Rational(-3)));
}

TEST_CASE("M = 0: alpha eps = 0") {
  DerivationReport r = derive_symmetry(0);
  check_report(r, {Rational(0)});
  CHECK(r.condition.text == "alpha * eps = 0");
  CHECK(r.gauge_dimension == 3);
  CHECK(r.bound == 2);
  // gauge span = {1, H, H^2}
  std::vector<QuadSolution<ExtScalar>> all = r.gauge_basis;
  for (int k = 0; k <= 2; ++k) all.push_back(gauge_solution(k));
  CHECK(tuple_rank(all) == 3);
  CHECK(genfun_to_blockop(r.solutions[0].tuple) == j_catalog(ModelParams::symbolic(0)) * (-d));
}

TEST_CASE("M = 1: eps = +-1/2") {
  DerivationReport r = derive_symmetry(1);
  check_report(r, {Rational(-1, 2), Rational(1, 2)});
  CHECK(r.condition.polynomial == UniPoly{Rational(-1, 4), 0, 1});
  CHECK(r.gauge_dimension == 4);
  // the bias-0 solutions at this level are all induced by diag(P, -P) H^k
  for (const auto& c : r.candidates)
    if (c.epsilon == 0) CHECK(c.fresh() == 0);
}

TEST_CASE("M = 2: eps = +-1") {
  auto start = std::chrono::steady_clock::now();
  DerivationReport r = derive_symmetry(2);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 60);
  check_report(r, {Rational(-1), Rational(1)});
  CHECK(r.condition.text == "alpha * (eps^2 - 1) = 0");
  CHECK(r.gauge_dimension == 5);
  // bias 1/2 reappears only through J H
  for (const auto& c : r.candidates)
    if (abs(c.epsilon) == Rational(1, 2)) {
      CHECK(c.nullity == 2);
      CHECK(c.fresh() == 0);
    }
}

TEST_CASE("a basis without room for new solutions is reported as exhausted") {
  CHECK_THROWS_AS(derive_symmetry(2, 0), BoundExhausted);
  CHECK_THROWS_AS(derive_symmetry(-1), std::invalid_argument);
}

TEST_CASE("report json") {
  json js = to_json(derive_symmetry(1));
  CHECK(js["M"] == 1);
  CHECK(js["condition"]["roots"] == json::array({"-1/2", "1/2"}));
  CHECK(js["solutions"].size() == 2);
  CHECK(js["solutions"][0]["commutes_with_H"] == true);
  CHECK(quad_from_json(js["solutions"][1]["tuple"]).epsilon == Rational(1, 2));
}
