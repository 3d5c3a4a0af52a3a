#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aqrm/spectrum.hpp"

#include <random>
#include <sstream>

using namespace aqrm;

namespace {

double lambda_at(double g, double d) { return 4 * g * g + d * d / (g * g) + 2; }

double min_gap(const ScanResult& r) {
  double out = 1e300;
  for (const auto& m : r.min_gaps) out = std::min(out, m.gap);
  return out;
}

}  // namespace

TEST_CASE("eigensolve small cases") {
  Eigen::MatrixXd m = Eigen::Vector3d(3, 1, 2).asDiagonal();
  auto es = eigensolve(m);
  CHECK(es.values(0) == doctest::Approx(1));
  CHECK(es.values(1) == doctest::Approx(2));
  CHECK(es.values(2) == doctest::Approx(3));

  // decoupled qubit at g = 0: levels n +- Delta
  auto h = truncated_hamiltonian({0, 0.7, 0}, 5).matrix;
  auto e = eigensolve(h, false).values;
  CHECK(e(0) == doctest::Approx(-0.7));
  CHECK(e(1) == doctest::Approx(0.3));
  CHECK(e(2) == doctest::Approx(0.7));

  // N = 0 leaves the 2x2 qubit block
  auto q = eigensolve(truncated_hamiltonian({0.3, 0.7, 0.5}, 0).matrix, false).values;
  CHECK(q(0) == doctest::Approx(-std::sqrt(0.49 + 0.25)).epsilon(1e-14));
  CHECK(q(1) == doctest::Approx(std::sqrt(0.49 + 0.25)).epsilon(1e-14));

  Eigen::Matrix2d bad;
  bad << 1, 2, 3, 4;
  CHECK_THROWS_AS(eigensolve(bad), std::invalid_argument);
  CHECK_THROWS_AS(eigensolve(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("eigensolve backward error on random symmetric matrices") {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (int n : {1, 5, 40, 150, 400}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
    a = (a + a.transpose()).eval();
    auto es = eigensolve(a);
    double scale = a.norm();
    double backward = (a * es.vectors - es.vectors * es.values.asDiagonal()).norm() / scale;
    double orth = (es.vectors.transpose() * es.vectors - Eigen::MatrixXd::Identity(n, n)).norm();
    CHECK(backward < 1e-12 * n);
    CHECK(orth < 1e-12 * n);
    for (int k = 1; k < n; ++k) CHECK(es.values(k - 1) <= es.values(k));
  }
}

TEST_CASE("convergence certificate") {
  auto all = convergence_certificate({0.8, 0.7, 0.5}, 60, 8);
  CHECK(std::all_of(all.begin(), all.end(), [](bool b) { return b; }));
  auto edge = convergence_certificate({0.8, 0.7, 0.5}, 20, 21);
  CHECK_FALSE(edge.back());
  auto free = convergence_certificate({0, 0.7, 0.5}, 12, 10);
  CHECK(std::all_of(free.begin(), free.end(), [](bool b) { return b; }));
  CHECK_THROWS_AS(convergence_certificate({0.8, 0.7, 0.5}, 3, 9), std::invalid_argument);
}

TEST_CASE("crossing scan separates integer and generic bias") {
  auto half = crossing_scan(0.5, 0.7, 0.05, 1.2, 120, 50, 6);
  auto off = crossing_scan(0.45, 0.7, 0.05, 1.2, 120, 50, 6);
  CHECK(half.points.size() == 121);
  CHECK(half.min_gaps.size() == 5);
  CHECK(half.unconverged_levels.empty());
  CHECK(half.has_crossing());
  CHECK_FALSE(off.has_crossing(1e-3));
  CHECK(min_gap(half) * 1e3 < min_gap(off));
  for (const auto& m : half.min_gaps) CHECK(m.gap <= m.grid_gap);

  // threaded assembly is deterministic
  auto again = crossing_scan(0.5, 0.7, 0.05, 1.2, 120, 50, 6);
  for (std::size_t i = 0; i < half.points.size(); ++i) CHECK(half.points[i].energies == again.points[i].energies);

  std::ostringstream csv;
  write_scan_csv(csv, off);
  const std::string text = csv.str();
  CHECK(text.substr(0, text.find('\n')) == "g,eps,delta,level,energy,certified");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 121 * 6);

  CHECK_THROWS_AS(crossing_scan(0.5, 0.7, 1.0, 1.0, 10, 20, 4), std::invalid_argument);
  CHECK_THROWS_AS(crossing_scan(0.5, 0.7, 0.1, 1.0, 0, 20, 4), std::invalid_argument);
}

TEST_CASE("joint eigenvalue check at eps = 1/2") {
  auto r = joint_eigen_check({0.8, 0.7, 0.5}, 80, 12);
  CHECK(r.lambda == doctest::Approx(lambda_at(0.8, 0.7)));
  CHECK(r.lambda == doctest::Approx(5.325625));
  CHECK(r.passed());
  CHECK(r.positive > 0);
  CHECK(r.negative > 0);
  CHECK(r.positive + r.negative == 12);
  for (const auto& l : r.levels) CHECK(std::abs(l.mu * l.mu - l.target) <= 1e-8 * (1 + std::abs(l.target)));

  auto neg = joint_eigen_check({0.8, 0.7, -0.5}, 80, 12);
  CHECK(neg.passed());
  CHECK_THROWS_AS(joint_eigen_check({0.8, 0.7, 0.3}, 40, 4), std::invalid_argument);
}

TEST_CASE("discovery finds the catalog operators") {
  auto half = discover_symmetry({0.8, 0.7, 0.5}, 1, 40);
  CHECK(half.dimension == 1);
  CHECK_FALSE(half.ambiguous);
  REQUIRE(half.catalog_error);
  CHECK(*half.catalog_error < 1e-9);
  CHECK(*half.catalog_angle < 1e-9);
  CHECK(half.exact_verified);

  auto one = discover_symmetry({0.8, 0.7, 1.0}, 2, 40);
  CHECK(one.dimension == 1);
  REQUIRE(one.catalog_error);
  CHECK(*one.catalog_error < 1e-9);
  CHECK(one.exact_verified);

  auto zero = discover_symmetry({0.8, 0.7, 0.0}, 0, 40);
  CHECK(zero.dimension == 1);
  CHECK(zero.exact_verified);

  for (double e : {0.3, 0.45}) {
    auto none = discover_symmetry({0.8, 0.7, e}, 1, 40);
    CHECK(none.dimension == 0);
    CHECK_FALSE(none.ambiguous);
    CHECK(none.vectors.empty());
  }

  auto beyond = discover_symmetry({0.8, 0.7, 1.5}, 3, 40);
  CHECK(beyond.dimension == 1);
  CHECK_FALSE(beyond.catalog_error);
  CHECK(beyond.residuals[0] < 1e-12);

  CHECK(discovery_basis(1).size() == 12);
  CHECK_THROWS_AS(discover_symmetry({0.8, 0.7, 0.5}, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(discover_symmetry({0.8, 0.7, 0.5}, -1, 40), std::invalid_argument);

  json j = to_json(half);
  CHECK(j["dimension"] == 1);
  CHECK(j.contains("exact_operator"));
}

TEST_CASE("J^2 fits reproduce the symbolic coefficients") {
  const int N = 60;
  SUBCASE("eps = 1/2") {
    NumericParams p{0.8, 0.7, 0.5};
    auto f = fit_jsquared_poly(block_matrix(*catalog_operator(p), N), truncated_hamiltonian(p, N).matrix, N, 1,
                               interior_bound(N, 1, 1));
    CHECK(f.residual < 1e-9);
    CHECK(std::abs(f.alpha(1) - 4) < 1e-9);
    CHECK(std::abs(f.alpha(0) - 5.325625) < 1e-9);
    CHECK_FALSE(f.ill_conditioned);
  }
  SUBCASE("eps = 1") {
    NumericParams p{0.8, 0.7, 1.0};
    auto f = fit_jsquared_poly(block_matrix(*catalog_operator(p), N), truncated_hamiltonian(p, N).matrix, N, 2,
                               interior_bound(N, 2, 2));
    auto a = catalog_alpha(p);
    REQUIRE(a.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(f.alpha(i) - a[i]) <= 1e-8 * std::abs(a[i]));
    CHECK(a[2] == doctest::Approx(16 * std::pow(0.8, 4)));
  }
  SUBCASE("eps = 3/2 from discovery") {
    NumericParams p{0.8, 0.7, 1.5};
    auto d = discover_symmetry(p, 3, N);
    REQUIRE(d.dimension == 1);
    auto J = block_matrix(assemble_ansatz(d.basis, d.vectors[0]), N);
    auto f = fit_jsquared_poly(J, truncated_hamiltonian(p, N).matrix, N, 3, interior_bound(N, 3, 3));
    CHECK(f.residual < 1e-7);
    auto under = fit_jsquared_poly(J, truncated_hamiltonian(p, N).matrix, N, 2, interior_bound(N, 3, 3));
    CHECK(under.residual > 1e-4);
  }
  CHECK_THROWS_AS(catalog_alpha({0.8, 0.7, 0.3}), CatalogMiss);
}

TEST_CASE("output formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2) == "2");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}
