// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include "aqrm/derive.hpp"
#include "aqrm/spectrum.hpp"
#include "random_ops.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace aqrm;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

bool run(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.note << " [exception: " << e.what() << "]";
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(s < limit_s, "runtime over " + std::to_string(limit_s) + " s");
  std::printf("criterion %d %s  %s (%.2f s)%s\n", id, o.ok ? "PASS" : "FAIL", title.c_str(), s, o.note.str().c_str());
  std::fflush(stdout);
  return o.ok;
}

const std::vector<Rational> kCore{0, Rational(1, 2), 1};

bool all_zero(const std::array<GenFun<Scalar>, 4>& r) {
  for (const auto& x : r)
    if (!x.is_zero()) return false;
  return true;
}

bool all_zero(const std::array<GenFun<ExtScalar>, 4>& r) {
  for (const auto& x : r)
    if (!x.is_zero()) return false;
  return true;
}

double min_gap(const ScanResult& r) {
  double out = 1e300;
  for (const auto& m : r.min_gaps) out = std::min(out, m.gap);
  return out;
}

}  // namespace

int main() {
  bool all = true;

  all &= run(1, "exact commutation with symbolic g, Delta", 3, [](Outcome& o) {
    for (const Rational& e : kCore) {
      ModelParams p = ModelParams::symbolic(e);
      o.require(commutator(j_catalog(p), build_hamiltonian(p)).is_zero(), "[J, H] at eps = " + e.get_str());
    }
  });

  all &= run(2, "exact J^2 identities", 5, [](Outcome& o) {
    for (const Rational& e : kCore) {
      IdentityReport r = verify_jsquared(ModelParams::symbolic(e));
      o.require(r.holds(), r.claim);
    }
    Scalar lambda = jsquared_lambda(Scalar(Rational(4, 5)), Scalar(Rational(7, 10)));
    o.require(lambda.constant_term() == rational(213025, 40000), "lambda(4/5, 7/10) = 5.325625");
    o.note << " lambda(4/5, 7/10) = " << lambda.constant_term().get_str();
  });

  all &= run(3, "generating-function PDE residuals", 5, [](Outcome& o) {
    for (int k = 0; k <= 4; ++k)
      o.require(all_zero(pde_residual(gauge_solution(k), sym::g3(), sym::delta3(), sym::eps3())),
                "gauge tuple " + std::to_string(k));
    for (const Rational& e : {Rational(0), Rational(1, 2), Rational(-1, 2), Rational(1)}) {
      QuadSolution<Scalar> q = reference_tuple(e);
      o.require(all_zero(pde_residual(q, sym::g(), sym::delta(), Scalar(e))), "tuple at eps = " + e.get_str());
    }
  });

  all &= run(4, "derivation reproduces the quantization conditions", 60, [](Outcome& o) {
    const std::vector<std::string> texts{"alpha * eps = 0", "alpha * (eps^2 - 1/4) = 0", "alpha * (eps^2 - 1) = 0"};
    const std::vector<std::vector<Rational>> roots{{0}, {Rational(-1, 2), Rational(1, 2)}, {-1, 1}};
    for (int M = 0; M <= 2; ++M) {
      DerivationReport r = derive_symmetry(M);
      o.require(r.condition.text == texts[M], "condition at M = " + std::to_string(M) + ": " + r.condition.text);
      std::vector<Rational> found;
      for (const auto& s : r.solutions) {
        found.push_back(s.epsilon);
        o.require(s.commutes && s.matches_reference, "solution at eps = " + s.epsilon.get_str());
      }
      o.require(found == roots[M], "solution biases at M = " + std::to_string(M));
      o.note << " M=" << M << ": " << r.condition.text << ";";
    }
  });

  all &= run(5, "numeric discovery at g = 0.8, Delta = 0.7, N = 40", 120, [](Outcome& o) {
    for (auto [e, D] : {std::pair{0.5, 1}, std::pair{1.0, 2}}) {
      DiscoveryResult r = discover_symmetry({0.8, 0.7, e}, D, 40);
      o.require(r.dimension == 1 && !r.ambiguous, "dimension 1 at eps = " + format_double(e));
      o.require(r.catalog_error && *r.catalog_error < 1e-9, "catalog match at eps = " + format_double(e));
      if (r.catalog_error) o.note << " eps=" << e << " deviation " << *r.catalog_error << ";";
    }
    for (double e : {0.3, 0.45})
      for (int D : {1, 2}) {
        DiscoveryResult r = discover_symmetry({0.8, 0.7, e}, D, 40);
        o.require(r.dimension == 0 && !r.ambiguous,
                  "dimension 0 at eps = " + format_double(e) + ", D = " + std::to_string(D));
      }
  });

  all &= run(6, "level crossings at eps in {0, 1/2, 1}, none at generic eps", 300, [](Outcome& o) {
    double worst_crossing = 0, best_generic = 1e300;
    for (double e : {0.0, 0.5, 1.0}) {
      ScanResult r = crossing_scan(e, 0.7, 0.05, 1.2, 400, 60, 8);
      o.require(min_gap(r) < 1e-6, "crossing at eps = " + format_double(e));
      o.require(r.unconverged_levels.empty(), "certified levels at eps = " + format_double(e));
      worst_crossing = std::max(worst_crossing, min_gap(r));
    }
    for (double e : {0.2, 0.45, 0.8}) {
      ScanResult r = crossing_scan(e, 0.7, 0.05, 1.2, 400, 60, 8);
      o.require(min_gap(r) > 1e-3, "no crossing at eps = " + format_double(e));
      o.require(r.unconverged_levels.empty(), "certified levels at eps = " + format_double(e));
      best_generic = std::min(best_generic, min_gap(r));
    }
    o.note << " largest crossing gap " << worst_crossing << ", smallest generic gap " << best_generic;
  });

  all &= run(7, "J eigenvalues pair with energies at eps = 1/2", 60, [](Outcome& o) {
    JointReport r = joint_eigen_check({0.8, 0.7, 0.5}, 80, 12);
    o.require(r.passed(), "mu^2 = 4E + lambda on certified levels");
    o.require(r.positive + r.negative == 12, "all 12 levels certified");
    o.note << " sectors +" << r.positive << " / -" << r.negative;
    if (r.negative_target) o.note << ", some 4E + lambda < 0";
  });

  all &= run(8, "normal products against exact Fock matrices", 30, [](Outcome& o) {
    std::mt19937 rng(8);
    const int N = 24;
    auto to_rational = [](const GradedOp<Scalar>& op) {
      return op.map_coeffs<Rational>([](const Scalar& s) { return s.constant_term(); });
    };
    int agreeing = 0;
    for (int trial = 0; trial < 100; ++trial) {
      GradedOp<Scalar> x(trial % 2, testing::random_noop(rng, 4, 4, true)),
          y((trial / 2) % 2, testing::random_noop(rng, 4, 4, true));
      ExactFockMatrix lhs(to_rational(x * y), N);
      ExactFockMatrix rhs = ExactFockMatrix(to_rational(x), N) * ExactFockMatrix(to_rational(y), N);
      int block = N - x.body().total_degree() - y.body().total_degree();
      bool same = true;
      for (int j = 0; j <= block && same; ++j)
        for (int k = 0; k <= block && same; ++k) same = lhs.signed_square(j, k) == rhs.signed_square(j, k);
      agreeing += same;
    }
    o.require(agreeing == 100, std::to_string(agreeing) + "/100 pairs agree");
    for (const Rational& mu : {Rational(-2), Rational(-1), Rational(1, 2), Rational(1)})
      for (int n = 0; n <= 8; ++n) {
        Rational closed = 1;
        for (int i = 0; i < n; ++i) closed *= 1 + mu;
        o.require(normal_exp_check(mu, n) == closed, "(1 + mu)^n at mu = " + mu.get_str());
      }
  });

  all &= run(9, "J^2 of the discovered eps = 3/2 operator is a cubic in H", 300, [](Outcome& o) {
    const int N = 60;
    NumericParams p{0.8, 0.7, 1.5};
    DiscoveryResult d = discover_symmetry(p, 3, N);
    o.require(d.dimension == 1 && !d.ambiguous, "dimension 1 at D = 3");
    if (d.dimension != 1) return;
    Eigen::MatrixXd J = block_matrix(assemble_ansatz(d.basis, d.vectors[0]), N);
    JSquaredFit f = fit_jsquared_poly(J, truncated_hamiltonian(p, N).matrix, N, 3, interior_bound(N, 3, 3));
    o.require(f.residual < 1e-7, "relative residual " + format_double(f.residual));
    o.note << " residual " << f.residual << ", alpha =";
    for (int i = 0; i <= 3; ++i) o.note << " " << format_double(f.alpha(i));
    o.note << " (J scaled to unit max coefficient)";
  });

  std::cout << (all ? "all criteria passed" : "some criteria failed") << "\n";
  return all ? 0 : 1;
}
