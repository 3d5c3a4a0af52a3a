#include "aqrm/spectrum.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

namespace aqrm {

Eigen::MatrixXd block_matrix(const BlockOp<double>& op, int N) {
  const int n = N + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!op(i, j).is_zero()) out.block(i * n, j * n, n, n) = fock_matrix(op(i, j), N);
  return out;
}

BlockOp<double> evaluate(const BlockOp<Scalar>& op, double g, double delta) {
  return op.map_coeffs<double>([&](const Scalar& s) { return s.eval(std::array<double, 2>{g, delta}); });
}

TruncatedOperator truncated_hamiltonian(const NumericParams& p, int N) {
  if (N < 0) throw std::invalid_argument("truncated_hamiltonian: N must be nonnegative");
  return {N, p, block_matrix(build_hamiltonian<double>(p.g, p.delta, p.eps), N)};
}

EigenSystem eigensolve(const Eigen::MatrixXd& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigensolve: matrix is not square");
  const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eigensolve: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, with_vectors ? Eigen::ComputeEigenvectors
                                                                        : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve: no convergence");
  EigenSystem out;
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

namespace {

Eigen::VectorXd lowest_levels(const NumericParams& p, int N, int K) {
  return eigensolve(truncated_hamiltonian(p, N).matrix, false).values.head(K);
}

std::vector<bool> certify(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine) {
  std::vector<bool> out(coarse.size());
  for (Eigen::Index k = 0; k < coarse.size(); ++k)
    out[k] = std::abs(coarse(k) - fine(k)) < 1e-10 * (1 + std::abs(coarse(k)));
  return out;
}

void check_levels(int N, int K) {
  if (K < 1 || K > 2 * (N + 1)) throw std::invalid_argument("level count must lie in 1..2(N+1)");
}

template <class F>
void parallel_for(int count, F&& body) {
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<bool> convergence_certificate(const NumericParams& p, int N, int K) {
  check_levels(N, K);
  // the finer truncation always has at least K levels
  return certify(lowest_levels(p, N, K), lowest_levels(p, N + 10, K));
}

bool ScanResult::has_crossing(double threshold) const {
  return std::any_of(min_gaps.begin(), min_gaps.end(), [&](const GapMinimum& m) { return m.gap < threshold; });
}

ScanResult crossing_scan(double eps, double delta, double g_lo, double g_hi, int steps, int N, int K) {
  if (steps < 1) throw std::invalid_argument("crossing_scan: the grid needs at least one step");
  if (!(g_hi > g_lo)) throw std::invalid_argument("crossing_scan: empty g range");
  check_levels(N, K);
  if (K < 2) throw std::invalid_argument("crossing_scan: at least two levels are needed for gaps");

  ScanResult r;
  r.eps = eps;
  r.delta = delta;
  r.N = N;
  r.K = K;
  r.points.resize(steps + 1);
  parallel_for(steps + 1, [&](int i) {
    double g = g_lo + (g_hi - g_lo) * i / steps;
    NumericParams p{g, delta, eps};
    ScanPoint& pt = r.points[i];
    pt.g = g;
    pt.energies = lowest_levels(p, N, K);
    pt.certified = certify(pt.energies, lowest_levels(p, N + 10, K));
  });

  for (int k = 0; k < K; ++k)
    for (const auto& pt : r.points)
      if (!pt.certified[k]) {
        r.unconverged_levels.push_back(k);
        break;
      }

  const double dg = (g_hi - g_lo) / steps;
  for (int k = 0; k + 1 < K; ++k) {
    auto grid_gap = [&](int i) { return r.points[i].energies(k + 1) - r.points[i].energies(k); };
    auto gap = [&](double g) {
      Eigen::VectorXd e = lowest_levels({g, delta, eps}, N, k + 2);
      return e(k + 1) - e(k);
    };
    // local minima on the grid, smallest first
    std::vector<int> minima;
    for (int i = 0; i <= steps; ++i) {
      bool left = i == 0 || grid_gap(i) <= grid_gap(i - 1);
      bool right = i == steps || grid_gap(i) <= grid_gap(i + 1);
      if (left && right) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(), [&](int a, int b) { return grid_gap(a) < grid_gap(b); });
    if (minima.size() > 4) minima.resize(4);

    GapMinimum best;
    best.level = k;
    best.gap = std::numeric_limits<double>::infinity();
    for (int i : minima) {
      double lo = std::max(g_lo, r.points[i].g - dg), hi = std::min(g_hi, r.points[i].g + dg);
      std::uintmax_t iterations = 200;
      auto [g_star, value] = boost::math::tools::brent_find_minima(gap, lo, hi, std::numeric_limits<double>::digits,
                                                                   iterations);
      double candidate = std::min(value, grid_gap(i));
      if (candidate < best.gap) {
        best.gap = candidate;
        best.g = value <= grid_gap(i) ? g_star : r.points[i].g;
        best.grid_g = r.points[i].g;
        best.grid_gap = grid_gap(i);
      }
    }
    r.min_gaps.push_back(best);
  }
  return r;
}

std::optional<BlockOp<double>> catalog_operator(const NumericParams& p) {
  for (const Rational& eps : supported_epsilons())
    if (eps.get_d() == p.eps) return evaluate(j_catalog(ModelParams::symbolic(eps)), p.g, p.delta);
  return std::nullopt;
}

std::vector<double> catalog_alpha(const NumericParams& p) {
  for (const Rational& eps : supported_epsilons())
    if (eps.get_d() == p.eps) {
      std::vector<double> out;
      for (const Scalar& s : jsquared_polynomial(ModelParams::symbolic(eps)))
        out.push_back(s.eval(std::array<double, 2>{p.g, p.delta}));
      return out;
    }
  throw CatalogMiss("no J^2 identity at eps = " + format_double(p.eps));
}

bool JointReport::passed() const {
  bool all = true;
  for (const auto& l : levels)
    if (l.certified && !l.passed) all = false;
  return all && positive > 0 && negative > 0;
}

JointReport joint_eigen_check(const NumericParams& p, int N, int K) {
  if (std::abs(p.eps) != 0.5) throw std::invalid_argument("joint_eigen_check: requires eps = +-1/2");
  if (p.g == 0) throw std::invalid_argument("joint_eigen_check: g = 0 is singular at eps = +-1/2");
  check_levels(N, K);
  const Eigen::MatrixXd H = truncated_hamiltonian(p, N).matrix;
  const Eigen::MatrixXd J = block_matrix(*catalog_operator(p), N);
  const double j_norm = J.cwiseAbs().rowwise().sum().maxCoeff();
  const EigenSystem es = eigensolve(H);
  const std::vector<bool> cert = convergence_certificate(p, N, K);

  JointReport out;
  out.lambda = 4 * p.g * p.g + p.delta * p.delta / (p.g * p.g) + 2;
  for (int k = 0; k < K;) {
    // group numerically degenerate neighbours
    int end = k + 1;
    while (end < es.values.size() &&
           es.values(end) - es.values(end - 1) < 1e-6 * (1 + std::abs(es.values(k))))
      ++end;
    const Eigen::MatrixXd V = es.vectors.middleCols(k, end - k);
    Eigen::MatrixXd R = V.transpose() * J * V;
    R = 0.5 * (R + R.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> local(R);
    for (int i = 0; i < end - k && k + i < K; ++i) {
      LevelReport l;
      l.level = k + i;
      l.energy = es.values(k + i);
      l.mu = local.eigenvalues()(i);
      l.target = 4 * l.energy + out.lambda;
      Eigen::VectorXd v = V * local.eigenvectors().col(i);
      l.residual = (J * v - l.mu * v).norm() / j_norm;
      l.degenerate = end - k > 1;
      l.certified = cert[k + i];
      l.passed = std::abs(l.mu * l.mu - l.target) <= 1e-8 * (1 + std::abs(l.target)) && l.residual <= 1e-8;
      if (l.target < 0) out.negative_target = true;
      if (l.certified) (l.sector() > 0 ? out.positive : out.negative)++;
      out.levels.push_back(l);
    }
    k = end;
  }
  return out;
}

std::vector<AnsatzTerm> discovery_basis(int D) {
  std::vector<AnsatzTerm> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int total = 0; total <= D; ++total)
        for (int m = total; m >= 0; --m) out.push_back({i, j, m, total - m});
  return out;
}

BlockOp<double> assemble_ansatz(const std::vector<AnsatzTerm>& basis, const Eigen::VectorXd& c) {
  std::array<NOOp<double>, 4> bodies;
  for (std::size_t b = 0; b < basis.size(); ++b) bodies[2 * basis[b].row + basis[b].col].add_term(basis[b].m, basis[b].n, c(b));
  BlockOp<double> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = GradedOp<double>(1, bodies[2 * i + j]);
  return out;
}

namespace {

// Both qubit sectors restricted to boson levels 0..L, flattened column-major.
Eigen::VectorXd interior_vec(const Eigen::MatrixXd& m, int N, int L) {
  const int n = N + 1, l = L + 1;
  Eigen::VectorXd out(4 * l * l);
  int idx = 0;
  for (int bj = 0; bj < 2; ++bj)
    for (int cj = 0; cj < l; ++cj)
      for (int bi = 0; bi < 2; ++bi) {
        out.segment(idx, l) = m.block(bi * n, bj * n + cj, l, 1);
        idx += l;
      }
  return out;
}

std::optional<Rational> to_rational(double x) {
  Rational r;
  if (reconstruct_rational(x, 1000, 1e-12 * std::max(1.0, std::abs(x)), r)) return r;
  return std::nullopt;
}

// Exact operator from a numeric coefficient vector, when every ratio to the
// pivot entry is a modest rational.
std::optional<BlockOp<Scalar>> reconstruct(const std::vector<AnsatzTerm>& basis, const Eigen::VectorXd& c) {
  const double top = c.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  while (std::abs(c(pivot)) < 1e-3 * top) ++pivot;
  std::array<NOOp<Scalar>, 4> bodies;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    double ratio = c(b) / c(pivot);
    if (std::abs(ratio) < 1e-10) continue;
    Rational r;
    if (!reconstruct_rational(ratio, 1000000, 1e-12 * std::max(1.0, std::abs(ratio)), r)) return std::nullopt;
    bodies[2 * basis[b].row + basis[b].col].add_term(basis[b].m, basis[b].n, Scalar(r));
  }
  BlockOp<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = GradedOp<Scalar>(1, bodies[2 * i + j]);
  return out;
}

}  // namespace

DiscoveryResult discover_symmetry(const NumericParams& p, int D, int N) {
  if (D < 0) throw std::invalid_argument("discover_symmetry: D must be nonnegative");
  const int L = N - D - 2;
  if (L < D + 2)
    throw std::invalid_argument("discover_symmetry: N = " + std::to_string(N) + " is too small for D = " +
                                std::to_string(D) + " (need N >= " + std::to_string(2 * D + 4) + ")");
  DiscoveryResult out;
  out.params = p;
  out.D = D;
  out.N = N;
  out.interior = L;
  out.basis = discovery_basis(D);
  const int nb = static_cast<int>(out.basis.size());

  const Eigen::MatrixXd H = truncated_hamiltonian(p, N).matrix;
  const int rows = 4 * (L + 1) * (L + 1);
  Eigen::MatrixXd A(rows, nb);
  Eigen::VectorXd norms(nb);
  for (int b = 0; b < nb; ++b) {
    Eigen::VectorXd unit = Eigen::VectorXd::Unit(nb, b);
    Eigen::MatrixXd Jb = block_matrix(assemble_ansatz(out.basis, unit), N);
    A.col(b) = interior_vec(Jb * H - H * Jb, N, L);
    norms(b) = A.col(b).norm();
    if (norms(b) == 0) norms(b) = 1;
    A.col(b) /= norms(b);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();  // descending
  out.singular_values = s.reverse();
  const double threshold = 1e-9 * s(0);
  int kept = 0;
  while (kept < nb && s(kept) >= threshold) ++kept;
  out.dimension = nb - kept;
  if (out.dimension > 0 && kept > 0)
    out.gap_ratio = s(kept - 1) / std::max(s(kept), std::numeric_limits<double>::min());
  else if (kept > 0)
    out.gap_ratio = s(kept - 1) / threshold;
  else
    out.gap_ratio = 0;
  out.ambiguous = out.gap_ratio < 1e3;

  const Eigen::MatrixXd null = svd.matrixV().rightCols(out.dimension);
  const double h_norm = interior_vec(H, N, L).norm();
  for (int v = 0; v < out.dimension; ++v) {
    Eigen::VectorXd c = null.col(v).cwiseQuotient(norms);
    Eigen::Index at;
    c.cwiseAbs().maxCoeff(&at);
    c /= c(at);
    c = c.unaryExpr([](double x) { return std::abs(x) < 1e-12 ? 0.0 : x; });  // roundoff in absent terms
    out.vectors.push_back(c);
    Eigen::MatrixXd Jc = block_matrix(assemble_ansatz(out.basis, c), N);
    out.residuals.push_back(interior_vec(Jc * H - H * Jc, N, L).norm() / (interior_vec(Jc, N, L).norm() * h_norm));
  }

  if (auto cat = catalog_operator(p)) {
    Eigen::VectorXd ref = Eigen::VectorXd::Zero(nb);
    bool fits = true;
    for (int i = 0; i < 2 && fits; ++i)
      for (int j = 0; j < 2; ++j) {
        const GradedOp<double>& e = (*cat)(i, j);
        if (e.is_zero()) continue;
        if (e.grade() != 1 || e.body().total_degree() > D) {
          fits = false;
          break;
        }
        for (const auto& [mn, c] : e.body().terms())
          for (int b = 0; b < nb; ++b)
            if (out.basis[b].row == i && out.basis[b].col == j && out.basis[b].m == mn.first &&
                out.basis[b].n == mn.second)
              ref(b) = c;
      }
    if (fits) {
      Eigen::VectorXd x = ref.cwiseProduct(norms).normalized();
      out.catalog_angle = (x - null * (null.transpose() * x)).norm();
      if (out.dimension == 1) {
        Eigen::Index at;
        ref.cwiseAbs().maxCoeff(&at);
        Eigen::VectorXd scaled = out.vectors[0] * (ref(at) / out.vectors[0](at));
        out.catalog_error = (scaled - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
      }
    }
  }

  if (out.dimension == 1) {
    auto g = to_rational(p.g), d = to_rational(p.delta), e = to_rational(p.eps);
    if (g && d && e) {
      if (auto op = reconstruct(out.basis, out.vectors[0])) {
        ModelParams mp = ModelParams::exact(*g, *d, *e);
        out.exact = op;
        out.exact_verified =
            commutator(*op, build_hamiltonian(mp)).is_zero() && recurrence_check(*op, mp, D + 2).empty();
      }
    }
  }
  return out;
}

JSquaredFit fit_jsquared_poly(const Eigen::MatrixXd& J, const Eigen::MatrixXd& H, int N, int M, int interior) {
  if (M < 0) throw std::invalid_argument("fit_jsquared_poly: M must be nonnegative");
  if (interior < 0 || interior > N) throw std::invalid_argument("fit_jsquared_poly: interior block out of range");
  JSquaredFit out;
  out.M = M;
  out.interior = interior;
  const Eigen::VectorXd y = interior_vec(J * J, N, interior);
  Eigen::MatrixXd X(y.size(), M + 1);
  Eigen::VectorXd norms(M + 1);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(H.rows(), H.cols());
  for (int i = 0; i <= M; ++i) {
    X.col(i) = interior_vec(power, N, interior);
    norms(i) = X.col(i).norm();
    X.col(i) /= norms(i);
    power = power * H;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  out.condition = s(0) / std::max(s(s.size() - 1), std::numeric_limits<double>::min());
  out.ill_conditioned = out.condition > 1e12;
  Eigen::VectorXd z = svd.solve(y);
  out.alpha = z.cwiseQuotient(norms);
  out.residual = (X * z - y).norm() / y.norm();
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_scan_csv(std::ostream& out, const ScanResult& r) {
  out << "g,eps,delta,level,energy,certified\n";
  for (const auto& pt : r.points)
    for (int k = 0; k < r.K; ++k)
      out << format_double(pt.g) << ',' << format_double(r.eps) << ',' << format_double(r.delta) << ',' << k << ','
          << format_double(pt.energies(k)) << ',' << (pt.certified[k] ? 1 : 0) << '\n';
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json params_json(const NumericParams& p) { return {{"g", p.g}, {"delta", p.delta}, {"eps", p.eps}}; }

}  // namespace

json to_json(const ScanResult& r) {
  json gaps = json::array();
  for (const auto& m : r.min_gaps)
    gaps.push_back({{"pair", {m.level, m.level + 1}},
                    {"g", m.g},
                    {"gap", m.gap},
                    {"grid_g", m.grid_g},
                    {"grid_gap", m.grid_gap}});
  return {{"eps", r.eps},       {"delta", r.delta},          {"N", r.N},
          {"K", r.K},           {"grid_points", r.points.size()},
          {"min_gaps", gaps},   {"unconverged_levels", r.unconverged_levels},
          {"crossing", r.has_crossing()}};
}

json to_json(const JointReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"energy", l.energy},
                      {"mu", l.mu},
                      {"four_e_plus_lambda", l.target},
                      {"residual", l.residual},
                      {"sector", l.sector()},
                      {"degenerate", l.degenerate},
                      {"certified", l.certified},
                      {"passed", l.passed}});
  return {{"lambda", r.lambda},   {"levels", levels},
          {"positive", r.positive}, {"negative", r.negative},
          {"negative_target", r.negative_target}, {"passed", r.passed()}};
}

json to_json(const DiscoveryResult& r) {
  json basis = json::array();
  for (const auto& t : r.basis) basis.push_back({t.row + 1, t.col + 1, t.m, t.n});
  json vectors = json::array();
  for (const auto& v : r.vectors) vectors.push_back(vector_json(v));
  json out{{"params", params_json(r.params)},
           {"D", r.D},
           {"N", r.N},
           {"interior_levels", r.interior},
           {"dimension", r.dimension},
           {"singular_values", vector_json(r.singular_values)},
           {"gap_ratio", r.gap_ratio},
           {"ambiguous", r.ambiguous},
           {"basis", basis},
           {"vectors", vectors},
           {"residuals", r.residuals}};
  if (r.catalog_error) out["catalog_relative_error"] = *r.catalog_error;
  if (r.catalog_angle) out["catalog_angle"] = *r.catalog_angle;
  if (r.exact) {
    out["exact_operator"] = to_json(*r.exact);
    out["exact_verified"] = r.exact_verified;
  }
  return out;
}

json to_json(const JSquaredFit& r) {
  return {{"M", r.M},
          {"interior_levels", r.interior},
          {"alpha", vector_json(r.alpha)},
          {"relative_residual", r.residual},
          {"condition", r.condition},
          {"ill_conditioned", r.ill_conditioned}};
}

}  // namespace aqrm
