#pragma once

#include "aqrm/catalog.hpp"
#include "aqrm/fock.hpp"
#include "aqrm/json_io.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aqrm {

struct NumericParams {
  double g = 0.8;
  double delta = 0.7;
  double eps = 0.5;
};

/// Dense matrix of a block operator on C^2 (x) Fock levels 0..N; the basis
/// index is s (N + 1) + n for qubit row s and boson level n.
Eigen::MatrixXd block_matrix(const BlockOp<double>& op, int N);

BlockOp<double> evaluate(const BlockOp<Scalar>& op, double g, double delta);

struct TruncatedOperator {
  int N = 0;
  NumericParams params;
  Eigen::MatrixXd matrix;
  int dim() const { return 2 * (N + 1); }
};

TruncatedOperator truncated_hamiltonian(const NumericParams& p, int N);

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
};

/// Symmetric eigendecomposition; rejects input asymmetric beyond 1e-12
/// relative.
EigenSystem eigensolve(const Eigen::MatrixXd& m, bool with_vectors = true);

/// Level k is certified when it moves by less than 1e-10 (1 + |E_k|) between
/// truncations N and N + 10.
std::vector<bool> convergence_certificate(const NumericParams& p, int N, int K);

struct GapMinimum {
  int level = 0;  // pair (level, level + 1)
  double g = 0;
  double gap = 0;
  double grid_g = 0;
  double grid_gap = 0;
};

struct ScanPoint {
  double g = 0;
  Eigen::VectorXd energies;  // lowest K
  std::vector<bool> certified;
};

struct ScanResult {
  double eps = 0, delta = 0;
  int N = 0, K = 0;
  std::vector<ScanPoint> points;
  std::vector<GapMinimum> min_gaps;
  std::vector<int> unconverged_levels;  // uncertified somewhere on the grid

  bool has_crossing(double threshold = 1e-6) const;
};

/// Lowest-K spectrum on a uniform g grid (steps + 1 points) with each
/// adjacent-pair minimum gap refined by a bracketed 1-D minimization of the
/// actual gap around the grid minimum.
ScanResult crossing_scan(double eps, double delta, double g_lo, double g_hi, int steps, int N, int K);

struct LevelReport {
  int level = 0;
  double energy = 0;
  double mu = 0;      // J eigenvalue
  double target = 0;  // 4E + lambda
  double residual = 0;
  bool degenerate = false;
  bool certified = false;
  bool passed = false;
  int sector() const { return mu >= 0 ? 1 : -1; }
};

struct JointReport {
  double lambda = 0;
  std::vector<LevelReport> levels;
  int positive = 0, negative = 0;
  bool negative_target = false;  // some 4E + lambda < 0
  bool passed() const;
};

/// Checks J v = mu v with mu^2 = 4E + lambda on the lowest K levels at
/// eps = +-1/2. Degenerate pairs are checked through the 2x2 restriction.
JointReport joint_eigen_check(const NumericParams& p, int N, int K);

/// One basis element of the discovery ansatz: P (a^dagger)^m a^n in block (i, j).
struct AnsatzTerm {
  int row = 0, col = 0, m = 0, n = 0;
};

std::vector<AnsatzTerm> discovery_basis(int D);
BlockOp<double> assemble_ansatz(const std::vector<AnsatzTerm>& basis, const Eigen::VectorXd& c);

struct DiscoveryResult {
  NumericParams params;
  int D = 0, N = 0, interior = 0;
  int dimension = 0;
  Eigen::VectorXd singular_values;  // ascending, of the column-normalized map
  double gap_ratio = 0;             // smallest kept / largest discarded singular value
  bool ambiguous = false;
  std::vector<AnsatzTerm> basis;
  std::vector<Eigen::VectorXd> vectors;  // coefficient vectors, unit max-norm
  std::vector<double> residuals;         // ||[J, H]|| / (||J|| ||H||) on the interior block
  std::optional<double> catalog_error;   // max relative deviation from the catalog direction
  std::optional<double> catalog_angle;   // distance of the catalog vector from the nullspace
  std::optional<BlockOp<Scalar>> exact;  // rational reconstruction, when it succeeded
  bool exact_verified = false;           // exact commutator and recurrences vanish
};

DiscoveryResult discover_symmetry(const NumericParams& p, int D, int N);

/// Truncated catalog operator at numeric parameters, or nullopt when eps is
/// not a catalog value.
std::optional<BlockOp<double>> catalog_operator(const NumericParams& p);

struct JSquaredFit {
  int M = 0, interior = 0;
  Eigen::VectorXd alpha;  // ascending powers of H
  double residual = 0;    // relative, on the interior block
  double condition = 0;   // of the column-normalized design
  bool ill_conditioned = false;
};

/// Least-squares fit of J^2 by sum alpha_i H^i on levels <= interior of both
/// qubit sectors.
JSquaredFit fit_jsquared_poly(const Eigen::MatrixXd& J, const Eigen::MatrixXd& H, int N, int M, int interior);

/// Interior bound used by discovery and fitting.
inline int interior_bound(int N, int D, int M = 0) { return N - 2 * std::max(D, M) - 2; }

/// Matching symbolic coefficients evaluated at the numeric point.
std::vector<double> catalog_alpha(const NumericParams& p);

std::string format_double(double x);  // 17 significant digits
void write_scan_csv(std::ostream& out, const ScanResult& r);
json to_json(const ScanResult& r);
json to_json(const JointReport& r);
json to_json(const DiscoveryResult& r);
json to_json(const JSquaredFit& r);

}  // namespace aqrm
