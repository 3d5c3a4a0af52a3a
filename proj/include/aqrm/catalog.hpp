#pragma once

#include "aqrm/block.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace aqrm {

enum class Basis { original, transformed };

/// Bias value with no explicit symmetry operator in the catalog.
struct CatalogMiss : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parameter combination where the catalog operator is undefined (g = 0 at
/// half-integer bias).
struct SingularParameter : std::domain_error {
  using std::domain_error::domain_error;
};

/// Biases with a catalog entry: 0, +-1/2, +-1.
std::vector<Rational> supported_epsilons();
bool in_catalog(const Rational& eps);

/// Explicit symmetry operator J commuting with H at the given bias, normalized
/// with the common factor Delta removed. Negative biases are obtained from the
/// positive ones by conjugation with sigma_z (x) P, which maps H(eps) to H(-eps).
BlockOp<Scalar> j_catalog(const ModelParams& p, Basis basis = Basis::original);

/// Human-readable record of the normalization used by j_catalog.
std::string catalog_normalization(const Rational& eps);

/// lambda = 4 g^2 + Delta^2 / g^2 + 2.
Scalar jsquared_lambda(const Scalar& g, const Scalar& delta);

/// Right-hand side of the J^2 identity as a polynomial in H, with coefficients
/// ordered by ascending power of H.
std::vector<Scalar> jsquared_polynomial(const ModelParams& p);

struct IdentityReport {
  std::string claim;
  BlockOp<Scalar> residual;
  bool holds() const { return residual.is_zero(); }
};

/// Computes J^2 - sum_i alpha_i H^i exactly.
IdentityReport verify_jsquared(const ModelParams& p);

template <class S>
BlockOp<S> polynomial_in(const BlockOp<S>& h, const std::vector<S>& coeffs) {
  BlockOp<S> out, hk = BlockOp<S>::identity();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) hk = hk * h;
    out += hk * coeffs[i];
  }
  return out;
}

/// One nonzero left-hand side of the coefficient recurrences of [H, J] = 0.
struct RecurrenceResidual {
  int equation;  // 1: a-row, 2: d-row, 3: b-row, 4: c-row
  int m, n;
  Scalar value;
};

/// Expands J into plain normal-ordered coefficients (parity grade replaced by
/// the truncated series :exp(-2 a+ a):) and evaluates the four coefficient
/// recurrences for 0 <= m, n <= bound. Empty result iff [H, J] vanishes up to
/// the bound.
std::vector<RecurrenceResidual> recurrence_check(const BlockOp<Scalar>& j, const ModelParams& p, int bound);

/// Plain normal-ordered coefficients of P^s X, exact for creation power <= order.
NOOp<Scalar> expand_parity(const GradedOp<Scalar>& op, int order);

}  // namespace aqrm
