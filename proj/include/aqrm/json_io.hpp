#pragma once

#include "aqrm/catalog.hpp"
#include "aqrm/genfun.hpp"

#include <json.hpp>

namespace aqrm {

using json = nlohmann::json;

/// [[g_exp, delta_exp, "num/den"], ...] in ascending exponent order.
json to_json(const Scalar& s);
Scalar scalar_from_json(const json& j);

/// [[g_exp, delta_exp, eps_exp, "num/den"], ...].
json to_json(const ExtScalar& s);
ExtScalar ext_scalar_from_json(const json& j);

/// {"grade": 0|1, "terms": [[m, n, scalar], ...]} ordered by (m, n).
json to_json(const GradedOp<Scalar>& op);
GradedOp<Scalar> graded_from_json(const json& j);

/// {"11": op, "12": op, "21": op, "22": op}.
json to_json(const BlockOp<Scalar>& op);
BlockOp<Scalar> block_from_json(const json& j);

/// {"epsilon": "p/q" | "symbolic", "d_plus": {"poly": [[i, j, scalar]...], "exp": [...]}, ...}.
json to_json(const QuadSolution<Scalar>& q);
json to_json(const QuadSolution<ExtScalar>& q);
QuadSolution<Scalar> quad_from_json(const json& j);

/// {"claim": ..., "residual_norm": "0" | block operator of nonzero residual terms}.
json to_json(const IdentityReport& r);

}  // namespace aqrm
