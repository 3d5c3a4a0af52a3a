#include "aqrm/json_io.hpp"

#include <stdexcept>

namespace aqrm {

namespace {

template <int N>
json poly_to_json(const LaurentPoly<N>& s) {
  json out = json::array();
  for (const auto& [e, c] : s.terms()) {
    json row = json::array();
    for (int i = 0; i < N; ++i) row.push_back(e[i]);
    row.push_back(to_fraction_string(c));
    out.push_back(std::move(row));
  }
  return out;
}

template <int N>
LaurentPoly<N> poly_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("scalar json: expected array");
  LaurentPoly<N> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != N + 1 || !row[N].is_string())
      throw std::invalid_argument("scalar json: malformed term");
    typename LaurentPoly<N>::Exponent e;
    for (int i = 0; i < N; ++i) e[i] = row[i].get<int>();
    Rational c = parse_rational(row[N].get<std::string>());
    if (sgn(c) == 0) throw std::invalid_argument("scalar json: stored zero coefficient");
    out.add_term(e, c);
  }
  return out;
}

template <class C>
json bipoly_to_json(const BiPoly<C>& p) {
  json out = json::array();
  for (const auto& [ij, c] : p.terms()) out.push_back(json::array({ij.first, ij.second, to_json(c)}));
  return out;
}

BiPoly<Scalar> bipoly_from_json(const json& j) {
  BiPoly<Scalar> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 3) throw std::invalid_argument("genfun json: malformed term");
    out.add_term(row[0].get<int>(), row[1].get<int>(), scalar_from_json(row[2]));
  }
  return out;
}

template <class C>
json genfun_to_json(const GenFun<C>& f) {
  return {{"poly", bipoly_to_json(f.poly)}, {"exp", bipoly_to_json(f.exp)}};
}

template <class C>
json quad_to_json(const QuadSolution<C>& q) {
  json out;
  out["epsilon"] = q.epsilon ? to_fraction_string(*q.epsilon) : std::string("symbolic");
  out["d_plus"] = genfun_to_json(q.d_plus);
  out["d_minus"] = genfun_to_json(q.d_minus);
  out["b_plus"] = genfun_to_json(q.b_plus);
  out["b_minus"] = genfun_to_json(q.b_minus);
  return out;
}

}  // namespace

json to_json(const Scalar& s) { return poly_to_json(s); }
Scalar scalar_from_json(const json& j) { return poly_from_json<2>(j); }
json to_json(const ExtScalar& s) { return poly_to_json(s); }
ExtScalar ext_scalar_from_json(const json& j) { return poly_from_json<3>(j); }

json to_json(const GradedOp<Scalar>& op) {
  json terms = json::array();
  for (const auto& [mn, c] : op.body().terms()) terms.push_back(json::array({mn.first, mn.second, to_json(c)}));
  return {{"grade", op.grade()}, {"terms", terms}};
}

GradedOp<Scalar> graded_from_json(const json& j) {
  int grade = j.at("grade").get<int>();
  NOOp<Scalar> body;
  for (const auto& row : j.at("terms")) {
    if (!row.is_array() || row.size() != 3) throw std::invalid_argument("operator json: malformed term");
    body.add_term(row[0].get<int>(), row[1].get<int>(), scalar_from_json(row[2]));
  }
  return GradedOp<Scalar>(grade, body);
}

json to_json(const BlockOp<Scalar>& op) {
  return {{"11", to_json(op(0, 0))}, {"12", to_json(op(0, 1))}, {"21", to_json(op(1, 0))}, {"22", to_json(op(1, 1))}};
}

BlockOp<Scalar> block_from_json(const json& j) {
  return BlockOp<Scalar>(graded_from_json(j.at("11")), graded_from_json(j.at("12")), graded_from_json(j.at("21")),
                         graded_from_json(j.at("22")));
}

json to_json(const QuadSolution<Scalar>& q) { return quad_to_json(q); }
json to_json(const QuadSolution<ExtScalar>& q) { return quad_to_json(q); }

QuadSolution<Scalar> quad_from_json(const json& j) {
  QuadSolution<Scalar> q;
  auto eps = j.at("epsilon").get<std::string>();
  if (eps != "symbolic") q.epsilon = parse_rational(eps);
  auto part = [&](const char* key) {
    return GenFun<Scalar>{bipoly_from_json(j.at(key).at("poly")), bipoly_from_json(j.at(key).at("exp"))};
  };
  q.d_plus = part("d_plus");
  q.d_minus = part("d_minus");
  q.b_plus = part("b_plus");
  q.b_minus = part("b_minus");
  return q;
}

json to_json(const IdentityReport& r) {
  json out{{"claim", r.claim}};
  if (r.holds())
    out["residual_norm"] = "0";
  else
    out["residual_norm"] = to_json(r.residual);
  return out;
}

}  // namespace aqrm
