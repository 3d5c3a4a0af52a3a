#include "aqrm/derive.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace aqrm {

namespace {

using Column = std::vector<RatFunc>;
using Vec = std::vector<ExtScalar>;

const BiPoly<ExtScalar>& sector_part(const GenFun<ExtScalar>& f, Sector s) {
  return s == Sector::exponential ? f.exp : f.poly;
}

// Constraint matrix of the third PDE, one column per unknown. `eps` is either
// the symbolic bias or a constant.
std::vector<std::vector<RatFunc>> constraint_rows(const Ansatz& a, const ExtScalar& eps) {
  const ExtScalar g = sym::g3(), d = sym::delta3();
  std::map<std::pair<int, int>, std::vector<RatFunc>> rows;
  for (int col = 0; col < a.size(); ++col) {
    Vec x(a.size());
    x[col] = ExtScalar(1L);
    QuadSolution<ExtScalar> q = ansatz_tuple(a, x, g, d, eps);
    GenFun<ExtScalar> r = pde_residual(q, g, d, eps)[2];
    for (const auto& [ij, c] : sector_part(r, a.sector).terms()) {
      auto& row = rows[ij];
      if (row.empty()) row.resize(a.size());
      row[col] = RatFunc(c);
    }
  }
  std::vector<std::vector<RatFunc>> out;
  for (auto& [ij, row] : rows) out.push_back(std::move(row));
  return out;
}

// Clears denominators and the common polynomial factor.
Vec polynomial_vector(const std::vector<RatFunc>& v) {
  ExtScalar lcm_den(1L);
  for (const auto& c : v) {
    if (c.is_zero()) continue;
    ExtScalar common = poly_gcd(lcm_den, c.den()), q;
    divide_exact(c.den(), common, q);
    lcm_den = lcm_den * q;
  }
  Vec out(v.size());
  ExtScalar content;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    ExtScalar q;
    divide_exact(lcm_den, v[i].den(), q);
    out[i] = v[i].num() * q;
    content = poly_gcd(content, out[i]);
  }
  for (auto& c : out) {
    if (c.is_zero()) continue;
    ExtScalar q;
    divide_exact(c, content, q);
    c = q;
  }
  // sign: first nonzero entry has positive leading coefficient
  for (const auto& c : out)
    if (!c.is_zero()) {
      if (sgn(c.terms().rbegin()->second) < 0)
        for (auto& e : out) e = -e;
      break;
    }
  return out;
}

int vector_rank(const std::vector<Vec>& vectors, int columns) {
  if (vectors.empty()) return 0;
  std::vector<std::vector<RatFunc>> rows;
  for (const auto& v : vectors) {
    std::vector<RatFunc> row(columns);
    for (int i = 0; i < columns; ++i) row[i] = RatFunc(v[i]);
    rows.push_back(std::move(row));
  }
  return eliminate(std::move(rows), columns).rank();
}

Vec extend_vector(const std::vector<Scalar>& v) {
  Vec out;
  for (const auto& s : v) out.push_back(extend(s));
  return out;
}

std::vector<Scalar> restrict_vector(const Vec& v) {
  std::vector<Scalar> out;
  for (const auto& s : v) out.push_back(fix_epsilon(s, 0));
  return out;
}

QuadSolution<Scalar> scalar_tuple(const Ansatz& a, const std::vector<Scalar>& x, const Rational& eps) {
  QuadSolution<Scalar> q = ansatz_tuple(a, x, sym::g(), sym::delta(), Scalar(eps));
  q.epsilon = eps;
  return q;
}

ExtScalar substitute_eps(const ExtScalar& s, const Rational& eps) { return extend(fix_epsilon(s, eps)); }

std::string condition_text(const UniPoly& p) {
  std::string poly = uni_to_string(p, "eps");
  bool bare = poly.find(' ') == std::string::npos;
  return "alpha * " + (bare ? poly : "(" + poly + ")") + " = 0";
}

}  // namespace

bool ansatz_unknowns(const Ansatz& a, const QuadSolution<Scalar>& q, const Rational& eps, std::vector<Scalar>& x) {
  x.assign(a.size(), Scalar());
  for (const auto* f : q.parts()) {
    const BiPoly<Scalar>& other = a.sector == Sector::exponential ? f->poly : f->exp;
    if (!other.is_zero()) return false;
  }
  auto part = [&](const GenFun<Scalar>& f) -> const BiPoly<Scalar>& {
    return a.sector == Sector::exponential ? f.exp : f.poly;
  };
  for (const auto& [ij, c] : part(q.b_minus).terms()) {
    if (ij.second >= a.M || ij.first > a.bound) return false;
    x[a.f_index(ij.second, ij.first)] = c;
  }
  for (const auto& [ij, c] : part(q.d_minus).terms()) {
    if (ij.second != 0) continue;
    if (ij.first > a.bound) return false;
    x[a.h1_index(ij.first)] = c;
  }
  for (const auto& [ij, c] : part(q.d_plus).terms()) {
    if (ij.second != 0) continue;
    if (ij.first > a.bound) return false;
    x[a.h2_index(ij.first)] = c;
  }
  QuadSolution<Scalar> rebuilt = scalar_tuple(a, x, eps);
  return rebuilt.d_plus == q.d_plus && rebuilt.d_minus == q.d_minus && rebuilt.b_plus == q.b_plus &&
         rebuilt.b_minus == q.b_minus;
}

std::vector<std::vector<Scalar>> ansatz_nullspace(const Ansatz& a, const Rational& eps) {
  Elimination el = eliminate(constraint_rows(a, ExtScalar(eps)), a.size());
  std::vector<std::vector<Scalar>> out;
  for (const auto& v : el.nullspace) out.push_back(restrict_vector(polynomial_vector(v)));
  return out;
}

namespace {

// Solutions already accounted for at this bias: those of the smaller ansatz
// multiplied by powers of H, plus specializations of bias-generic solutions.
std::vector<Vec> induced_vectors(const Ansatz& a, const Rational& eps, const std::vector<Vec>& generic) {
  std::vector<Vec> out;
  for (const auto& v : generic) {
    Vec s;
    for (const auto& c : v) s.push_back(substitute_eps(c, eps));
    out.push_back(std::move(s));
  }
  if (a.M == 0) return out;
  Ansatz lower = a;
  lower.M = a.M - 1;
  const BlockOp<Scalar> h = build_hamiltonian(ModelParams::symbolic(eps));
  for (const auto& x : ansatz_nullspace(lower, eps)) {
    BlockOp<Scalar> op = genfun_to_blockop(scalar_tuple(lower, x, eps));
    for (int k = 0; k <= a.bound + 1; ++k) {
      std::vector<Scalar> y;
      try {
        if (ansatz_unknowns(a, blockop_to_quad(op), eps, y)) out.push_back(extend_vector(y));
      } catch (const std::invalid_argument&) {
        // product left the decomposable form; nothing to add
      }
      op = op * h;
    }
  }
  return out;
}

}  // namespace

DerivationReport derive_symmetry(int M, int bound) {
  if (M < 0) throw std::invalid_argument("derive_symmetry: M must be nonnegative");
  if (bound < 0) bound = M + 2;
  DerivationReport report;
  report.M = M;
  report.bound = bound;
  const ExtScalar eps = sym::eps3();

  Ansatz gauge{M, bound, Sector::polynomial};
  Elimination gauge_el = eliminate(constraint_rows(gauge, eps), gauge.size());
  report.gauge_dimension = static_cast<int>(gauge_el.nullspace.size());
  for (const auto& v : gauge_el.nullspace)
    report.gauge_basis.push_back(ansatz_tuple(gauge, polynomial_vector(v), sym::g3(), sym::delta3(), eps));

  Ansatz ansatz{M, bound, Sector::exponential};
  Elimination el = eliminate(constraint_rows(ansatz, eps), ansatz.size());
  std::vector<Vec> generic;
  for (const auto& v : el.nullspace) generic.push_back(polynomial_vector(v));

  // a rank drop at eps0 for all g, Delta needs (eps - eps0) in the eps-only
  // factor of the product of pivots
  std::vector<Rational> candidates;
  for (const auto& p : el.pivots)
    for (const auto& r : rational_roots(epsilon_content(p.num()))) candidates.push_back(r);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  UniPoly condition{Rational(1)};
  for (const Rational& e0 : candidates) {
    std::vector<std::vector<Scalar>> null = ansatz_nullspace(ansatz, e0);
    CandidateBias cand;
    cand.epsilon = e0;
    cand.nullity = static_cast<int>(null.size());
    std::vector<Vec> basis = induced_vectors(ansatz, e0, generic);
    int rank = vector_rank(basis, ansatz.size());
    int fresh = 0;
    for (const auto& x : null) {
      basis.push_back(extend_vector(x));
      int next = vector_rank(basis, ansatz.size());
      if (next == rank) {
        basis.pop_back();
        continue;
      }
      rank = next;
      ++fresh;
      DerivedSolution sol;
      sol.epsilon = e0;
      sol.tuple = scalar_tuple(ansatz, x, e0);
      sol.op = genfun_to_blockop(sol.tuple);
      sol.commutes = commutator(sol.op, build_hamiltonian(ModelParams::symbolic(e0))).is_zero();
      if (in_catalog(e0)) {
        RatFunc factor;
        sol.matches_reference = proportional(reference_tuple(e0), sol.tuple, &factor);
        if (sol.matches_reference) sol.normalization = factor.to_string();
      }
      report.solutions.push_back(std::move(sol));
    }
    cand.induced_rank = cand.nullity - fresh;
    if (cand.fresh() > 0) {
      condition = uni_mul(condition, UniPoly{-e0, Rational(1)});
      report.condition.roots.push_back(e0);
    }
    report.candidates.push_back(cand);
  }
  if (report.solutions.empty())
    throw BoundExhausted("derive_symmetry: no nontrivial solution for M = " + std::to_string(M) +
                         " with u-degree bound " + std::to_string(bound) + "; the basis is too small");
  report.condition.polynomial = condition;
  report.condition.text = condition_text(condition);
  return report;
}

QuadSolution<Scalar> reference_tuple(const Rational& eps) {
  if (!in_catalog(eps)) throw CatalogMiss("no reference tuple for eps = " + eps.get_str());
  using P = BiPoly<Scalar>;
  const Scalar g = sym::g(), d = sym::delta(), e(eps);
  const P u = P::term(1, 0, Scalar(1)), v = P::term(0, 1, Scalar(1));
  auto k = [](const Scalar& s) { return P::constant(s); };
  auto ex = [](const P& p) { return GenFun<Scalar>::exponential(p); };
  QuadSolution<Scalar> q;
  q.epsilon = eps;
  if (eps == 0) {
    q.d_minus = ex(k(Scalar(1)));
  } else if (abs(eps) == Rational(1, 2)) {
    q.d_plus = ex(k(-(d * d * g.inverse())));
    q.d_minus = ex((k(g) - v * e) * Scalar(2));
    q.b_minus = ex(k(Scalar(1)));
  } else {
    const Scalar g2 = g * g, d2 = d * d, two(2);
    q.d_plus = ex((k(two * g * e) - v) * (two * g * d2));
    q.b_plus = ex(k(d2));
    q.b_minus = ex((v - k(two * g * e)) * (two * g2));
    q.d_minus = ex((u - k(g2)) * (Scalar(4) * g2 * e) + v * (k(two * g) - v * e) * (two * g2) - k(d2 * e));
  }
  return q;
}

bool proportional(const QuadSolution<Scalar>& a, const QuadSolution<Scalar>& b, RatFunc* factor) {
  std::optional<std::pair<Scalar, Scalar>> pivot;  // (a coefficient, b coefficient)
  auto pa = a.parts(), pb = b.parts();
  for (int i = 0; i < 4 && !pivot; ++i)
    for (const auto* part : {&pb[i]->poly, &pb[i]->exp}) {
      if (part->is_zero()) continue;
      const auto& [ij, cb] = *part->terms().begin();
      const BiPoly<Scalar>& other = part == &pb[i]->poly ? pa[i]->poly : pa[i]->exp;
      pivot.emplace(other.coeff(ij.first, ij.second), cb);
      break;
    }
  if (!pivot || pivot->first.is_zero()) return false;
  const auto& [ca, cb] = *pivot;
  for (int i = 0; i < 4; ++i) {
    GenFun<Scalar> lhs = cb * *pa[i], rhs = ca * *pb[i];
    if (!(lhs == rhs)) return false;
  }
  if (factor) {
    // move negative g powers into a common polynomial form
    Scalar lift = Scalar::monomial({std::max(0, -std::min(ca.min_degree(0), cb.min_degree(0))), 0});
    *factor = RatFunc(extend(ca * lift), extend(cb * lift));
  }
  return true;
}

json to_json(const DerivationReport& r) {
  json out;
  out["M"] = r.M;
  out["u_degree_bound"] = r.bound;
  out["gauge_dimension"] = r.gauge_dimension;
  json gauge = json::array();
  for (const auto& q : r.gauge_basis) gauge.push_back(to_json(q));
  out["gauge_basis"] = gauge;
  json poly = json::array();
  for (const auto& c : r.condition.polynomial) poly.push_back(to_fraction_string(c));
  json roots = json::array();
  for (const auto& c : r.condition.roots) roots.push_back(to_fraction_string(c));
  out["condition"] = {{"polynomial", poly}, {"roots", roots}, {"text", r.condition.text}};
  json cands = json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"epsilon", to_fraction_string(c.epsilon)},
                     {"nullity", c.nullity},
                     {"induced_rank", c.induced_rank},
                     {"new", c.fresh()}});
  out["candidates"] = cands;
  json sols = json::array();
  for (const auto& s : r.solutions) {
    json js{{"epsilon", to_fraction_string(s.epsilon)},
            {"tuple", to_json(s.tuple)},
            {"operator", to_json(s.op)},
            {"commutes_with_H", s.commutes},
            {"matches_reference", s.matches_reference}};
    if (s.matches_reference) js["reference_over_derived"] = s.normalization;
    sols.push_back(std::move(js));
  }
  out["solutions"] = sols;
  return out;
}

}  // namespace aqrm
