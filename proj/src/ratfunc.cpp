#include "aqrm/ratfunc.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace aqrm {

namespace {

using Exp = ExtScalar::Exponent;
using IPoly = std::map<Exp, Integer>;

void check_polynomial(const ExtScalar& p) {
  for (const auto& [e, c] : p.terms())
    if (e[0] < 0) throw std::domain_error("polynomial arithmetic: negative power of g");
}

Integer max_norm(const IPoly& p) {
  Integer m = 0;
  for (const auto& [e, c] : p) m = std::max(m, Integer(abs(c)));
  return m;
}

Integer content(const IPoly& p) {
  Integer c = 0;
  for (const auto& [e, v] : p) c = gcd(c, v);
  return c;
}

void iadd(IPoly& p, const Exp& e, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = p.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

IPoly to_integer(const ExtScalar& p) {
  Integer den = 1;
  for (const auto& [e, c] : p.terms()) den = lcm(den, c.get_den());
  IPoly out;
  for (const auto& [e, c] : p.terms()) out[e] = c.get_num() * (den / c.get_den());
  return out;
}

ExtScalar to_ext(const IPoly& p) {
  ExtScalar out;
  for (const auto& [e, c] : p) out.add_term(e, Rational(c));
  return out;
}

bool idivide(const IPoly& a, const IPoly& b, IPoly& q) {
  q.clear();
  if (b.empty()) return false;
  IPoly r = a;
  const auto& [lb, cb] = *b.rbegin();
  while (!r.empty()) {
    auto [lr, cr] = *r.rbegin();
    Exp t;
    for (int i = 0; i < 3; ++i) {
      t[i] = lr[i] - lb[i];
      if (t[i] < 0) return false;
    }
    if (!mpz_divisible_p(cr.get_mpz_t(), cb.get_mpz_t())) return false;
    Integer f = cr / cb;
    iadd(q, t, f);
    for (const auto& [e, c] : b) {
      Exp s;
      for (int i = 0; i < 3; ++i) s[i] = e[i] + t[i];
      iadd(r, s, -f * c);
    }
  }
  return true;
}

IPoly evaluate_var(const IPoly& p, int var, const Integer& xi) {
  IPoly out;
  for (const auto& [e, c] : p) {
    Integer w;
    mpz_pow_ui(w.get_mpz_t(), xi.get_mpz_t(), static_cast<unsigned long>(e[var]));
    Exp f = e;
    f[var] = 0;
    iadd(out, f, c * w);
  }
  return out;
}

// Symmetric xi-adic expansion of every coefficient into powers of `var`.
IPoly interpolate_var(const IPoly& gamma, int var, const Integer& xi) {
  IPoly out;
  const Integer half = xi / 2;
  for (const auto& [e, c0] : gamma) {
    Integer c = c0;
    for (int i = 0; c != 0; ++i) {
      Integer r = c % xi;  // sign follows c
      if (r > half) r -= xi;
      if (r < -half) r += xi;
      Exp f = e;
      f[var] = i;
      iadd(out, f, r);
      c = (c - r) / xi;
    }
  }
  return out;
}

IPoly primitive(IPoly p) {
  if (p.empty()) return p;
  Integer c = content(p);
  if (p.rbegin()->second < 0) c = -c;
  for (auto& [e, v] : p) v /= c;
  return p;
}

// Heuristic gcd over Z[x_0 .. x_{k-1}].
std::optional<IPoly> heuristic_gcd(const IPoly& a, const IPoly& b, int k) {
  if (a.empty()) return primitive(b);
  if (b.empty()) return primitive(a);
  Integer ca = content(a), cb = content(b);
  Integer common = gcd(ca, cb);
  if (k == 0) return IPoly{{Exp{}, common}};
  IPoly pa = a, pb = b;
  for (auto& [e, v] : pa) v /= ca;
  for (auto& [e, v] : pb) v /= cb;

  Integer xi = 2 * std::min(max_norm(pa), max_norm(pb)) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    IPoly ea = evaluate_var(pa, k - 1, xi), eb = evaluate_var(pb, k - 1, xi);
    if (!ea.empty() && !eb.empty()) {
      auto gamma = heuristic_gcd(ea, eb, k - 1);
      if (!gamma) return std::nullopt;
      IPoly cand = primitive(interpolate_var(*gamma, k - 1, xi));
      IPoly q;
      if (!cand.empty() && idivide(pa, cand, q) && idivide(pb, cand, q)) {
        for (auto& [e, v] : cand) v *= common;
        return cand;
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

Exp min_exponents(const ExtScalar& p) {
  Exp m{};
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    for (int i = 0; i < 3; ++i) m[i] = first ? e[i] : std::min(m[i], e[i]);
    first = false;
  }
  return m;
}

ExtScalar shift(const ExtScalar& p, const Exp& by, int sign) {
  ExtScalar out;
  for (const auto& [e, c] : p.terms()) {
    Exp f;
    for (int i = 0; i < 3; ++i) f[i] = e[i] + sign * by[i];
    out.add_term(f, c);
  }
  return out;
}

Rational leading_coefficient(const ExtScalar& p) { return p.terms().rbegin()->second; }

}  // namespace

bool divide_exact(const ExtScalar& a, const ExtScalar& b, ExtScalar& q) {
  check_polynomial(a);
  check_polynomial(b);
  q = ExtScalar();
  if (b.is_zero()) return false;
  ExtScalar r = a;
  const auto& [lb, cb] = *b.terms().rbegin();
  while (!r.is_zero()) {
    auto [lr, cr] = *r.terms().rbegin();
    Exp t;
    for (int i = 0; i < 3; ++i) {
      t[i] = lr[i] - lb[i];
      if (t[i] < 0) return false;
    }
    ExtScalar m = ExtScalar::monomial(t, cr / cb);
    q += m;
    r -= m * b;
  }
  return true;
}

ExtScalar primitive_part(const ExtScalar& p, Rational* removed) {
  if (p.is_zero()) {
    if (removed) *removed = 0;
    return p;
  }
  Integer den = 1, num = 0;
  for (const auto& [e, c] : p.terms()) {
    den = lcm(den, c.get_den());
    num = gcd(num, c.get_num());
  }
  Rational factor(num, den);
  factor.canonicalize();
  if (sgn(leading_coefficient(p)) < 0) factor = -factor;
  ExtScalar out = p;
  out *= Rational(1 / factor);
  if (removed) *removed = factor;
  return out;
}

ExtScalar poly_gcd(const ExtScalar& a, const ExtScalar& b) {
  check_polynomial(a);
  check_polynomial(b);
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  Exp ma = min_exponents(a), mb = min_exponents(b), m;
  for (int i = 0; i < 3; ++i) m[i] = std::min(ma[i], mb[i]);
  ExtScalar mono = ExtScalar::monomial(m);
  ExtScalar ra = shift(a, ma, -1), rb = shift(b, mb, -1);
  if (ra.is_constant() || rb.is_constant()) return mono;
  auto h = heuristic_gcd(to_integer(ra), to_integer(rb), 3);
  if (!h) return mono;
  return primitive_part(to_ext(*h) * mono);
}

RatFunc::RatFunc(const ExtScalar& p) : num_(p), den_(1L) { normalize(); }
RatFunc::RatFunc(const ExtScalar& num, const ExtScalar& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = ExtScalar(1L);
    return;
  }
  // negative powers of g move to the denominator
  int low = std::min(num_.min_degree(0), den_.min_degree(0));
  if (low < 0) {
    ExtScalar lift = ExtScalar::variable(0, -low);
    num_ = num_ * lift;
    den_ = den_ * lift;
  }
  if (!den_.is_constant()) {
    ExtScalar common = poly_gcd(num_, den_);
    if (!common.is_constant()) {
      ExtScalar q;
      divide_exact(num_, common, q);
      num_ = q;
      divide_exact(den_, common, q);
      den_ = q;
    }
  }
  Rational lc = leading_coefficient(den_);
  if (lc != 1) {
    Rational inv = 1 / lc;
    num_ *= inv;
    den_ *= inv;
  }
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  ExtScalar common = poly_gcd(a.den_, b.den_), qa, qb;
  divide_exact(a.den_, common, qa);
  divide_exact(b.den_, common, qb);
  return RatFunc(a.num_ * qb + b.num_ * qa, a.den_ * qb);
}

RatFunc operator-(const RatFunc& a) {
  RatFunc out = a;
  out.num_ = -out.num_;
  return out;
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  ExtScalar g1 = poly_gcd(a.num_, b.den_), g2 = poly_gcd(b.num_, a.den_);
  ExtScalar an, bd, bn, ad;
  divide_exact(a.num_, g1, an);
  divide_exact(b.den_, g1, bd);
  divide_exact(b.num_, g2, bn);
  divide_exact(a.den_, g2, ad);
  RatFunc out;
  out.num_ = an * bn;
  out.den_ = ad * bd;
  Rational lc = leading_coefficient(out.den_);
  if (lc != 1) {
    out.num_ *= Rational(1 / lc);
    out.den_ *= Rational(1 / lc);
  }
  return out;
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
  RatFunc inv;
  inv.num_ = b.den_;
  inv.den_ = b.num_;
  Rational lc = leading_coefficient(inv.den_);
  inv.num_ *= Rational(1 / lc);
  inv.den_ *= Rational(1 / lc);
  return a * inv;
}

std::string RatFunc::to_string() const {
  if (den_.is_constant()) return aqrm::to_string(num_);
  return "(" + aqrm::to_string(num_) + ") / (" + aqrm::to_string(den_) + ")";
}

UniPoly uni_trim(UniPoly p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
  return p;
}

UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
  if (a.empty() || b.empty()) return {};
  UniPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return uni_trim(out);
}

namespace {

UniPoly uni_mod(UniPoly a, const UniPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    a = uni_trim(a);
  }
  return a;
}

UniPoly uni_monic(UniPoly p) {
  if (p.empty()) return p;
  Rational lc = p.back();
  for (auto& c : p) c /= lc;
  return p;
}

UniPoly uni_derivative(const UniPoly& p) {
  UniPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<long>(i));
  return uni_trim(out);
}

Rational uni_eval(const UniPoly& p, const Rational& x) {
  Rational out = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) out = out * x + *it;
  return out;
}

}  // namespace

UniPoly uni_gcd(UniPoly a, UniPoly b) {
  a = uni_trim(std::move(a));
  b = uni_trim(std::move(b));
  while (!b.empty()) {
    UniPoly r = uni_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return uni_monic(a);
}

std::string uni_to_string(const UniPoly& p, const char* var) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t k = p.size(); k-- > 0;) {
    const Rational& c = p[k];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    out += first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
    first = false;
    std::string v = k == 0 ? "" : (k == 1 ? std::string(var) : std::string(var) + "^" + std::to_string(k));
    if (v.empty())
      out += mag.get_str();
    else
      out += (mag == 1 ? "" : mag.get_str() + "*") + v;
  }
  return out;
}

std::vector<Rational> rational_roots(const UniPoly& input) {
  UniPoly p = uni_trim(input);
  std::vector<Rational> roots;
  if (p.size() <= 1) return roots;
  // square-free part, then the root at zero
  UniPoly sf = p;
  UniPoly common = uni_gcd(p, uni_derivative(p));
  if (common.size() > 1) {
    UniPoly q;
    UniPoly rest = sf;
    // exact long division sf / common
    q.assign(rest.size() - common.size() + 1, Rational(0));
    for (std::size_t k = q.size(); k-- > 0;) {
      q[k] = rest[k + common.size() - 1] / common.back();
      for (std::size_t i = 0; i < common.size(); ++i) rest[k + i] -= q[k] * common[i];
    }
    sf = uni_trim(q);
  }
  if (sgn(sf.front()) == 0) {
    roots.push_back(0);
    sf.erase(sf.begin());
  }
  const int n = static_cast<int>(sf.size()) - 1;
  if (n >= 1) {
    // integer coefficients; a rational root p/q has q | leading coefficient
    Integer den = 1;
    for (const auto& c : sf) den = lcm(den, c.get_den());
    std::vector<Integer> ic;
    for (const auto& c : sf) ic.push_back(c.get_num() * (den / c.get_den()));
    const Integer lead = abs(ic.back());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -(ic[i].get_d() / ic.back().get_d());
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    for (int i = 0; i < n; ++i) {
      auto z = solver.eigenvalues()[i];
      if (std::abs(z.imag()) > 1e-6 * (1 + std::abs(z.real()))) continue;
      for (long delta_step : {0L, -1L, 1L}) {
        double scaled = z.real() * lead.get_d();
        if (!std::isfinite(scaled) || std::abs(scaled) > 9e15) break;
        Rational cand(Integer(static_cast<long>(std::llround(scaled)) + delta_step), lead);
        cand.canonicalize();
        if (sgn(uni_eval(sf, cand)) == 0) {
          roots.push_back(cand);
          break;
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

UniPoly epsilon_content(const ExtScalar& p) {
  std::map<std::pair<int, int>, UniPoly> groups;
  for (const auto& [e, c] : p.terms()) {
    UniPoly& u = groups[{e[0], e[1]}];
    if (static_cast<int>(u.size()) <= e[2]) u.resize(e[2] + 1, Rational(0));
    u[e[2]] = c;
  }
  UniPoly out;
  for (auto& [k, u] : groups) {
    out = uni_gcd(out, u);
    if (out.size() == 1) break;
  }
  return out;
}

Elimination eliminate(std::vector<std::vector<RatFunc>> rows, int columns) {
  Elimination out;
  std::vector<bool> used(rows.size(), false);
  std::vector<int> pivot_row_of(columns, -1);
  for (int col = 0; col < columns; ++col) {
    // cheapest available pivot in this column
    int best = -1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (used[r] || rows[r][col].is_zero()) continue;
      if (best < 0 || rows[r][col].size() < rows[best][col].size()) best = static_cast<int>(r);
    }
    if (best < 0) continue;
    used[best] = true;
    pivot_row_of[col] = best;
    out.pivot_columns.push_back(col);
    out.pivots.push_back(rows[best][col]);
    const RatFunc inv = RatFunc(Rational(1)) / rows[best][col];
    for (int c = col; c < columns; ++c)
      if (!rows[best][c].is_zero()) rows[best][c] = rows[best][c] * inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == best || rows[r][col].is_zero()) continue;
      const RatFunc f = rows[r][col];
      for (int c = col; c < columns; ++c)
        if (!rows[best][c].is_zero()) rows[r][c] = rows[r][c] - f * rows[best][c];
    }
  }
  for (int free = 0; free < columns; ++free) {
    if (pivot_row_of[free] >= 0) continue;
    std::vector<RatFunc> v(columns);
    v[free] = RatFunc(Rational(1));
    for (int col : out.pivot_columns) v[col] = -rows[pivot_row_of[col]][free];
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

}  // namespace aqrm
