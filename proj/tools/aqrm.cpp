// Command-line front end: exact verification, derivation, discovery, scans.
#include "aqrm/derive.hpp"
#include "aqrm/spectrum.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace aqrm;

namespace {

// 0: all checks passed, 1: checks ran and failed, 2: usage or contract error.
constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string eps = "1/2", g, delta;
  double eps_num = 0.5, g_num = 0.8, delta_num = 0.7;
  int N = -1, D = -1, M = -1, bound = -1;
  double g_min = 0.05, g_max = 1.2;
  int steps = 400, levels = 8;
  std::string out, format;
};

Rational exact_arg(const std::string& name, const std::string& text) {
  if (text.find_first_of(".eE") != std::string::npos)
    throw UsageError(name + " takes an exact rational such as 4/5, got '" + text + "'");
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(name + ": " + e.what());
  }
}

std::string supported_list() {
  std::string out;
  for (const auto& e : supported_epsilons()) out += (out.empty() ? "" : ", ") + e.get_str();
  return out;
}

// Explicit --out wins; otherwise files go to $AQRM_OUT_DIR when it is set.
std::optional<std::filesystem::path> output_path(const Config& c, const std::string& default_name) {
  if (!c.out.empty()) return std::filesystem::path(c.out);
  if (const char* dir = std::getenv("AQRM_OUT_DIR"); dir && *dir) return std::filesystem::path(dir) / default_name;
  return std::nullopt;
}

void emit(const Config& c, const std::string& default_name, const std::function<void(std::ostream&)>& write) {
  auto path = output_path(c, default_name);
  if (!path) return;
  if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
  std::ofstream f(*path);
  if (!f) throw std::runtime_error("cannot write " + path->string());
  write(f);
  std::cout << "wrote " << path->string() << "\n";
}

void emit_json(const Config& c, const std::string& stem, const json& j) {
  if (c.format == "json" && !output_path(c, stem + ".json")) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  emit(c, stem + ".json", [&](std::ostream& o) { o << j.dump(2) << "\n"; });
}

int cmd_verify(const Config& c) {
  const Rational eps = exact_arg("--eps", c.eps);
  if (!in_catalog(eps)) throw UsageError("no catalog operator at eps = " + eps.get_str() + "; supported: " + supported_list());
  if (c.g.empty() != c.delta.empty()) throw UsageError("--g and --delta must be given together");

  std::vector<std::pair<std::string, ModelParams>> settings{{"symbolic g, Delta", ModelParams::symbolic(eps)}};
  if (!c.g.empty()) {
    Rational g = exact_arg("--g", c.g), d = exact_arg("--delta", c.delta);
    if (sgn(g) == 0 && eps != 0) throw UsageError("g = 0 is singular for this catalog entry");
    settings.push_back({"g = " + g.get_str() + ", Delta = " + d.get_str(), ModelParams::exact(g, d, eps)});
  }

  json report{{"eps", to_fraction_string(eps)}, {"normalization", catalog_normalization(eps)}, {"checks", json::array()}};
  bool all = true;
  auto record = [&](const std::string& where, const std::string& claim, bool ok) {
    all = all && ok;
    std::cout << (ok ? "  passed  " : "  FAILED  ") << claim << "  [" << where << "]\n";
    report["checks"].push_back({{"claim", claim}, {"setting", where}, {"holds", ok}});
  };
  std::cout << "eps = " << eps.get_str() << "\n";
  for (const auto& [where, p] : settings) {
    const BlockOp<Scalar> j = j_catalog(p), h = build_hamiltonian(p);
    record(where, "[H, J] = 0", commutator(h, j).is_zero());
    record(where, "J is self-adjoint", adjoint(j) == j);
    if (p.g == sym::g()) {
      bool minus = check_delta_flip(j, -1), plus = check_delta_flip(j, 1);
      record(where, minus ? "sigma_x J(-Delta) sigma_x = -J" : "sigma_x J(-Delta) sigma_x = J", minus || plus);
    }
    IdentityReport id = verify_jsquared(p);
    record(where, id.claim, id.holds());
  }
  report["passed"] = all;
  emit_json(c, "verify", report);
  return all ? kPass : kFail;
}

int cmd_derive(const Config& c) {
  const int M = c.M < 0 ? 0 : c.M;
  DerivationReport r;
  try {
    r = derive_symmetry(M, c.bound);
  } catch (const BoundExhausted& e) {
    std::cout << e.what() << "\n";
    return kFail;
  }
  std::cout << "M = " << r.M << ", u-degree bound " << r.bound << ", gauge dimension " << r.gauge_dimension << "\n";
  std::cout << "condition: " << r.condition.text << "\n";
  for (const auto& cand : r.candidates)
    std::cout << "  eps = " << cand.epsilon.get_str() << ": nullity " << cand.nullity << ", new " << cand.fresh()
              << "\n";
  bool all = true;
  for (const auto& s : r.solutions) {
    std::cout << "solution at eps = " << s.epsilon.get_str() << ": commutes " << (s.commutes ? "yes" : "no")
              << ", matches reference tuple " << (s.matches_reference ? "yes" : "no");
    if (!s.normalization.empty()) std::cout << " (reference = " << s.normalization << " * derived)";
    std::cout << "\n";
    all = all && s.commutes;
  }
  emit_json(c, "derive_M" + std::to_string(M), to_json(r));
  return all ? kPass : kFail;
}

int cmd_scan(const Config& c) {
  const int N = c.N < 0 ? 60 : c.N;
  ScanResult r = crossing_scan(c.eps_num, c.delta_num, c.g_min, c.g_max, c.steps, N, c.levels);
  std::cout << "eps = " << format_double(r.eps) << ", Delta = " << format_double(r.delta) << ", N = " << N
            << ", levels = " << r.K << ", grid points = " << r.points.size() << "\n";
  for (const auto& m : r.min_gaps)
    std::cout << "  pair (" << m.level << "," << m.level + 1 << "): min gap " << format_double(m.gap) << " at g = "
              << format_double(m.g) << (m.gap < 1e-6 ? "  crossing" : "") << "\n";
  if (!r.has_crossing()) std::cout << "no crossings detected\n";
  if (!r.unconverged_levels.empty()) {
    std::cout << "unconverged levels:";
    for (int k : r.unconverged_levels) std::cout << " " << k;
    std::cout << "\n";
  }
  if (c.format == "json")
    emit_json(c, "scan", to_json(r));
  else
    emit(c, "scan.csv", [&](std::ostream& o) { write_scan_csv(o, r); });
  return r.unconverged_levels.empty() ? kPass : kFail;
}

int cmd_discover(const Config& c) {
  const int D = c.D < 0 ? 1 : c.D, N = c.N < 0 ? 40 : c.N;
  NumericParams p{c.g_num, c.delta_num, c.eps_num};
  DiscoveryResult r = discover_symmetry(p, D, N);
  json out = to_json(r);
  std::cout << "nullspace dimension " << r.dimension << " (gap ratio " << format_double(r.gap_ratio) << ")"
            << (r.ambiguous ? "  AMBIGUOUS" : "") << "\n";
  if (r.catalog_error) std::cout << "catalog deviation " << format_double(*r.catalog_error) << "\n";
  if (r.exact) std::cout << "rational reconstruction " << (r.exact_verified ? "verified exactly" : "not verified") << "\n";
  if (r.dimension == 1) {
    for (std::size_t b = 0; b < r.basis.size(); ++b)
      if (r.vectors[0](b) != 0)
        std::cout << "  J" << r.basis[b].row + 1 << r.basis[b].col + 1 << ": P a+^" << r.basis[b].m << " a^"
                  << r.basis[b].n << "  " << format_double(r.vectors[0](b)) << "\n";
    const int M = c.M < 0 ? D : c.M;
    const int fitN = std::max(N, 2 * std::max(D, M) + 12);
    DiscoveryResult wide = fitN == N ? r : discover_symmetry(p, D, fitN);
    JSquaredFit f = fit_jsquared_poly(block_matrix(assemble_ansatz(wide.basis, wide.vectors[0]), fitN),
                                      truncated_hamiltonian(p, fitN).matrix, fitN, M, interior_bound(fitN, D, M));
    std::cout << "J^2 fit with M = " << M << ": relative residual " << format_double(f.residual) << "\n";
    out["jsquared_fit"] = to_json(f);
  }
  emit_json(c, "discover", out);
  return r.ambiguous ? kFail : kPass;
}

int cmd_fit(const Config& c) {
  const int M = c.M < 0 ? 1 : c.M, D = c.D < 0 ? M : c.D, N = c.N < 0 ? 60 : c.N;
  NumericParams p{c.g_num, c.delta_num, c.eps_num};
  Eigen::MatrixXd J;
  std::optional<std::vector<double>> reference;
  if (auto cat = catalog_operator(p)) {
    J = block_matrix(*cat, N);
    if (p.eps != 0 || M == 0) reference = catalog_alpha(p);
  } else {
    DiscoveryResult d = discover_symmetry(p, D, N);
    if (d.dimension != 1) {
      std::cout << "no unique symmetry found (nullspace dimension " << d.dimension << ")\n";
      return kFail;
    }
    J = block_matrix(assemble_ansatz(d.basis, d.vectors[0]), N);
  }
  JSquaredFit f = fit_jsquared_poly(J, truncated_hamiltonian(p, N).matrix, N, M, interior_bound(N, D, M));
  json out = to_json(f);
  bool ok = f.residual < 1e-7 && !f.ill_conditioned;
  std::cout << "relative residual " << format_double(f.residual) << ", condition " << format_double(f.condition) << "\n";
  for (int i = 0; i <= M; ++i) std::cout << "  alpha_" << i << " = " << format_double(f.alpha(i)) << "\n";
  if (reference) {
    out["symbolic_alpha"] = *reference;
    if (reference->size() != static_cast<std::size_t>(M + 1)) {
      std::cout << "symbolic identity has degree " << reference->size() - 1 << "\n";
      ok = false;
    } else {
      for (int i = 0; i <= M; ++i) {
        bool match = std::abs(f.alpha(i) - (*reference)[i]) <= 1e-8 * std::abs((*reference)[i]);
        if (!match) std::cout << "  alpha_" << i << " differs from symbolic " << format_double((*reference)[i]) << "\n";
        ok = ok && match;
      }
    }
  }
  emit_json(c, "fit_jsq", out);
  return ok ? kPass : kFail;
}

int cmd_export(const Config& c) {
  const Rational eps = exact_arg("--eps", c.eps);
  if (!in_catalog(eps)) throw UsageError("no catalog operator at eps = " + eps.get_str() + "; supported: " + supported_list());
  if (c.g.empty() != c.delta.empty()) throw UsageError("--g and --delta must be given together");
  ModelParams p = ModelParams::symbolic(eps);
  if (!c.g.empty()) p = ModelParams::exact(exact_arg("--g", c.g), exact_arg("--delta", c.delta), eps);
  json out{{"eps", to_fraction_string(eps)}, {"normalization", catalog_normalization(eps)}, {"J", to_json(j_catalog(p))}};
  Config jc = c;
  jc.format = "json";
  emit_json(jc, "J", out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden-symmetry operators of the asymmetric quantum Rabi model"};
  app.require_subcommand(1);
  Config c;

  auto exact_params = [&](CLI::App* s) {
    s->add_option("--eps", c.eps, "bias as an exact rational")->capture_default_str();
    s->add_option("--g", c.g, "coupling as an exact rational (omit for symbolic)");
    s->add_option("--delta", c.delta, "qubit splitting as an exact rational (omit for symbolic)");
  };
  auto numeric_params = [&](CLI::App* s) {
    s->add_option("--eps", c.eps_num, "bias")->capture_default_str();
    s->add_option("--g", c.g_num, "coupling")->capture_default_str();
    s->add_option("--delta", c.delta_num, "qubit splitting")->capture_default_str();
  };
  auto outputs = [&](CLI::App* s, const std::string& def) {
    s->add_option("--out", c.out, "output file (default: $AQRM_OUT_DIR/<name>)");
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->default_str(def);
  };

  auto* verify = app.add_subcommand("verify", "exact commutator, adjoint, Delta-flip and J^2 checks");
  exact_params(verify);
  outputs(verify, "json");

  auto* derive = app.add_subcommand("derive", "finite-ansatz derivation with symbolic bias");
  derive->add_option("--M", c.M, "v-degree of the ansatz")->check(CLI::NonNegativeNumber);
  derive->add_option("--bound", c.bound, "u-degree bound (default M + 2)");
  outputs(derive, "json");

  auto* scan = app.add_subcommand("scan", "lowest levels over a g grid with refined minimum gaps");
  scan->add_option("--eps", c.eps_num, "bias")->capture_default_str();
  scan->add_option("--delta", c.delta_num, "qubit splitting")->capture_default_str();
  scan->add_option("--g-min", c.g_min)->capture_default_str();
  scan->add_option("--g-max", c.g_max)->capture_default_str();
  scan->add_option("--steps", c.steps)->capture_default_str();
  scan->add_option("--N", c.N, "Fock truncation (default 60)");
  scan->add_option("--levels", c.levels)->capture_default_str();
  outputs(scan, "csv");

  auto* discover = app.add_subcommand("discover", "numeric nullspace of the commutator map");
  numeric_params(discover);
  discover->add_option("--D", c.D, "total boson degree of the ansatz (default 1)");
  discover->add_option("--N", c.N, "Fock truncation (default 40)");
  discover->add_option("--M", c.M, "degree of the J^2 fit (default D)");
  outputs(discover, "json");

  auto* fit = app.add_subcommand("fit-jsq", "least-squares fit of J^2 by a polynomial in H");
  numeric_params(fit);
  fit->add_option("--M", c.M, "polynomial degree (default 1)");
  fit->add_option("--D", c.D, "ansatz degree when J must be discovered (default M)");
  fit->add_option("--N", c.N, "Fock truncation (default 60)");
  outputs(fit, "json");

  auto* exp = app.add_subcommand("export-op", "write the catalog operator as JSON");
  exact_params(exp);
  outputs(exp, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(c);
    if (derive->parsed()) return cmd_derive(c);
    if (scan->parsed()) return cmd_scan(c);
    if (discover->parsed()) return cmd_discover(c);
    if (fit->parsed()) return cmd_fit(c);
    return cmd_export(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
