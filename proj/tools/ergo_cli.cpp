// ergo: command-line front end over the ergo library.
//
//   ergo <command> [--config run.json] [--preset NAME] [--out DIR] [--seed N] [overrides]
//
// Exit codes: 0 success, 1 check failure or computation error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ergo/ergopt.hpp"
#include "ergo/export.hpp"
#include "ergo/involution.hpp"
#include "ergo/presets.hpp"
#include "ergo/thermo.hpp"
#include "ergo/transport.hpp"
#include "ergo/verify.hpp"

using namespace ergo;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string preset;
  std::string system;
  std::string potential;
  std::string out = "ergo_out";
  std::string kernel = "auto";  // auto | closed | cocycle
  std::string method = "MixedPartial";
  int n_grid = 0;      // 0: module default
  int depth = 48;
  int max_period = 0;  // 0: preset default, else 12
  int kernel_grid = 64;
  std::vector<double> beta;
  std::uint64_t seed = 1;
  double tol_subaction = 1e-12;
  double tol_eigen = 1e-10;
  double tol_twist = 1e-9;
};

// Values from the JSON file fill every field the command line left unset.
void merge_config_file(const std::string& path, RunConfig& cfg, const std::map<std::string, bool>& given) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(is);
  } catch (const std::exception& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config '" + path + "' must be a JSON object");
  static const std::vector<std::string> known{"preset", "system",     "potential", "out",  "kernel", "method",
                                              "n_grid", "depth",      "max_period", "kernel_grid", "beta", "seed",
                                              "tolerances"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw UsageError("unknown config key '" + k + "'");
  auto take = [&](const char* key, auto& field) {
    if (!j.contains(key) || given.at(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const std::exception& e) {
      throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
  };
  take("preset", cfg.preset);
  take("system", cfg.system);
  take("potential", cfg.potential);
  take("out", cfg.out);
  take("kernel", cfg.kernel);
  take("method", cfg.method);
  take("n_grid", cfg.n_grid);
  take("depth", cfg.depth);
  take("max_period", cfg.max_period);
  take("kernel_grid", cfg.kernel_grid);
  take("seed", cfg.seed);
  if (j.contains("beta") && !given.at("beta")) {
    if (j["beta"].is_number())
      cfg.beta = {j["beta"].get<double>()};
    else
      take("beta", cfg.beta);
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) throw UsageError("config key 'tolerances' must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number()) throw UsageError("tolerance '" + k + "' must be a number");
      const double x = v.get<double>();
      if (k == "subaction" && !given.at("tol_subaction")) cfg.tol_subaction = x;
      else if (k == "eigen" && !given.at("tol_eigen")) cfg.tol_eigen = x;
      else if (k == "twist" && !given.at("tol_twist")) cfg.tol_twist = x;
      else if (k != "subaction" && k != "eigen" && k != "twist") throw UsageError("unknown tolerance '" + k + "'");
    }
  }
}

void validate(const RunConfig& c) {
  if (c.n_grid != 0 && c.n_grid < 2) throw UsageError("n_grid must be >= 2");
  if (c.depth < 1) throw UsageError("depth must be >= 1");
  if (c.max_period < 0 || c.max_period > kMaxPeriodCap)
    throw UsageError("max_period must lie in 1.." + std::to_string(kMaxPeriodCap));
  if (c.kernel_grid < 2) throw UsageError("kernel_grid must be >= 2");
  for (double b : c.beta)
    if (!(b > 0)) throw UsageError("beta values must be positive");
  if (!(c.tol_subaction > 0 && c.tol_eigen > 0 && c.tol_twist > 0)) throw UsageError("tolerances must be positive");
  if (c.kernel != "auto" && c.kernel != "closed" && c.kernel != "cocycle")
    throw UsageError("kernel must be auto, closed or cocycle");
  if (c.out.empty()) throw UsageError("out must name a directory");
}

// Everything a command needs, resolved from the config.
struct Problem {
  std::string label;
  System system;
  Potential A;
  std::optional<Kernel> closed_W;
  std::function<double(double)> V_closed;
  int max_period = 12;
};

Problem resolve(const RunConfig& c) {
  Problem p;
  if (c.preset.empty() && c.potential.empty()) throw UsageError("give --preset or --potential");
  try {
    if (!c.preset.empty()) {
      const Preset pr = preset(c.preset);
      p.label = pr.name;
      p.system = pr.system;
      p.A = pr.A;
      p.closed_W = pr.W;
      p.V_closed = pr.V_closed;
      p.max_period = pr.max_period;
    } else {
      p.system = System::minus_doubling();
    }
    if (!c.system.empty()) {
      p.system = system_from_name(c.system);
      if (p.system.kind == SystemKind::FullShift2) throw UsageError("full-shift has no interval potentials");
      if (!c.preset.empty() && p.system.kind != preset(c.preset).system.kind) {
        p.closed_W.reset();
        p.V_closed = nullptr;
      }
    }
    if (!c.potential.empty()) {
      p.A = parse_potential(c.potential);
      p.label = p.label.empty() ? c.potential : p.label + " with " + c.potential;
      p.closed_W.reset();
      p.V_closed = nullptr;
      if (p.A.form == PotentialForm::Polynomial && p.A.coeffs.size() <= 3 &&
          p.system.kind == SystemKind::MinusDoublingMap) {
        const Eigen::VectorXd k = p.A.coeffs;
        p.closed_W = Kernel::closed_quadratic(k.size() > 0 ? k(0) : 0.0, k.size() > 1 ? k(1) : 0.0,
                                              k.size() > 2 ? k(2) : 0.0);
      } else if (p.A.form == PotentialForm::LogGauss && p.system.kind == SystemKind::GaussMap) {
        const double s = p.A.log_scale;
        p.closed_W = Kernel::from_function([s](double x, double y) { return -s * std::log1p(x * y); },
                                           "-" + format_real(s) + " log(1+xy)");
      }
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.max_period > 0) p.max_period = c.max_period;
  return p;
}

Kernel resolve_kernel(const RunConfig& c, const Problem& p) {
  if (c.kernel == "closed" || (c.kernel == "auto" && p.closed_W)) {
    if (!p.closed_W) throw UsageError("no closed-form kernel for this potential; use --kernel cocycle");
    return *p.closed_W;
  }
  return fundamental_kernel(p.system, p.A, 0.5, c.depth);
}

std::string out_path(const RunConfig& c, const std::string& file) { return c.out + "/" + file; }

void emit(const RunConfig& c, const std::string& file, const Json& j) {
  const std::string body = j.dump(2) + "\n";
  write_file(out_path(c, file), body);
  std::cout << body;
}

std::string kernel_form_name(KernelForm f) {
  switch (f) {
    case KernelForm::ClosedQuadratic: return "ClosedQuadratic";
    case KernelForm::GaussLog: return "GaussLog";
    case KernelForm::CocycleSeries: return "CocycleSeries";
    case KernelForm::ExplicitGrid: return "ExplicitGrid";
    case KernelForm::Custom: return "Custom";
  }
  return "?";
}

void warn_lower_bound(int max_period) {
  std::cerr << "warning: m is the best periodic-orbit average up to period " << max_period
            << "; it is a lower bound for m(A)\n";
}

int cmd_subaction(const RunConfig& c) {
  const Problem p = resolve(c);
  SubactionOptions so;
  if (c.n_grid) so.n_grid = c.n_grid;
  so.max_period = p.max_period;
  so.tol = c.tol_subaction;
  const SubactionResult r = calibrated_subaction(p.system, p.A, so);
  warn_lower_bound(p.max_period);
  write_file(out_path(c, "subaction.csv"), grid_csv(r.V));

  Json j;
  j["potential"] = p.label;
  j["system"] = p.system.name();
  j["m"] = r.m;
  j["m_is_lower_bound"] = true;
  j["max_period"] = p.max_period;
  j["residual"] = r.residual;
  j["calibrated"] = r.calibrated;
  j["subaction"] = to_json(r);
  if (p.V_closed) {
    double lo = INFINITY, hi = -INFINITY;
    for (Eigen::Index i = 0; i < r.V.size(); ++i) {
      const double d = r.V[i] - p.V_closed(r.V.point(i));
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    j["closed_form_sup_error"] = 0.5 * (hi - lo);
  }
  if (!c.beta.empty()) {
    ThermoOptions to;
    if (c.n_grid) to.n_grid = c.n_grid;
    to.tol_eig = c.tol_eigen;
    Json th = Json::array();
    for (double b : c.beta) {
      const EigenPair e = eigenpair(p.system, p.A, b, to);
      const GridFunction vb = v_beta(p.system, p.A, b, to);
      const std::string file = "v_beta_" + format_real(b) + ".csv";
      write_file(out_path(c, file), grid_csv(vb));
      double err = 0.0;
      for (Eigen::Index i = 0; i < vb.size(); ++i) err = std::max(err, std::abs(vb[i] - r.V(vb.point(i))));
      th.push_back({{"beta", b},
                    {"log_eigenvalue", e.log_eigenvalue},
                    {"pressure_over_beta", e.log_eigenvalue / b},
                    {"sup_distance_to_subaction", err},
                    {"file", file}});
    }
    j["thermo"] = th;
  }
  emit(c, "subaction.json", j);
  return r.calibrated ? 0 : 1;
}

int cmd_kernel(const RunConfig& c) {
  const Problem p = resolve(c);
  const Kernel W = resolve_kernel(c, p);
  write_file(out_path(c, "kernel.csv"), kernel_csv(W, c.kernel_grid));
  Json j;
  j["potential"] = p.label;
  j["system"] = p.system.name();
  j["kernel"] = W.label;
  j["form"] = kernel_form_name(W.form);
  if (W.form == KernelForm::CocycleSeries) {
    j["depth"] = W.depth;
    j["tail_bound"] = real_json(W.tail_bound);
  }
  j["grid"] = c.kernel_grid;
  int code = 0;
  try {
    const Potential As = dual_potential(p.system, p.A, W);
    j["cohomology_residual"] = cohomology_residual(p.system, p.A, W, As, 1000, c.seed);
    j["involution_kernel"] = true;
  } catch (const NotInvolutionKernel& e) {
    j["involution_kernel"] = false;
    j["error"] = e.what();
    code = 1;
  }
  emit(c, "kernel.json", j);
  return code;
}

int cmd_dual(const RunConfig& c) {
  const Problem p = resolve(c);
  const Kernel W = resolve_kernel(c, p);
  Json j;
  j["potential"] = p.label;
  j["system"] = p.system.name();
  j["kernel"] = W.label;
  Potential As;
  try {
    As = dual_potential(p.system, p.A, W);
  } catch (const NotInvolutionKernel& e) {
    j["involution_kernel"] = false;
    j["error"] = e.what();
    emit(c, "dual.json", j);
    return 1;
  }
  const GridFunction g = GridFunction::sample(GridLayout::Cells, c.kernel_grid, [&](double y) { return As(y); });
  write_file(out_path(c, "dual.csv"), grid_csv(g));
  double dev = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) dev = std::max(dev, std::abs(g[i] - p.A(g.point(i))));
  j["involution_kernel"] = true;
  j["cohomology_residual"] = cohomology_residual(p.system, p.A, W, As, 1000, c.seed);
  j["max_abs_dual_minus_potential"] = dev;
  j["involutive"] = dev < 1e-9;
  emit(c, "dual.json", j);
  return 0;
}

int cmd_twist(const RunConfig& c) {
  const Problem p = resolve(c);
  const Kernel W = resolve_kernel(c, p);
  TwistMethod method;
  try {
    method = twist_method_from_name(c.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  TwistOptions to;
  to.margin_tol = c.tol_twist;
  if (c.n_grid) to.n_grid = c.n_grid;
  Json j = to_json(twist_check(W, method, to));
  j["kernel"] = W.label;
  emit(c, "twist.json", j);
  return 0;
}

int cmd_transport(const RunConfig& c) {
  const Problem p = resolve(c);
  const Kernel W = resolve_kernel(c, p);
  const CriticalValue cv = critical_value(p.system, p.A, p.max_period);
  warn_lower_bound(p.max_period);
  std::vector<double> weights(cv.ties.size(), 1.0 / static_cast<double>(cv.ties.size()));
  const ExtensionMeasure ext = natural_extension_measure(p.system, cv.ties, weights);

  // V from the closed form when there is one, else Lax-Oleinik
  std::function<double(double)> V = p.V_closed;
  double gamma_tol = 1e-8;
  if (!V) {
    SubactionOptions so;
    if (c.n_grid) so.n_grid = c.n_grid;
    so.tol = c.tol_subaction;
    auto grid = std::make_shared<GridFunction>(calibrated_subaction(p.system, p.A, cv, so).V);
    V = [grid](double x) { return (*grid)(x); };
    gamma_tol = 1e-6;
  }
  const Potential As = dual_potential(p.system, p.A, W);
  double asym = 0.0;
  for (int i = 0; i < 64; ++i) asym = std::max(asym, std::abs(As((i + 0.5) / 64) - p.A((i + 0.5) / 64)));
  std::function<double(double)> Vs = V;
  if (asym > 1e-9) {
    SubactionOptions so;
    if (c.n_grid) so.n_grid = c.n_grid;
    auto grid = std::make_shared<GridFunction>(calibrated_subaction(p.system, As, so).V);
    Vs = [grid](double y) { return (*grid)(y); };
    gamma_tol = 1e-6;
  }
  const GammaResult g = gamma_from_support(W, V, Vs, ext.atoms, gamma_tol);

  auto memo = std::make_shared<std::map<double, double>>();
  const System sys = p.system;
  const Potential A = p.A;
  const double m = cv.m;
  auto I = [memo, sys, A, V, m](double x) {
    const auto it = memo->find(x);
    if (it != memo->end()) return it->second;
    const double v = deviation_I(sys, A, V, m, x);
    memo->emplace(x, v);
    return v;
  };
  const CostSpec cost = CostSpec::minus_w_plus_i(W, g.gamma, I);
  const TransportPlan plan = solve_kantorovich(ext.x_marginal(), ext.y_marginal(), cost);

  std::vector<double> support;
  for (const auto& a : ext.atoms) support.push_back(a.x);
  std::vector<double> probes;
  for (int i = 0; i < 64; ++i) probes.push_back(i / 63.0);
  const int depth = p.system.branch_count() > 2 ? 2 : 6;
  for (double x : backward_images(p.system, support, depth)) probes.push_back(x);
  if (p.system.kind == SystemKind::GaussMap) probes.erase(probes.begin());  // log 0
  if (p.system.kind == SystemKind::MinusDoublingMap) {
    // circle coordinate: 1 and 0 are one point, keep 0
    probes.erase(std::remove_if(probes.begin(), probes.end(), [](double x) { return x > 1.0 - 1e-13; }),
                 probes.end());
  }

  const DualityReport dual = duality_certificate(V, Vs, cost, plan, probes, probes, 1e-8);
  std::vector<ExtensionPoint> S;
  for (const auto& [pt, w] : plan.atoms(1e-12)) S.push_back(pt);
  const MonotonicityReport mono = cyclical_monotonicity_check(S, cost, std::min<int>(5, static_cast<int>(S.size())));
  const GraphReport graph = graph_check(plan);

  Json j = to_json(plan);
  j["potential"] = p.label;
  j["system"] = p.system.name();
  j["m"] = cv.m;
  j["m_is_lower_bound"] = true;
  j["gamma"] = g.gamma;
  j["cost"] = "I - W + gamma";
  j["probes"] = probes.size();
  j["certificates"] = {{"admissibility", {{"passed", dual.admissible},
                                          {"worst_violation", real_json(dual.worst_violation)},
                                          {"at", {dual.violation_at.x, dual.violation_at.y}}}},
                       {"slackness", {{"passed", dual.slackness},
                                      {"worst_slack", dual.worst_slack},
                                      {"constant", dual.constant},
                                      {"gap", dual.gap}}},
                       {"cyclical", to_json(mono)},
                       {"graph", to_json(graph)}};
  emit(c, "transport.json", j);
  return dual.passed && mono.passed ? 0 : 1;
}

int cmd_verify(const RunConfig& c) {
  AcceptanceOptions opt;
  opt.seed = c.seed;
  const auto results = run_acceptance(opt);
  Json j;
  Json arr = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    std::cout << summary_line(r) << "\n";
    ok = ok && r.passed;
    arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"data", r.data}});
  }
  j["passed"] = ok;
  j["criteria"] = arr;
  write_file(out_path(c, "verify.json"), j.dump(2) + "\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergo: ergodic optimization, involution kernels and transport between maximizing measures"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;
  std::map<std::string, CLI::Option*> opts;
  app.add_option("--config", config_path, "JSON run configuration; flags override its values");
  opts["preset"] = app.add_option("--preset", cfg.preset, "quad-dirac | quad-period2 | quad-convex | gauss-golden | linear");
  opts["system"] = app.add_option("--system", cfg.system, "doubling | minus-doubling | gauss");
  opts["potential"] = app.add_option("--potential", cfg.potential, "zero | poly:c0,c1,... | log:s | const:k | preset name");
  opts["out"] = app.add_option("--out", cfg.out, "output directory");
  opts["seed"] = app.add_option("--seed", cfg.seed, "seed for random probes");
  opts["kernel"] = app.add_option("--kernel", cfg.kernel, "auto | closed | cocycle");
  opts["method"] = app.add_option("--method", cfg.method, "PairwiseGrid | DeltaMonotone | MixedPartial");
  opts["n_grid"] = app.add_option("--n-grid", cfg.n_grid, "grid size for subactions, thermo and twist checks");
  opts["depth"] = app.add_option("--depth", cfg.depth, "cocycle series depth");
  opts["max_period"] = app.add_option("--max-period", cfg.max_period, "periodic orbit enumeration bound");
  opts["kernel_grid"] = app.add_option("--kernel-grid", cfg.kernel_grid, "kernel CSV / dual grid size");
  opts["beta"] = app.add_option("--beta", cfg.beta, "inverse temperatures for the thermodynamic run");
  opts["tol_subaction"] = app.add_option("--tol-subaction", cfg.tol_subaction, "Lax-Oleinik stopping tolerance");
  opts["tol_eigen"] = app.add_option("--tol-eigen", cfg.tol_eigen, "power iteration tolerance");
  opts["tol_twist"] = app.add_option("--tol-twist", cfg.tol_twist, "twist margin tolerance");

  std::map<std::string, int (*)(const RunConfig&)> commands{
      {"subaction", cmd_subaction}, {"kernel", cmd_kernel},       {"dual", cmd_dual},
      {"twist", cmd_twist},         {"transport", cmd_transport}, {"verify", cmd_verify}};
  const std::map<std::string, std::string> help{
      {"subaction", "calibrated subaction (and V_beta for --beta) as CSV plus a JSON header"},
      {"kernel", "involution kernel on a grid as x,y,W CSV"},
      {"dual", "dual potential A* and its cohomology residual"},
      {"twist", "twist-condition report"},
      {"transport", "optimal plan between maximizing measures with its certificates"},
      {"verify", "run every acceptance criterion"}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::map<std::string, bool> given;
    for (const auto& [k, o] : opts) given[k] = o->count() > 0;
    if (!config_path.empty()) merge_config_file(config_path, cfg, given);
    validate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "ergo " << command << ": " << e.what() << "\n";
    return 2;
  }

  try {
    return commands.at(command)(cfg);
  } catch (const UsageError& e) {
    std::cerr << "ergo " << command << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ergo " << command << ": error: " << e.what() << "\n";
    return 1;
  }
}
