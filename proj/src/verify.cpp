#include "ergo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <random>

#include "ergo/ergopt.hpp"
#include "ergo/involution.hpp"
#include "ergo/kernels.hpp"
#include "ergo/presets.hpp"
#include "ergo/thermo.hpp"
#include "ergo/transport.hpp"

namespace ergo {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const System kMD = System::minus_doubling();

Kernel skew_kernel_neg() {
  return Kernel::from_function(
      [](double x, double y) { return -x * x / 3 - y * y / 3 + 4 * x * y / 3 - 2 * x / 3 - y / 3; }, "skew-neg");
}

Kernel skew_kernel_pos() {
  return Kernel::from_function(
      [](double x, double y) { return x * x / 3 + y * y / 3 - 4 * x * y / 3 + 2 * x / 3 + y / 3; }, "skew-pos");
}

// max - min of (a - b); half of it is the sup error after the best constant shift
double spread(const Eigen::ArrayXd& d) { return d.maxCoeff() - d.minCoeff(); }

double normalized_sup_error(const GridFunction& V, const std::function<double(double)>& ref) {
  Eigen::ArrayXd d(V.size());
  for (Eigen::Index i = 0; i < V.size(); ++i) d(i) = V[i] - ref(V.point(i));
  return 0.5 * spread(d);
}

std::vector<double> regular_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  return g;
}

// A preset with its maximizing support, gamma and a memoized deviation function.
struct QuadCase {
  Preset p;
  double m = 0.0;
  ExtensionMeasure ext;
  double gamma = 0.0;
  std::shared_ptr<std::map<double, double>> memo = std::make_shared<std::map<double, double>>();

  std::function<double(double)> I() const {
    auto cache = memo;
    const Potential A = p.A;
    const auto V = p.V_closed;
    const double mm = m;
    return [cache, A, V, mm](double x) {
      const auto it = cache->find(x);
      if (it != cache->end()) return it->second;
      const double v = deviation_I(kMD, A, V, mm, x);
      cache->emplace(x, v);
      return v;
    };
  }
  CostSpec cost() const { return CostSpec::minus_w_plus_i(p.W, gamma, I()); }
};

QuadCase quad_case(const std::string& name) {
  QuadCase q;
  q.p = preset(name);
  const CriticalValue cv = critical_value(q.p.system, q.p.A, 4);
  q.m = cv.m;
  // ties share the mass equally (t = 1/2 for the period-2 example)
  std::vector<double> w(cv.ties.size(), 1.0 / static_cast<double>(cv.ties.size()));
  q.ext = natural_extension_measure(q.p.system, cv.ties, w);
  q.gamma = gamma_from_support(q.p.W, q.p.V_closed, q.p.V_closed, q.ext.atoms).gamma;
  return q;
}

std::vector<double> support_x(const ExtensionMeasure& e) {
  std::vector<double> s;
  for (const auto& a : e.atoms) s.push_back(a.x);
  return s;
}

std::vector<ExtensionPoint> plan_support(const TransportPlan& plan) {
  std::vector<ExtensionPoint> s;
  for (const auto& [p, w] : plan.atoms(1e-12)) s.push_back(p);
  return s;
}

// Optimal plans between the marginals of every extension measure on the
// periodic orbits of -2x mod 1 up to period 6, under the twist cost of
// A = (x - 1/2)^2.
std::vector<TransportPlan> twist_plans() {
  const Preset p = preset("quad-convex");
  std::vector<TransportPlan> out;
  for (const auto& o : periodic_orbits(kMD, 6)) {
    if (o.period() < 2) continue;
    const ExtensionMeasure e = natural_extension_measure(kMD, o);
    out.push_back(solve_kantorovich(e.x_marginal(), e.y_marginal(), CostSpec::minus_w(p.W)));
  }
  return out;
}

// period-4 orbit {1/15, 13/15, 4/15, 7/15}
ExtensionMeasure period4_measure() {
  for (const auto& o : periodic_orbits(kMD, 4))
    if (o.period() == 4 && std::abs(o.points[0] - 1.0 / 15.0) < 1e-12) return natural_extension_measure(kMD, o);
  throw std::logic_error("period-4 orbit through 1/15 missing");
}

CheckResult c1_critical_values() {
  CheckResult r{1, "critical-values", false, "", Json::object()};
  const double md = critical_value(kMD, preset("quad-dirac").A, 4).m;
  const double mp = critical_value(kMD, preset("quad-period2").A, 4).m;
  const Preset g = preset("gauss-golden");
  const double mg = critical_value(g.system, g.A, g.max_period).m;
  const double gref = 2.0 * std::log(kernels::golden());
  const double e1 = std::abs(md + 1.0 / 9.0), e2 = std::abs(mp + 1.0 / 36.0), e3 = std::abs(mg - gref);
  r.passed = e1 < 1e-9 && e2 < 1e-9 && e3 < 1e-9;
  r.detail = fmt("m(-(x-1)^2)=%.12f m(-(x-1/2)^2)=%.12f m(2 log x)=%.12f max err %.2e", md, mp, mg,
                 std::max({e1, e2, e3}));
  r.data = {{"quad-dirac", md}, {"quad-period2", mp}, {"gauss-golden", mg}, {"gauss_reference", gref}};
  return r;
}

CheckResult c2_subactions(const AcceptanceOptions& opt) {
  CheckResult r{2, "calibrated-subactions", true, "", Json::object()};
  SubactionOptions so;
  so.n_grid = opt.subaction_grid;
  std::string d;
  for (const char* name : {"quad-dirac", "quad-period2"}) {
    const Preset p = preset(name);
    const SubactionResult s = calibrated_subaction(p.system, p.A, so);
    const double err = normalized_sup_error(s.V, p.V_closed);
    r.passed = r.passed && err < 1e-6;
    d += fmt("%s sup err %.2e (%d it) ", name, err, s.iterations);
    r.data[name] = {{"sup_error", err}, {"iterations", s.iterations}, {"calibration_gap", s.calibration_gap}};
  }
  d.pop_back();
  r.detail = d;
  return r;
}

CheckResult c3_cohomology(const AcceptanceOptions& opt) {
  CheckResult r{3, "cohomology-residuals", true, "", Json::object()};
  struct Case {
    const char* label;
    System sys;
    Potential A;
    Kernel W;
  };
  const std::vector<Case> cases{
      {"x,W1", kMD, Potential::polynomial({0, 1}), Kernel::closed_quadratic(0, 1, 0)},
      {"x^2,W2", kMD, Potential::polynomial({0, 0, 1}), Kernel::closed_quadratic(0, 0, 1)},
      {"-(x-1)^2", kMD, preset("quad-dirac").A, preset("quad-dirac").W},
      {"-(x-1/2)^2", kMD, preset("quad-period2").A, preset("quad-period2").W},
      {"gauss", System::gauss(), Potential::log_gauss(), Kernel::gauss_log()},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const double res = cohomology_residual(c.sys, c.A, c.W, c.A, 1000, opt.seed);
    worst = std::max(worst, res);
    r.data[c.label] = res;
  }
  r.passed = worst < 1e-10;
  r.detail = fmt("5 kernels, 1000 pairs each, worst residual %.2e", worst);
  return r;
}

CheckResult c4_cocycle(const AcceptanceOptions& opt) {
  CheckResult r{4, "cocycle-vs-closed-form", false, "", Json::object()};
  const Potential A = Potential::polynomial({0, 0, 1});
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, bound = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng), xp = u(rng), y = u(rng);
    const CocycleValue d = cocycle_delta(kMD, A, x, xp, y, 48);
    bound = d.tail_bound;
    worst = std::max(worst, std::abs(d.value - (kernels::w2(x, y) - kernels::w2(xp, y))));
  }
  r.passed = worst < bound;
  r.detail = fmt("1000 triples, depth 48: worst %.2e < tail bound %.2e", worst, bound);
  r.data = {{"worst", worst}, {"tail_bound", bound}};
  return r;
}

CheckResult c5_twist() {
  CheckResult r{5, "twist-verdicts", false, "", Json::object()};
  const TwistReport w2 = twist_check(Kernel::closed_quadratic(0, 0, 1), TwistMethod::MixedPartial);
  const TwistReport w1 = twist_check(Kernel::closed_quadratic(0, 1, 0), TwistMethod::MixedPartial);
  const TwistReport e5 = twist_check(skew_kernel_neg(), TwistMethod::MixedPartial);
  const TwistReport e6 = twist_check(skew_kernel_pos(), TwistMethod::MixedPartial);
  const TwistReport e6c = twist_check(preset("quad-convex").W, TwistMethod::PairwiseGrid);
  const bool ok2 = w2.is_twist && std::abs(w2.mixed_partial_max + 4.0 / 3.0) < 1e-6 &&
                   std::abs(w2.mixed_partial_min + 4.0 / 3.0) < 1e-6;
  const bool ok5 = !e5.is_twist && std::abs(e5.mixed_partial_max - 4.0 / 3.0) < 1e-6 &&
                   std::abs(e5.mixed_partial_min - 4.0 / 3.0) < 1e-6;
  r.passed = ok2 && !w1.is_twist && ok5 && e6.is_twist && e6c.is_twist;
  r.detail = fmt("W2 %+.9f twist=%d, W1 %+.1e twist=%d, Kneg %+.9f twist=%d, Kpos twist=%d", w2.mixed_partial_max,
                 w2.is_twist, w1.mixed_partial_max, w1.is_twist, e5.mixed_partial_max, e5.is_twist, e6.is_twist);
  r.data = {{"W2", to_json(w2)}, {"W1", to_json(w1)}, {"Kneg", to_json(e5)}, {"Kpos", to_json(e6)}};
  return r;
}

CheckResult c6_transport() {
  CheckResult r{6, "transport-period2", false, "", Json::object()};
  const AtomicMeasure half = AtomicMeasure::uniform({1.0 / 3.0, 2.0 / 3.0});
  const Kernel W = skew_kernel_neg();
  const CostSpec c = CostSpec::minus_w(W);
  const TransportPlan plan = solve_kantorovich(half, half, c);
  const lp::Solution ve = lp::vertex_enumeration(c.matrix(half.points, half.points), half.weights, half.weights);
  const double id = W(1.0 / 3.0, 1.0 / 3.0) + W(2.0 / 3.0, 2.0 / 3.0);
  const double sw = W(1.0 / 3.0, 2.0 / 3.0) + W(2.0 / 3.0, 1.0 / 3.0);
  const bool identity = std::abs(plan.coupling(0, 0) - 0.5) < 1e-12 && std::abs(plan.coupling(1, 1) - 0.5) < 1e-12;
  r.passed = identity && std::abs(id + 17.0 / 27.0) < 1e-12 && std::abs(sw + 21.0 / 27.0) < 1e-12 &&
             plan.value == ve.value && (plan.coupling - ve.flow).cwiseAbs().maxCoeff() == 0.0;
  r.detail = fmt("identity plan=%d, sum W identity %.12f (-17/27), swap %.12f (-21/27), value %.17g = enumeration %.17g",
                 identity, id, sw, plan.value, ve.value);
  r.data = {{"plan", to_json(plan)}, {"sum_W_identity", id}, {"sum_W_swap", sw}, {"enumeration_value", ve.value}};
  return r;
}

CheckResult c7_duality(const std::vector<QuadCase>& cases) {
  CheckResult r{7, "duality", true, "", Json::object()};
  std::string d;
  const std::vector<double> grid = regular_grid(64);
  for (const auto& q : cases) {
    const std::vector<double> sx = support_x(q.ext);
    const TransportPlan plan = solve_kantorovich(q.ext.x_marginal(), q.ext.y_marginal(), q.cost());
    std::vector<double> xs = grid, ys = grid;
    const std::vector<double> pre = backward_images(kMD, sx, 6);
    xs.insert(xs.end(), pre.begin(), pre.end());
    ys.insert(ys.end(), pre.begin(), pre.end());
    const DualityReport rep = duality_certificate(q.p.V_closed, q.p.V_closed, q.cost(), plan, xs, ys, 1e-8);
    r.passed = r.passed && rep.passed;
    d += fmt("%s: violation %.1e, slack %.1e, gap %.1e; ", q.p.name.c_str(), std::max(0.0, rep.worst_violation),
             rep.worst_slack, rep.gap);
    r.data[q.p.name] = to_json(rep);
    r.data[q.p.name]["probe_pairs"] = xs.size() * ys.size();
  }
  d.resize(d.size() - 2);
  r.detail = d;
  return r;
}

CheckResult c8_b_function(const std::vector<QuadCase>& cases) {
  CheckResult r{8, "b-function", true, "", Json::object()};
  std::string d;
  const std::vector<double> grid = regular_grid(64);
  for (const auto& q : cases) {
    const auto I = q.I();
    std::vector<double> xs = grid, ys = grid;
    const std::vector<double> pre = backward_images(kMD, support_x(q.ext), 6);
    xs.insert(xs.end(), pre.begin(), pre.end());
    ys.insert(ys.end(), pre.begin(), pre.end());
    double lo = std::numeric_limits<double>::infinity();
    for (double x : xs)
      for (double y : ys) lo = std::min(lo, b_function(x, y, q.p.W, q.p.V_closed, q.p.V_closed, q.gamma, I));
    double on = 0.0;
    for (const auto& a : q.ext.atoms)
      on = std::max(on, std::abs(b_function(a.x, a.y, q.p.W, q.p.V_closed, q.p.V_closed, q.gamma, I)));
    r.passed = r.passed && lo >= -1e-8 && on < 1e-8;
    d += fmt("%s: min b %.1e, max |b| on atoms %.1e; ", q.p.name.c_str(), lo, on);
    r.data[q.p.name] = {{"min_b", lo}, {"max_abs_b_on_support", on}};
  }
  d.resize(d.size() - 2);
  r.detail = d;
  return r;
}

CheckResult c9_monotonicity(const std::vector<QuadCase>& cases, const std::vector<TransportPlan>& twist) {
  CheckResult r{9, "cyclical-monotonicity", true, "", Json::object()};
  long long checked = 0;
  int supports = 0;
  auto run = [&](const std::vector<ExtensionPoint>& S, const CostSpec& c) {
    const MonotonicityReport m = cyclical_monotonicity_check(S, c, 5);
    r.passed = r.passed && m.passed;
    checked += m.checked;
    ++supports;
  };
  const AtomicMeasure half = AtomicMeasure::uniform({1.0 / 3.0, 2.0 / 3.0});
  const CostSpec c5 = CostSpec::minus_w(skew_kernel_neg());
  run(plan_support(solve_kantorovich(half, half, c5)), c5);
  for (const auto& q : cases)
    run(plan_support(solve_kantorovich(q.ext.x_marginal(), q.ext.y_marginal(), q.cost())), q.cost());
  const CostSpec ct = CostSpec::minus_w(preset("quad-convex").W);
  for (const auto& plan : twist) run(plan_support(plan), ct);

  const std::vector<ExtensionPoint> swapped{{1.0 / 3.0, 2.0 / 3.0}, {2.0 / 3.0, 1.0 / 3.0}};
  const MonotonicityReport bad = cyclical_monotonicity_check(swapped, c5, 5);
  const MonotonicityReport bad2 = cyclical_monotonicity_check(swapped, CostSpec::minus_w(preset("quad-period2").W), 5);
  const bool swapped_ok = !bad.passed && std::abs(bad.worst_slack + 4.0 / 27.0) < 1e-10 && !bad2.passed &&
                          std::abs(bad2.worst_slack + 4.0 / 27.0) < 1e-10;
  r.passed = r.passed && swapped_ok;
  r.detail = fmt("%d optimal supports pass (%lld permutations); swapped support slack %.12f (-4/27 = %.12f)", supports,
                 checked, bad.worst_slack, -4.0 / 27.0);
  r.data = {{"supports", supports}, {"permutations", checked}, {"swapped", to_json(bad)}};
  return r;
}

CheckResult c10_rochet() {
  CheckResult r{10, "rochet-potential", false, "", Json::object()};
  const Preset p = preset("quad-convex");
  const CostSpec c = CostSpec::minus_w(p.W);
  const ExtensionMeasure e = period4_measure();
  std::vector<ExtensionPoint> S = plan_support(solve_kantorovich(e.x_marginal(), e.y_marginal(), c));
  std::sort(S.begin(), S.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double z = k / 49.0;
    const double ordered = rochet_potential(S, c, 0, z, RochetMode::TwistOrdered);
    const double brute = rochet_potential(S, c, 0, z, RochetMode::BruteForce, 5);
    worst = std::max(worst, std::abs(ordered - brute));
  }
  r.passed = S.size() == 4 && worst < 1e-9;
  r.detail = fmt("period-4 support (%zu atoms), 50 z values, max |ordered - brute force| %.2e", S.size(), worst);
  r.data = {{"atoms", S.size()}, {"max_difference", worst}};
  return r;
}

CheckResult c11_graph(const std::vector<TransportPlan>& twist) {
  CheckResult r{11, "graph-property", false, "", Json::object()};
  const bool twist_kernel = twist_check(preset("quad-convex").W, TwistMethod::PairwiseGrid).is_twist;
  int graphs = 0, monotone = 0;
  for (const auto& plan : twist) {
    const GraphReport g = graph_check(plan);
    graphs += g.is_graph;
    monotone += g.nonincreasing;
  }
  TransportPlan split;
  split.xs = {1.0 / 3.0};
  split.ys = {1.0 / 3.0, 2.0 / 3.0};
  split.coupling = Eigen::RowVector2d(0.5, 0.5);
  const GraphReport bad = graph_check(split);
  const bool witness = !bad.is_graph && bad.witnesses.size() == 1 && std::abs(bad.witnesses[0] - 1.0 / 3.0) < 1e-12;
  const int n = static_cast<int>(twist.size());
  r.passed = twist_kernel && n > 0 && graphs == n && monotone == n && witness;
  r.detail = fmt("%d/%d twist plans are graphs, %d/%d nonincreasing; split plan witness x=%s", graphs, n, monotone, n,
                 bad.witnesses.empty() ? "none" : format_real(bad.witnesses[0]).c_str());
  r.data = {{"plans", n}, {"graphs", graphs}, {"nonincreasing", monotone}, {"counterexample", to_json(bad)}};
  return r;
}

CheckResult c12_finite_beta(const AcceptanceOptions& opt) {
  CheckResult r{12, "finite-beta-consistency", false, "", Json::object()};
  const Preset p = preset("quad-dirac");
  const double m = -1.0 / 9.0;
  ThermoOptions to;
  to.n_grid = opt.thermo_grid;
  const EigenPair e8 = eigenpair(p.system, p.A, 8.0, to), e64 = eigenpair(p.system, p.A, 64.0, to);
  const double v8 = normalized_sup_error(v_beta(p.system, p.A, 8.0, to), p.V_closed);
  const double v64 = normalized_sup_error(v_beta(p.system, p.A, 64.0, to), p.V_closed);
  const double p8 = std::abs(e8.log_eigenvalue / 8.0 - m), p64 = std::abs(e64.log_eigenvalue / 64.0 - m);
  r.passed = v64 < 0.25 * v8 && p64 < p8;
  r.detail = fmt("sup|V_b - V|: %.3e (b=8) -> %.3e (b=64); |P/b - m|: %.3e -> %.3e", v8, v64, p8, p64);
  r.data = {{"v_error_8", v8}, {"v_error_64", v64}, {"pressure_error_8", p8}, {"pressure_error_64", p64}};
  return r;
}

template <typename F>
CheckResult guarded(int id, const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("error: ") + e.what(), Json::object()};
  }
}

}  // namespace

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(guarded(1, "critical-values", [] { return c1_critical_values(); }));
  out.push_back(guarded(2, "calibrated-subactions", [&] { return c2_subactions(opt); }));
  out.push_back(guarded(3, "cohomology-residuals", [&] { return c3_cohomology(opt); }));
  out.push_back(guarded(4, "cocycle-vs-closed-form", [&] { return c4_cocycle(opt); }));
  out.push_back(guarded(5, "twist-verdicts", [] { return c5_twist(); }));
  out.push_back(guarded(6, "transport-period2", [] { return c6_transport(); }));

  std::vector<QuadCase> cases;
  std::vector<TransportPlan> twist;
  std::string setup_error;
  try {
    cases = {quad_case("quad-dirac"), quad_case("quad-period2")};
    twist = twist_plans();
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  auto needs_setup = [&](int id, const char* name, auto&& f) {
    if (!setup_error.empty()) return CheckResult{id, name, false, "setup error: " + setup_error, Json::object()};
    return guarded(id, name, f);
  };
  out.push_back(needs_setup(7, "duality", [&] { return c7_duality(cases); }));
  out.push_back(needs_setup(8, "b-function", [&] { return c8_b_function(cases); }));
  out.push_back(needs_setup(9, "cyclical-monotonicity", [&] { return c9_monotonicity(cases, twist); }));
  out.push_back(guarded(10, "rochet-potential", [] { return c10_rochet(); }));
  out.push_back(needs_setup(11, "graph-property", [&] { return c11_graph(twist); }));
  out.push_back(guarded(12, "finite-beta-consistency", [&] { return c12_finite_beta(opt); }));
  return out;
}

std::string summary_line(const CheckResult& r) {
  return fmt("[%s] %2d %-24s %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
}

}  // namespace ergo
