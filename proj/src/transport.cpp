#include "ergo/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ergo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AtomicMeasure::AtomicMeasure(std::vector<double> pts, Eigen::VectorXd w) : points(std::move(pts)), weights(std::move(w)) {
  if (points.empty() || static_cast<Eigen::Index>(points.size()) != weights.size())
    throw std::invalid_argument("AtomicMeasure: points and weights must be non-empty and of equal length");
  if ((weights.array() < 0).any()) throw std::invalid_argument("AtomicMeasure: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-12) throw std::invalid_argument("AtomicMeasure: weights must sum to 1");
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("AtomicMeasure: repeated atom");
}

AtomicMeasure AtomicMeasure::uniform(std::vector<double> pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  return {std::move(pts), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))};
}

namespace {

// merges atoms that share a coordinate, keeping first-seen order
AtomicMeasure marginal(const std::vector<double>& coord, const Eigen::VectorXd& weights) {
  std::vector<double> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < coord.size(); ++i) {
    const auto it = std::find(pts.begin(), pts.end(), coord[i]);
    if (it == pts.end()) {
      pts.push_back(coord[i]);
      w.push_back(weights(static_cast<Eigen::Index>(i)));
    } else {
      w[static_cast<std::size_t>(it - pts.begin())] += weights(static_cast<Eigen::Index>(i));
    }
  }
  return {pts, Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()))};
}

}  // namespace

AtomicMeasure ExtensionMeasure::x_marginal() const {
  std::vector<double> p;
  for (const auto& a : atoms) p.push_back(a.x);
  return marginal(p, weights);
}

AtomicMeasure ExtensionMeasure::y_marginal() const {
  std::vector<double> p;
  for (const auto& a : atoms) p.push_back(a.y);
  return marginal(p, weights);
}

ExtensionMeasure natural_extension_measure(const System& sys, const PeriodicOrbit& orbit) {
  const int p = orbit.period();
  if (p < 1) throw std::invalid_argument("natural_extension_measure: empty orbit");
  ExtensionMeasure out;
  out.weights = Eigen::VectorXd::Constant(p, 1.0 / p);
  for (int i = 0; i < p; ++i) {
    const double x = orbit.points[static_cast<std::size_t>(i)];
    if (sys.kind == SystemKind::MinusDoublingMap && p == 1 && x == 0.0) {
      // 0 is fixed only on the circle (tau_1(0) = 1 ~ 0); its past is 0 as well.
      out.atoms.push_back({0.0, 0.0});
      continue;
    }
    std::vector<int> past(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) past[static_cast<std::size_t>(k)] = orbit.itinerary[static_cast<std::size_t>(((i - 1 - k) % p + p) % p)];
    out.atoms.push_back({x, periodic_point(sys, past)});
  }
  return out;
}

ExtensionMeasure natural_extension_measure(const System& sys, const std::vector<PeriodicOrbit>& orbits,
                                           const std::vector<double>& weights) {
  if (orbits.size() != weights.size() || orbits.empty())
    throw std::invalid_argument("natural_extension_measure: one weight per orbit required");
  ExtensionMeasure out;
  std::vector<double> w;
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const ExtensionMeasure e = natural_extension_measure(sys, orbits[k]);
    for (Eigen::Index a = 0; a < e.weights.size(); ++a) {
      out.atoms.push_back(e.atoms[static_cast<std::size_t>(a)]);
      w.push_back(weights[k] * e.weights(a));
    }
  }
  out.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  if (std::abs(out.weights.sum() - 1.0) > 1e-12) throw std::invalid_argument("natural_extension_measure: weights must sum to 1");
  return out;
}

CostSpec CostSpec::minus_w_plus_i(Kernel W, double gamma, std::function<double(double)> I) {
  if (!I) throw std::invalid_argument("CostSpec: MinusWPlusI requires a deviation function");
  return {CostVariant::MinusWPlusI, std::move(W), gamma, std::move(I)};
}

double CostSpec::operator()(double x, double y) const {
  double base = -W(x, y) + gamma;
  if (variant == CostVariant::MinusWPlusI) {
    const double i = I(x);
    if (std::isinf(i)) return kInf;
    base += i;
  }
  return base;
}

Eigen::MatrixXd CostSpec::matrix(const std::vector<double>& xs, const std::vector<double>& ys) const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double ix = variant == CostVariant::MinusWPlusI ? I(xs[i]) : 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::isinf(ix) ? kInf : ix - W(xs[i], ys[j]) + gamma;
  }
  return m;
}

GammaResult gamma_from_support(const Kernel& W, const std::function<double(double)>& V,
                               const std::function<double(double)>& V_star, const std::vector<ExtensionPoint>& atoms,
                               double tol) {
  if (atoms.empty()) throw std::invalid_argument("gamma_from_support: no atoms");
  Eigen::ArrayXd g(static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t k = 0; k < atoms.size(); ++k)
    g(static_cast<Eigen::Index>(k)) = W(atoms[k].x, atoms[k].y) - V(atoms[k].x) - V_star(atoms[k].y);
  GammaResult r;
  r.gamma = g.mean();
  r.max_deviation = (g - r.gamma).abs().maxCoeff();
  if (!(r.max_deviation < tol)) {
    std::ostringstream os;
    os << "support identity violated: atoms disagree on gamma by " << r.max_deviation;
    throw SupportIdentityViolated(os.str());
  }
  return r;
}

std::vector<std::pair<ExtensionPoint, double>> TransportPlan::atoms(double tol) const {
  std::vector<std::pair<ExtensionPoint, double>> out;
  for (Eigen::Index i = 0; i < coupling.rows(); ++i)
    for (Eigen::Index j = 0; j < coupling.cols(); ++j)
      if (coupling(i, j) > tol)
        out.push_back({{xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]}, coupling(i, j)});
  return out;
}

TransportPlan solve_kantorovich(const AtomicMeasure& mu, const AtomicMeasure& mu_star, const CostSpec& c) {
  if (mu.size() > 256 || mu_star.size() > 256) throw std::invalid_argument("solve_kantorovich: support larger than 256");
  if (std::abs(mu.weights.sum() - mu_star.weights.sum()) > 1e-10)
    throw std::invalid_argument("solve_kantorovich: infeasible marginals (total masses differ)");
  const Eigen::MatrixXd C = c.matrix(mu.points, mu_star.points);
  const Eigen::Index n = C.rows(), m = C.cols();

  const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> finite = C.array().isFinite();
  for (Eigen::Index i = 0; i < n; ++i)
    if (mu.weights(i) > 0 && !finite.row(i).any()) {
      std::ostringstream os;
      os << "solve_kantorovich: infinite cost on every cell of row x = " << mu.points[static_cast<std::size_t>(i)];
      throw std::invalid_argument(os.str());
    }
  for (Eigen::Index j = 0; j < m; ++j)
    if (mu_star.weights(j) > 0 && !finite.col(j).any())
      throw std::invalid_argument("solve_kantorovich: infinite cost on every cell of a column");

  double big = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (finite(i, j)) big = std::max(big, std::abs(C(i, j)));
  big *= 1e6;
  const Eigen::MatrixXd Cb = finite.select(C, Eigen::MatrixXd::Constant(n, m, big));

  const bool small = n * m <= 64 && lp::spanning_tree_count(n, m) <= 2e6;
  lp::Solution s = small ? lp::vertex_enumeration(Cb, mu.weights, mu_star.weights)
                         : lp::transportation_simplex(Cb, mu.weights, mu_star.weights);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (!finite(i, j) && s.flow(i, j) > 1e-12)
        throw std::invalid_argument("solve_kantorovich: no finite-cost coupling exists");

  TransportPlan plan;
  plan.xs = mu.points;
  plan.ys = mu_star.points;
  plan.coupling = s.flow;
  plan.value = lp::plan_value(C, s.flow);
  plan.u = s.u;
  plan.v = s.v;
  plan.method = s.method;
  return plan;
}

Eigen::VectorXd conjugate_transform(const Eigen::VectorXd& f, const Eigen::MatrixXd& G, TransformDirection dir) {
  if (f.size() != G.rows()) throw std::invalid_argument("conjugate_transform: f and G disagree in size");
  const Eigen::MatrixXd shifted = G.colwise() - f;
  if (dir == TransformDirection::MaxKernel) return shifted.colwise().maxCoeff().transpose();
  return shifted.colwise().minCoeff().transpose();
}

DualityReport duality_certificate(const std::function<double(double)>& V, const std::function<double(double)>& V_star,
                                  const CostSpec& c, const TransportPlan& plan, const std::vector<double>& probe_xs,
                                  const std::vector<double>& probe_ys, double tol) {
  DualityReport rep;
  const auto atoms = plan.atoms();
  if (atoms.empty()) throw std::invalid_argument("duality_certificate: empty plan");

  double wsum = 0.0, ksum = 0.0;
  for (const auto& [p, w] : atoms) {
    const double cv = c(p.x, p.y);
    if (std::isinf(cv)) throw std::invalid_argument("duality_certificate: plan atom with infinite cost");
    ksum += w * (cv + V(p.x) + V_star(p.y));
    wsum += w;
  }
  rep.constant = ksum / wsum;
  for (const auto& [p, w] : atoms) {
    const double dev = std::abs(c(p.x, p.y) + V(p.x) + V_star(p.y) - rep.constant);
    if (dev >= rep.worst_slack) {
      rep.worst_slack = dev;
      rep.slack_at = p;
    }
  }

  std::vector<double> xs = probe_xs, ys = probe_ys;
  xs.insert(xs.end(), plan.xs.begin(), plan.xs.end());
  ys.insert(ys.end(), plan.ys.begin(), plan.ys.end());
  Eigen::ArrayXd vy(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t j = 0; j < ys.size(); ++j) vy(static_cast<Eigen::Index>(j)) = V_star(ys[j]);
  rep.worst_violation = -kInf;
  for (double x : xs) {
    const double vx = V(x);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double cv = c(x, ys[j]);
      if (std::isinf(cv)) continue;
      const double viol = -vx - vy(static_cast<Eigen::Index>(j)) + rep.constant - cv;
      if (viol > rep.worst_violation) {
        rep.worst_violation = viol;
        rep.violation_at = {x, ys[j]};
      }
    }
  }

  const Eigen::VectorXd mu = plan.coupling.rowwise().sum(), nu = plan.coupling.colwise().sum().transpose();
  rep.dual_value = rep.constant;
  for (Eigen::Index i = 0; i < mu.size(); ++i) rep.dual_value -= mu(i) * V(plan.xs[static_cast<std::size_t>(i)]);
  for (Eigen::Index j = 0; j < nu.size(); ++j) rep.dual_value -= nu(j) * V_star(plan.ys[static_cast<std::size_t>(j)]);
  rep.primal_value = 0.0;
  for (const auto& [p, w] : atoms) rep.primal_value += w * c(p.x, p.y);
  rep.gap = std::abs(rep.dual_value - rep.primal_value);

  rep.admissible = rep.worst_violation <= tol;
  rep.slackness = rep.worst_slack <= tol;
  rep.passed = rep.admissible && rep.slackness && rep.gap <= tol;
  return rep;
}

MonotonicityReport cyclical_monotonicity_check(const std::vector<ExtensionPoint>& S, const CostSpec& c, int n_max,
                                               double tol) {
  if (n_max > 7) throw std::invalid_argument("cyclical_monotonicity_check: n_max must be <= 7");
  const std::size_t s = S.size();
  Eigen::MatrixXd C(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));  // C(a, b) = c(x_a, y_b)
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b)
      C(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c(S[a].x, S[b].y);

  MonotonicityReport rep;
  rep.worst_slack = kInf;
  std::vector<std::size_t> subset;
  auto check_subset = [&] {
    const std::size_t k = subset.size();
    double base = 0.0;
    for (auto a : subset) base += C(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a));
    if (std::isinf(base)) return;
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
      ++rep.checked;
      double moved = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        moved += C(static_cast<Eigen::Index>(subset[perm[j]]), static_cast<Eigen::Index>(subset[j]));
      const double slack = moved - base;
      if (slack < rep.worst_slack) {
        rep.worst_slack = slack;
        rep.subset = subset;
        rep.permutation = perm;
      }
    }
  };
  auto choose = [&](auto&& self, std::size_t start) -> void {
    if (subset.size() >= 2) check_subset();
    if (static_cast<int>(subset.size()) == n_max) return;
    for (std::size_t a = start; a < s; ++a) {
      subset.push_back(a);
      self(self, a + 1);
      subset.pop_back();
    }
  };
  choose(choose, 0);
  if (rep.checked == 0) rep.worst_slack = 0.0;
  rep.passed = rep.worst_slack >= -tol;
  return rep;
}

OrderReport twist_order_check(const std::vector<ExtensionPoint>& S) {
  OrderReport rep;
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      const auto& p = S[i];
      const auto& q = S[j];
      if (p.x == q.x || p.y == q.y) continue;
      const bool anti = (p.x < q.x) == (p.y > q.y);
      if (!anti) rep.violations.push_back({p, q});
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

GraphReport graph_check(const std::vector<ExtensionPoint>& atoms, double cluster_tol) {
  GraphReport rep;
  std::vector<ExtensionPoint> sorted = atoms;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  struct Cluster {
    double x, y_min, y_max;
  };
  std::vector<Cluster> clusters;
  for (const auto& p : sorted) {
    if (!clusters.empty() && p.x - clusters.back().x <= cluster_tol) {
      auto& cl = clusters.back();
      cl.y_min = std::min(cl.y_min, p.y);
      cl.y_max = std::max(cl.y_max, p.y);
    } else {
      clusters.push_back({p.x, p.y, p.y});
    }
  }
  for (const auto& cl : clusters) {
    if (cl.y_max - cl.y_min > cluster_tol) {
      rep.is_graph = false;
      rep.witnesses.push_back(cl.x);
    }
  }
  for (std::size_t k = 0; k + 1 < clusters.size(); ++k)
    if (clusters[k].y_min < clusters[k + 1].y_max - cluster_tol) rep.nonincreasing = false;
  return rep;
}

GraphReport graph_check(const TransportPlan& plan, double cluster_tol, double weight_tol) {
  std::vector<ExtensionPoint> pts;
  for (const auto& [p, w] : plan.atoms(weight_tol)) pts.push_back(p);
  return graph_check(pts, cluster_tol);
}

double rochet_potential(const std::vector<ExtensionPoint>& S, const CostSpec& c, std::size_t base, double z,
                        RochetMode mode, int chain_cap) {
  if (S.empty()) throw std::invalid_argument("rochet_potential: empty support");
  if (base >= S.size()) throw std::invalid_argument("rochet_potential: base index out of range");

  if (mode == RochetMode::TwistOrdered) {
    std::vector<std::size_t> chain;
    for (std::size_t k = 0; k < S.size(); ++k)
      if (k != base && S[k].x > S[base].x && S[k].x < z) chain.push_back(k);
    std::sort(chain.begin(), chain.end(), [&](auto a, auto b) { return S[a].x < S[b].x; });
    double f = 0.0;
    std::size_t cur = base;
    for (auto k : chain) {
      f += c(S[k].x, S[cur].y) - c(S[cur].x, S[cur].y);
      cur = k;
    }
    return f + c(z, S[cur].y) - c(S[cur].x, S[cur].y);
  }

  const auto s = static_cast<Eigen::Index>(S.size());
  Eigen::MatrixXd C(s, s);  // C(k, cur) = c(x_k, y_cur)
  Eigen::VectorXd cz(s);
  for (Eigen::Index cur = 0; cur < s; ++cur) {
    for (Eigen::Index k = 0; k < s; ++k) C(k, cur) = c(S[static_cast<std::size_t>(k)].x, S[static_cast<std::size_t>(cur)].y);
    cz(cur) = c(z, S[static_cast<std::size_t>(cur)].y);
  }
  double best = kInf;
  auto walk = [&](auto&& self, Eigen::Index cur, double acc, int len) -> void {
    best = std::min(best, acc + cz(cur) - C(cur, cur));
    if (len == chain_cap) return;
    for (Eigen::Index k = 0; k < s; ++k) self(self, k, acc + C(k, cur) - C(cur, cur), len + 1);
  };
  walk(walk, static_cast<Eigen::Index>(base), 0.0, 0);
  return best;
}

double b_function(double x, double y, const Kernel& W, const std::function<double(double)>& V,
                  const std::function<double(double)>& V_star, double gamma, const std::function<double(double)>& I) {
  const double i = I(x);
  if (std::isinf(i)) return kInf;
  return i + gamma - W(x, y) + V(x) + V_star(y);
}

}  // namespace ergo
