#include "ergo/ergopt.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace ergo {

double birkhoff_average(const Potential& A, const PeriodicOrbit& orbit) {
  double s = 0.0;
  for (double x : orbit.points) s += A(x);
  return s / orbit.period();
}

CriticalValue critical_value(const System& sys, const Potential& A, int max_period, double tie_tol) {
  auto orbits = periodic_orbits(sys, max_period);
  CriticalValue cv;
  cv.m = -std::numeric_limits<double>::infinity();
  for (auto& o : orbits) {
    o.birkhoff_average = birkhoff_average(A, o);
    if (o.birkhoff_average > cv.m) {
      cv.m = o.birkhoff_average;
      cv.orbit = o;
    }
  }
  for (const auto& o : orbits)
    if (o.birkhoff_average >= cv.m - tie_tol) cv.ties.push_back(o);
  return cv;
}

GridFunction lax_oleinik_step(const System& sys, const Potential& A, double m, const GridFunction& V) {
  const auto branches = sys.branches();
  Eigen::ArrayXd out(V.size());
  for (Eigen::Index j = 0; j < V.size(); ++j) {
    const double x = V.point(j);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& br : branches) {
      const double z = br(x);
      const double v = V(z) + A(z) - m;
      if (v > best) best = v;  // strict: ties keep the smaller branch index
    }
    out(j) = best;
  }
  return V.with_values(out);
}

SubactionResult calibrated_subaction(const System& sys, const Potential& A, const SubactionOptions& opt) {
  return calibrated_subaction(sys, A, critical_value(sys, A, opt.max_period), opt);
}

SubactionResult calibrated_subaction(const System& sys, const Potential& A, const CriticalValue& cv,
                                     const SubactionOptions& opt) {
  if (sys.kind == SystemKind::MinusDoublingMap) {
    // tau_1(0) = 1 and tau_0(1) = 0: the branches close a 2-cycle on [0,1]
    // that no invariant measure sees. If it beats m, V drifts without bound.
    const double edge = 0.5 * (A(0.0) + A(1.0));
    if (edge > cv.m + 1e-12) {
      std::ostringstream os;
      os << "calibrated_subaction: (A(0) + A(1))/2 = " << edge << " exceeds m = " << cv.m
         << "; A is not continuous on the circle and has no bounded subaction on the branch grid";
      throw std::invalid_argument(os.str());
    }
  }
  SubactionResult res;
  res.m = cv.m;
  res.orbit = cv.orbit;
  GridFunction V(opt.layout, opt.n_grid, 0.0);
  double change = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    GridFunction next = lax_oleinik_step(sys, A, cv.m, V);
    next.values() -= next.values().maxCoeff();
    change = sup_distance(next, V);
    V = std::move(next);
    if (change < opt.tol) break;
  }
  if (it == opt.max_iter) {
    std::ostringstream os;
    os << "calibrated_subaction: no convergence after " << opt.max_iter << " iterations (last change " << change
       << ")";
    throw NonConvergence(os.str(), change);
  }
  res.iterations = it + 1;
  res.residual = change;

  const GridFunction lo = lax_oleinik_step(sys, A, cv.m, V);
  res.calibration_gap = sup_distance(lo, V);
  res.calibrated = res.calibration_gap <= opt.cal_tol;

  double worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < V.size(); ++j) {
    const double z = V.point(j);
    worst = std::min(worst, V(apply_map(sys, z)) - V[j] - A(z) + cv.m);
  }
  res.subaction_gap = std::max(0.0, -worst);
  res.V = std::move(V);
  return res;
}

double deviation_I(const System& sys, const Potential& A, const std::function<double(double)>& V, double m, double x,
                   const DeviationOptions& opt) {
  if (opt.n_terms < 1) throw std::invalid_argument("deviation_I: n_terms must be >= 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  struct Seen {
    double point;
    double partial;
  };
  std::deque<Seen> window;
  double sum = 0.0, last = inf;
  for (int n = 0; n < opt.n_terms; ++n) {
    for (const auto& s : window) {
      if (std::abs(s.point - x) <= opt.cycle_tol) {
        // The orbit repeats from here on: finite iff the cycle costs nothing.
        return sum - s.partial <= opt.tol ? sum : inf;
      }
    }
    window.push_back({x, sum});
    if (static_cast<int>(window.size()) > opt.cycle_window) window.pop_front();
    const double tx = apply_map(sys, x);
    last = V(tx) - V(x) - A(x) + m;
    sum += last;
    if (sum > opt.cap) return inf;
    x = tx;
  }
  return std::abs(last) < opt.tol ? sum : inf;
}

}  // namespace ergo
