#pragma once

#include <functional>
#include <vector>

#include "ergo/dynamics.hpp"
#include "ergo/grid.hpp"
#include "ergo/potential.hpp"
#include "ergo/thermo.hpp"

namespace ergo {

struct CriticalValue {
  double m = 0.0;
  PeriodicOrbit orbit;
  /// Every orbit whose average is within tie_tol of m, orbit first.
  std::vector<PeriodicOrbit> ties;
};

double birkhoff_average(const Potential& A, const PeriodicOrbit& orbit);

/// Largest Birkhoff average over periodic orbits of period <= max_period.
/// This is a lower bound for m(A) in general.
CriticalValue critical_value(const System& sys, const Potential& A, int max_period = 12, double tie_tol = 1e-12);

/// V'(x) = max over branches of V(tau_i x) + A(tau_i x) - m.
GridFunction lax_oleinik_step(const System& sys, const Potential& A, double m, const GridFunction& V);

struct SubactionOptions {
  int n_grid = 6144;
  GridLayout layout = GridLayout::Nodes;
  int max_period = 12;
  double tol = 1e-12;
  double cal_tol = 1e-8;
  int max_iter = 100000;
};

struct SubactionResult {
  GridFunction V;
  double m = 0.0;
  PeriodicOrbit orbit;
  double residual = 0.0;         // last sup-change of the normalized iteration
  double calibration_gap = 0.0;  // sup |LO(V) - V|
  double subaction_gap = 0.0;    // -min [V(T z) - V(z) - A(z) + m], clipped at 0
  bool calibrated = false;
  int iterations = 0;
};

/// Lax-Oleinik iteration from V = 0 with V <- V - max V each step.
SubactionResult calibrated_subaction(const System& sys, const Potential& A, const SubactionOptions& opt = {});
/// Same, with m supplied.
SubactionResult calibrated_subaction(const System& sys, const Potential& A, const CriticalValue& cv,
                                     const SubactionOptions& opt = {});

struct DeviationOptions {
  int n_terms = 10000;
  double cap = 1e6;
  double tol = 1e-10;
  /// Orbit points within cycle_tol of one of the last cycle_window points
  /// close a cycle.
  double cycle_tol = 1e-9;
  int cycle_window = 64;
};

/// I(x) = sum_n R(T^n x) with R = V o T - V - A + m; may return +infinity.
double deviation_I(const System& sys, const Potential& A, const std::function<double(double)>& V, double m, double x,
                   const DeviationOptions& opt = {});

}  // namespace ergo
