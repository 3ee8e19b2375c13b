#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ergo/dynamics.hpp"
#include "ergo/potential.hpp"

namespace ergo {

class NotInvolutionKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KernelForm { ClosedQuadratic, GaussLog, CocycleSeries, ExplicitGrid, Custom };

/// Involution kernel W(x, y); x is the future coordinate, y the past.
struct Kernel {
  KernelForm form = KernelForm::ClosedQuadratic;
  double a = 0.0, b = 0.0, c = 0.0;  // ClosedQuadratic: a + b W1 + c W2
  double offset = 0.0;               // added to every form

  // CocycleSeries: W(x,y) = Delta_A(x, base_x, y)
  System system;
  Potential potential;
  double base_x = 0.0;
  int depth = 48;
  double tail_bound = 0.0;

  // ExplicitGrid: values at nodes (i/n, j/n), bilinear in between
  Eigen::MatrixXd grid;

  std::function<double(double, double)> custom;
  std::string label;

  static Kernel zero() { return closed_quadratic(0.0, 0.0, 0.0); }
  static Kernel constant(double k) { return closed_quadratic(k, 0.0, 0.0); }
  static Kernel closed_quadratic(double a, double b, double c);
  static Kernel gauss_log();
  static Kernel explicit_grid(Eigen::MatrixXd nodes);
  static Kernel from_function(std::function<double(double, double)> f, std::string label);

  double operator()(double x, double y) const;

  /// W(x_i, y_j) for all pairs.
  Eigen::MatrixXd matrix(const Eigen::ArrayXd& xs, const Eigen::ArrayXd& ys) const;
};

struct CocycleValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Sum over n = 1..depth of A(tau_{n,y} x) - A(tau_{n,y} x'), the branches
/// being driven by the successive leading symbols of y under sigma*.
CocycleValue cocycle_delta(const System& sys, const Potential& A, double x, double x_prime, double y, int depth = 48);

/// holder * lambda^depth / (1 - lambda).
double cocycle_tail_bound(const Potential& A, int depth);

Kernel fundamental_kernel(const System& sys, const Potential& A, double base_x, int depth = 48);

struct DualOptions {
  int probes = 16;
  double tol = 1e-9;
};

/// A*(y) = A(tau_y x) + W(tau_y x, sigma* y) - W(x, y), checked to be
/// independent of x on a probe grid. Throws NotInvolutionKernel otherwise.
Potential dual_potential(const System& sys, const Potential& A, const Kernel& W, const DualOptions& opt = {});

/// Max over random (x, y) of |A*(y) - A(tau_y x) - W(tau_y x, sigma* y) + W(x, y)|.
double cohomology_residual(const System& sys, const Potential& A, const Kernel& W, const Potential& A_star,
                           int probes = 1000, std::uint64_t seed = 1);

enum class TwistMethod { PairwiseGrid, DeltaMonotone, MixedPartial };

std::string to_string(TwistMethod m);
TwistMethod twist_method_from_name(const std::string& name);

struct TwistReport {
  bool is_twist = false;
  /// Smallest W(a,b') + W(a',b) - W(a,b) - W(a',b') found; for MixedPartial,
  /// minus the largest mixed partial.
  double margin = 0.0;
  double margin_tol = 1e-9;
  std::array<double, 4> witness{0, 0, 0, 0};  // a, b, a', b'
  TwistMethod method = TwistMethod::PairwiseGrid;
  double mixed_partial_max = 0.0;  // MixedPartial only
  double mixed_partial_min = 0.0;
};

struct TwistOptions {
  int n_grid = 24;
  double h = 1e-4;
  double margin_tol = 1e-9;
};

TwistReport twist_check(const Kernel& W, TwistMethod method, const TwistOptions& opt = {});

struct StabilityResult {
  std::optional<double> largest_passing;
  std::vector<double> eps;
  std::vector<TwistReport> reports;
};

/// For each eps, builds A = p + eps R on T(x) = -2x mod 1, its cocycle-series
/// kernel and a DeltaMonotone twist check. Reports; never asserts.
StabilityResult twist_stability_probe(const Potential& p, const Potential& R, const std::vector<double>& eps_list,
                                      int depth = 48, const TwistOptions& opt = {});

}  // namespace ergo
