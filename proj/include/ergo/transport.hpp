#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ergo/dynamics.hpp"
#include "ergo/involution.hpp"
#include "ergo/lp.hpp"

namespace ergo {

class SupportIdentityViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finitely supported probability on [0,1].
struct AtomicMeasure {
  std::vector<double> points;
  Eigen::VectorXd weights;

  AtomicMeasure() = default;
  AtomicMeasure(std::vector<double> pts, Eigen::VectorXd w);
  static AtomicMeasure dirac(double p) { return {{p}, Eigen::VectorXd::Ones(1)}; }
  static AtomicMeasure uniform(std::vector<double> pts);
  std::size_t size() const { return points.size(); }
};

/// Finitely supported probability on the extension space.
struct ExtensionMeasure {
  std::vector<ExtensionPoint> atoms;
  Eigen::VectorXd weights;

  AtomicMeasure x_marginal() const;
  AtomicMeasure y_marginal() const;
};

/// Atoms (x_i, y_i) where y_i is the point whose itinerary is the reversed
/// past of x_i; uniform weights 1/period.
ExtensionMeasure natural_extension_measure(const System& sys, const PeriodicOrbit& orbit);
/// Convex combination of several orbits' extension measures.
ExtensionMeasure natural_extension_measure(const System& sys, const std::vector<PeriodicOrbit>& orbits,
                                           const std::vector<double>& weights);

enum class CostVariant { MinusW, MinusWPlusI };

struct CostSpec {
  CostVariant variant = CostVariant::MinusW;
  Kernel W;
  double gamma = 0.0;
  std::function<double(double)> I;  // MinusWPlusI only; may return +inf

  static CostSpec minus_w(Kernel W, double gamma = 0.0) { return {CostVariant::MinusW, std::move(W), gamma, {}}; }
  static CostSpec minus_w_plus_i(Kernel W, double gamma, std::function<double(double)> I);

  double operator()(double x, double y) const;
  Eigen::MatrixXd matrix(const std::vector<double>& xs, const std::vector<double>& ys) const;
};

struct GammaResult {
  double gamma = 0.0;
  double max_deviation = 0.0;
};

/// gamma = W(p, p*) - V(p) - V*(p*) averaged over the support atoms; throws
/// SupportIdentityViolated when atoms disagree by tol or more.
GammaResult gamma_from_support(const Kernel& W, const std::function<double(double)>& V,
                               const std::function<double(double)>& V_star, const std::vector<ExtensionPoint>& atoms,
                               double tol = 1e-8);

struct TransportPlan {
  std::vector<double> xs;  // support of mu
  std::vector<double> ys;  // support of mu*
  Eigen::MatrixXd coupling;
  double value = 0.0;
  Eigen::VectorXd u, v;  // LP duals
  std::string method;

  /// Atoms with weight above tol, row-major.
  std::vector<std::pair<ExtensionPoint, double>> atoms(double tol = 1e-14) const;
};

/// Optimal coupling of mu and mu_star for the cost. Small instances
/// (n m <= 64 with few spanning trees) use vertex enumeration, the rest the
/// transportation simplex.
TransportPlan solve_kantorovich(const AtomicMeasure& mu, const AtomicMeasure& mu_star, const CostSpec& c);

enum class TransformDirection {
  MaxKernel,  // f#(y) = max_x -f(x) + G(x, y)
  MinCost     // f#(y) = min_x -f(x) + c(x, y)
};

/// G is indexed (x, y); returns one value per column.
Eigen::VectorXd conjugate_transform(const Eigen::VectorXd& f, const Eigen::MatrixXd& G, TransformDirection dir);

struct DualityReport {
  bool admissible = false;
  double worst_violation = 0.0;  // max of -V(x) - V*(y) + k - c(x, y)
  ExtensionPoint violation_at;
  bool slackness = false;
  double worst_slack = 0.0;  // max |c + V + V* - k| over plan atoms
  ExtensionPoint slack_at;
  double constant = 0.0;     // fitted k
  double dual_value = 0.0;
  double primal_value = 0.0;
  double gap = 0.0;
  bool passed = false;
};

/// Checks (-V + k, -V*) against the plan; k is fitted on the plan atoms.
DualityReport duality_certificate(const std::function<double(double)>& V, const std::function<double(double)>& V_star,
                                  const CostSpec& c, const TransportPlan& plan, const std::vector<double>& probe_xs,
                                  const std::vector<double>& probe_ys, double tol = 1e-8);

struct MonotonicityReport {
  bool passed = true;
  double worst_slack = 0.0;  // min over subsets/permutations of permuted - original
  std::vector<std::size_t> subset;
  std::vector<std::size_t> permutation;
  long long checked = 0;
};

MonotonicityReport cyclical_monotonicity_check(const std::vector<ExtensionPoint>& S, const CostSpec& c,
                                               int n_max = 5, double tol = 1e-10);

struct OrderReport {
  bool passed = true;
  std::vector<std::pair<ExtensionPoint, ExtensionPoint>> violations;
};

/// Every pair with distinct x and distinct y must be anti-monotone.
OrderReport twist_order_check(const std::vector<ExtensionPoint>& S);

struct GraphReport {
  bool is_graph = true;
  bool nonincreasing = true;
  std::vector<double> witnesses;  // x clusters carrying several y
};

GraphReport graph_check(const TransportPlan& plan, double cluster_tol = 1e-9, double weight_tol = 1e-12);
GraphReport graph_check(const std::vector<ExtensionPoint>& atoms, double cluster_tol = 1e-9);

enum class RochetMode { BruteForce, TwistOrdered };

/// Chain potential f(z) with base atom S[base]. BruteForce takes the
/// infimum over all chains of length <= chain_cap; TwistOrdered uses the
/// single chain through the atoms strictly between the base and z, sorted
/// by x (intended for the leftmost base under a twist cost).
double rochet_potential(const std::vector<ExtensionPoint>& S, const CostSpec& c, std::size_t base, double z,
                        RochetMode mode, int chain_cap = 5);

/// I(x) + gamma - W(x, y) + V(x) + V*(y); +inf when I is.
double b_function(double x, double y, const Kernel& W, const std::function<double(double)>& V,
                  const std::function<double(double)>& V_star, double gamma, const std::function<double(double)>& I);

}  // namespace ergo
