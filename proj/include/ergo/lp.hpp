#pragma once

#include <string>

#include <Eigen/Core>

namespace ergo::lp {

/// Balanced transportation problem: min sum C_ij X_ij subject to
/// X 1 = supply, X^T 1 = demand, X >= 0.
struct Solution {
  Eigen::MatrixXd flow;
  double value = 0.0;
  Eigen::VectorXd u;  // row potentials, C_ij - u_i - v_j >= 0 at optimality
  Eigen::VectorXd v;
  std::string method;
  long long work = 0;  // trees visited or pivots performed
};

/// sum C_ij X_ij over cells with X_ij != 0, in row-major order.
double plan_value(const Eigen::MatrixXd& cost, const Eigen::MatrixXd& flow);

/// Number of spanning trees of K_{n,m}, n^(m-1) m^(n-1), as a double.
double spanning_tree_count(Eigen::Index n, Eigen::Index m);

/// Exhaustive search over basic feasible solutions (spanning trees of the
/// bipartite support graph). Exact minimum over vertices; small instances only.
Solution vertex_enumeration(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                            const Eigen::VectorXd& demand);

/// Transportation simplex: northwest-corner start, MODI potentials, Dantzig
/// pricing with a switch to Bland's rule after a run of degenerate pivots.
Solution transportation_simplex(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                                const Eigen::VectorXd& demand);

}  // namespace ergo::lp
