#pragma once

#include <stdexcept>

#include "ergo/dynamics.hpp"
#include "ergo/grid.hpp"
#include "ergo/involution.hpp"
#include "ergo/potential.hpp"

namespace ergo {

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double last) : std::runtime_error(what), last_change(last) {}
  double last_change;
};

struct ThermoOptions {
  int n_grid = 4096;
  GridLayout layout = GridLayout::Cells;
  double tol_eig = 1e-10;
  int max_iter = 20000;
};

/// (L f)(x) = sum over branches of exp(beta A(tau_i x)) f(tau_i x) at each grid point.
GridFunction ruelle_apply(const System& sys, const Potential& A, double beta, const GridFunction& f);
/// The same sum at a single point x.
double ruelle_value(const System& sys, const Potential& A, double beta, const GridFunction& f, double x);

struct EigenPair {
  double eigenvalue = 0.0;
  double log_eigenvalue = 0.0;
  GridFunction eigenfunction;      // sup-normalized
  GridFunction log_eigenfunction;  // log of the above, max 0
  double residual = 0.0;           // sup |L phi - lambda phi| / lambda
  int iterations = 0;
};

/// Power iteration from phi = 1, carried out on log phi.
EigenPair eigenpair(const System& sys, const Potential& A, double beta, const ThermoOptions& opt = {});

/// Probability eigenvector of the adjoint of the discretized operator,
/// returned as log weights per grid point.
Eigen::ArrayXd log_eigenmeasure(const System& sys, const Potential& A, double beta, const ThermoOptions& opt = {});

/// (1/beta) log phi_{beta A}, shifted so that its maximum is 0.
GridFunction v_beta(const System& sys, const Potential& A, double beta, const ThermoOptions& opt = {});

/// (1/beta) log of the double integral of exp(beta W) against the eigenmeasures
/// of beta A (in x) and beta A* (in y).
double gamma_estimate(const System& sys, const Potential& A, const Potential& A_star, const Kernel& W, double beta,
                      const ThermoOptions& opt = {});

}  // namespace ergo
