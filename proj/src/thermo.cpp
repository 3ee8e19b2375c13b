#include "ergo/thermo.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace ergo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// One incoming term of the discretized operator: grid point `to` receives
// weight exp(log_w) times f at grid point `from`.
struct Link {
  Eigen::Index to;
  Eigen::Index from;
  double log_w;
};

std::vector<Link> operator_links(const System& sys, const Potential& A, double beta, const GridFunction& shape) {
  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(shape.size() * sys.branch_count() * 2));
  for (Eigen::Index j = 0; j < shape.size(); ++j) {
    const double x = shape.point(j);
    for (const auto& br : sys.branches()) {
      const double z = br(x);
      const double lw = beta * A(z);
      const Stencil s = shape.stencil(z);
      for (int k = 0; k < s.size; ++k)
        if (s.weight[k] > 0.0) links.push_back({j, s.index[k], lw + std::log(s.weight[k])});
    }
  }
  return links;
}

// log sum_i exp(a_i) accumulated per target index.
Eigen::ArrayXd scatter_lse(const std::vector<Link>& links, const Eigen::ArrayXd& log_src, Eigen::Index n, bool adjoint) {
  Eigen::ArrayXd mx = Eigen::ArrayXd::Constant(n, kNegInf);
  for (const auto& l : links) {
    const Eigen::Index dst = adjoint ? l.from : l.to, src = adjoint ? l.to : l.from;
    mx(dst) = std::max(mx(dst), l.log_w + log_src(src));
  }
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n);
  for (const auto& l : links) {
    const Eigen::Index dst = adjoint ? l.from : l.to, src = adjoint ? l.to : l.from;
    if (mx(dst) > kNegInf) acc(dst) += std::exp(l.log_w + log_src(src) - mx(dst));
  }
  return mx + acc.log();
}

double log_sum_exp(const Eigen::ArrayXd& a) {
  const double m = a.maxCoeff();
  if (m == kNegInf) return m;
  return m + std::log((a - m).exp().sum());
}

}  // namespace

GridFunction ruelle_apply(const System& sys, const Potential& A, double beta, const GridFunction& f) {
  if (beta < 0.0) throw std::invalid_argument("ruelle_apply: beta must be >= 0");
  if (!(f.values().minCoeff() > 0.0)) throw std::invalid_argument("ruelle_apply: f must be strictly positive");
  Eigen::ArrayXd out(f.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) out(j) = ruelle_value(sys, A, beta, f, f.point(j));
  return f.with_values(out);
}

double ruelle_value(const System& sys, const Potential& A, double beta, const GridFunction& f, double x) {
  double s = 0.0;
  for (const auto& br : sys.branches()) {
    const double z = br(x);
    s += std::exp(beta * A(z)) * f(z);
  }
  return s;
}

EigenPair eigenpair(const System& sys, const Potential& A, double beta, const ThermoOptions& opt) {
  if (beta < 0.0) throw std::invalid_argument("eigenpair: beta must be >= 0");
  const GridFunction shape(opt.layout, opt.n_grid);
  const auto links = operator_links(sys, A, beta, shape);
  const Eigen::Index n = shape.size();

  Eigen::ArrayXd g = Eigen::ArrayXd::Zero(n);
  double log_lambda = 0.0, change = std::numeric_limits<double>::infinity(), residual = change;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    Eigen::ArrayXd next = scatter_lse(links, g, n, false);
    const double ll = next.maxCoeff();
    next -= ll;
    residual = (next.exp() - g.exp()).abs().maxCoeff();
    change = it == 0 ? std::numeric_limits<double>::infinity() : std::abs(ll - log_lambda);
    log_lambda = ll;
    g = next;
    if (change < opt.tol_eig && residual < opt.tol_eig) break;
  }
  if (it == opt.max_iter) {
    std::ostringstream os;
    os << "eigenpair: no convergence after " << opt.max_iter << " iterations (residual " << residual << ")";
    throw NonConvergence(os.str(), residual);
  }
  EigenPair ep;
  ep.log_eigenvalue = log_lambda;
  ep.eigenvalue = std::exp(log_lambda);
  ep.log_eigenfunction = shape.with_values(g);
  ep.eigenfunction = shape.with_values(g.exp());
  ep.residual = residual;
  ep.iterations = it + 1;
  return ep;
}

Eigen::ArrayXd log_eigenmeasure(const System& sys, const Potential& A, double beta, const ThermoOptions& opt) {
  const GridFunction shape(opt.layout, opt.n_grid);
  const auto links = operator_links(sys, A, beta, shape);
  const Eigen::Index n = shape.size();
  Eigen::ArrayXd g = Eigen::ArrayXd::Constant(n, -std::log(static_cast<double>(n)));
  double change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iter; ++it) {
    Eigen::ArrayXd next = scatter_lse(links, g, n, true);
    next -= log_sum_exp(next);
    change = (next.exp() - g.exp()).abs().sum();
    g = next;
    if (change < opt.tol_eig) return g;
  }
  std::ostringstream os;
  os << "log_eigenmeasure: no convergence after " << opt.max_iter << " iterations (L1 change " << change << ")";
  throw NonConvergence(os.str(), change);
}

GridFunction v_beta(const System& sys, const Potential& A, double beta, const ThermoOptions& opt) {
  if (!(beta > 0.0)) throw std::invalid_argument("v_beta: beta must be > 0");
  const EigenPair ep = eigenpair(sys, A, beta, opt);
  Eigen::ArrayXd v = ep.log_eigenfunction.values() / beta;
  v -= v.maxCoeff();
  return ep.log_eigenfunction.with_values(v);
}

double gamma_estimate(const System& sys, const Potential& A, const Potential& A_star, const Kernel& W, double beta,
                      const ThermoOptions& opt) {
  if (!(beta > 0.0)) throw std::invalid_argument("gamma_estimate: beta must be > 0");
  const Eigen::ArrayXd nu = log_eigenmeasure(sys, A, beta, opt);
  const Eigen::ArrayXd nu_star = log_eigenmeasure(sys, A_star, beta, opt);
  const GridFunction shape(opt.layout, opt.n_grid);
  const Eigen::ArrayXd pts = shape.points();
  Eigen::ArrayXd per_y(pts.size());
  for (Eigen::Index k = 0; k < pts.size(); ++k) {
    const Eigen::ArrayXd col = W.matrix(pts, Eigen::ArrayXd::Constant(1, pts(k))).array();
    per_y(k) = log_sum_exp(nu + beta * col) + nu_star(k);
  }
  return log_sum_exp(per_y) / beta;
}

}  // namespace ergo
