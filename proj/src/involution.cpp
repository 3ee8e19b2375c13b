#include "ergo/involution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ergo/kernels.hpp"

namespace ergo {

Kernel Kernel::closed_quadratic(double a, double b, double c) {
  Kernel k;
  k.form = KernelForm::ClosedQuadratic;
  k.a = a;
  k.b = b;
  k.c = c;
  std::ostringstream os;
  os.precision(17);
  os << "quadratic:" << a << "," << b << "," << c;
  k.label = os.str();
  return k;
}

Kernel Kernel::gauss_log() {
  Kernel k;
  k.form = KernelForm::GaussLog;
  k.label = "gauss-log";
  return k;
}

Kernel Kernel::explicit_grid(Eigen::MatrixXd nodes) {
  if (nodes.rows() < 2 || nodes.rows() != nodes.cols())
    throw std::invalid_argument("Kernel: explicit grid must be square with at least 2 nodes per side");
  Kernel k;
  k.form = KernelForm::ExplicitGrid;
  k.grid = std::move(nodes);
  k.label = "grid";
  return k;
}

Kernel Kernel::from_function(std::function<double(double, double)> f, std::string label) {
  Kernel k;
  k.form = KernelForm::Custom;
  k.custom = std::move(f);
  k.label = std::move(label);
  return k;
}

double Kernel::operator()(double x, double y) const {
  switch (form) {
    case KernelForm::ClosedQuadratic:
      return kernels::quadratic(a, b, c, x, y) + offset;
    case KernelForm::GaussLog:
      return kernels::gauss_log(x, y) + offset;
    case KernelForm::CocycleSeries:
      return cocycle_delta(system, potential, x, base_x, y, depth).value + offset;
    case KernelForm::ExplicitGrid: {
      const Eigen::Index n = grid.rows() - 1;
      const double tx = std::clamp(x, 0.0, 1.0) * static_cast<double>(n);
      const double ty = std::clamp(y, 0.0, 1.0) * static_cast<double>(n);
      const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(tx), n - 1);
      const Eigen::Index j = std::min<Eigen::Index>(static_cast<Eigen::Index>(ty), n - 1);
      const double fx = tx - static_cast<double>(i), fy = ty - static_cast<double>(j);
      return (1 - fx) * (1 - fy) * grid(i, j) + fx * (1 - fy) * grid(i + 1, j) + (1 - fx) * fy * grid(i, j + 1) +
             fx * fy * grid(i + 1, j + 1) + offset;
    }
    case KernelForm::Custom:
      return custom(x, y) + offset;
  }
  return 0.0;
}

Eigen::MatrixXd Kernel::matrix(const Eigen::ArrayXd& xs, const Eigen::ArrayXd& ys) const {
  Eigen::MatrixXd m(xs.size(), ys.size());
  if (form == KernelForm::ClosedQuadratic) {
    // rank-structured: W = a + b W1 + c W2 evaluated as an outer expression
    const Eigen::ArrayXXd X = xs.replicate(1, ys.size());
    const Eigen::ArrayXXd Y = ys.transpose().replicate(xs.size(), 1);
    m = (kernels::quadratic(a, b, c, X, Y) + offset).matrix();
    return m;
  }
  for (Eigen::Index j = 0; j < ys.size(); ++j)
    for (Eigen::Index i = 0; i < xs.size(); ++i) m(i, j) = (*this)(xs(i), ys(j));
  return m;
}

double cocycle_tail_bound(const Potential& A, int depth) {
  const double lambda = A.contraction;
  return A.holder_constant * std::pow(lambda, depth) / (1.0 - lambda);
}

CocycleValue cocycle_delta(const System& sys, const Potential& A, double x, double x_prime, double y, int depth) {
  if (depth < 1) throw std::invalid_argument("cocycle_delta: depth must be >= 1");
  CocycleValue out;
  out.tail_bound = cocycle_tail_bound(A, depth);
  if (x == x_prime) return out;
  double sum = 0.0;
  for (int n = 0; n < depth; ++n) {
    const Branch br = sys.branch(leading_symbol(sys, y));
    x = br(x);
    x_prime = br(x_prime);
    sum += A(x) - A(x_prime);
    y = dual_shift(sys, y);
  }
  out.value = sum;
  return out;
}

Kernel fundamental_kernel(const System& sys, const Potential& A, double base_x, int depth) {
  Kernel k;
  k.form = KernelForm::CocycleSeries;
  k.system = sys;
  k.potential = A;
  k.base_x = base_x;
  k.depth = depth;
  k.tail_bound = cocycle_tail_bound(A, depth);
  k.label = "cocycle:" + A.label;
  return k;
}

namespace {

double probe_y(const System& sys, int j, int n) {
  // Gauss: stay away from y = 0, where sigma* is undefined.
  if (sys.kind == SystemKind::GaussMap) return static_cast<double>(j + 1) / n;
  return n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
}

double dual_value(const System& sys, const Potential& A, const Kernel& W, double x, double y) {
  const double tx = tau_push(sys, y, x);
  return A(tx) + W(tx, dual_shift(sys, y)) - W(x, y);
}

}  // namespace

Potential dual_potential(const System& sys, const Potential& A, const Kernel& W, const DualOptions& opt) {
  const int n = std::max(opt.probes, 2);
  double worst = 0.0, worst_y = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = probe_y(sys, j, n);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
      const double v = dual_value(sys, A, W, static_cast<double>(i) / (n - 1), y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > worst) {
      worst = hi - lo;
      worst_y = y;
    }
  }
  if (!(worst < opt.tol)) {
    std::ostringstream os;
    os << "not an involution kernel: A*(y) varies by " << worst << " in x at y = " << worst_y;
    throw NotInvolutionKernel(os.str());
  }
  Potential out = Potential::from_function([sys, A, W](double y) { return dual_value(sys, A, W, 0.5, y); },
                                           A.holder_constant, "dual(" + A.label + ")");
  out.contraction = A.contraction;
  return out;
}

double cohomology_residual(const System& sys, const Potential& A, const Kernel& W, const Potential& A_star,
                           int probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    const double x = unif(rng);
    double y = unif(rng);
    if (sys.kind == SystemKind::GaussMap) y = 1.0 - y;
    const double r = std::abs(A_star(y) - dual_value(sys, A, W, x, y));
    worst = std::max(worst, r);
  }
  return worst;
}

std::string to_string(TwistMethod m) {
  switch (m) {
    case TwistMethod::PairwiseGrid: return "PairwiseGrid";
    case TwistMethod::DeltaMonotone: return "DeltaMonotone";
    case TwistMethod::MixedPartial: return "MixedPartial";
  }
  return "?";
}

TwistMethod twist_method_from_name(const std::string& name) {
  if (name == "PairwiseGrid" || name == "pairwise") return TwistMethod::PairwiseGrid;
  if (name == "DeltaMonotone" || name == "delta") return TwistMethod::DeltaMonotone;
  if (name == "MixedPartial" || name == "mixed") return TwistMethod::MixedPartial;
  throw std::invalid_argument("unknown twist method '" + name + "'");
}

TwistReport twist_check(const Kernel& W, TwistMethod method, const TwistOptions& opt) {
  if (opt.n_grid < 2) throw std::invalid_argument("twist_check: n_grid must be >= 2");
  TwistReport rep;
  rep.method = method;
  rep.margin_tol = opt.margin_tol;
  const int n = opt.n_grid;

  if (method == TwistMethod::MixedPartial) {
    const double h = opt.h;
    const Eigen::ArrayXd g = Eigen::ArrayXd::LinSpaced(n, h, 1.0 - h);
    double hi = -std::numeric_limits<double>::infinity(), lo = -hi, scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double x = g(i), y = g(j);
        const double pp = W(x + h, y + h), pm = W(x + h, y - h), mp = W(x - h, y + h), mm = W(x - h, y - h);
        scale = std::max({scale, std::abs(pp), std::abs(pm), std::abs(mp), std::abs(mm)});
        const double d = (pp - pm - mp + mm) / (4.0 * h * h);
        if (d > hi) {
          hi = d;
          rep.witness = {x - h, y - h, x + h, y + h};
        }
        lo = std::min(lo, d);
      }
    }
    // Rounding in the four evaluations is amplified by 1/(4h^2).
    const double noise = 16.0 * std::numeric_limits<double>::epsilon() * scale / (4.0 * h * h);
    rep.margin_tol = std::max(opt.margin_tol, noise);
    rep.mixed_partial_max = hi;
    rep.mixed_partial_min = lo;
    rep.margin = -hi;
    rep.is_twist = rep.margin > rep.margin_tol;
    return rep;
  }

  const Eigen::ArrayXd g = Eigen::ArrayXd::LinSpaced(n, 0.0, 1.0);
  const Eigen::MatrixXd M = W.matrix(g, g);
  rep.margin = std::numeric_limits<double>::infinity();
  auto consider = [&](Eigen::Index i, Eigen::Index ip, Eigen::Index j, Eigen::Index jp) {
    const double gap = M(i, jp) + M(ip, j) - M(i, j) - M(ip, jp);
    if (gap < rep.margin) {
      rep.margin = gap;
      rep.witness = {g(i), g(j), g(ip), g(jp)};
    }
  };
  if (method == TwistMethod::PairwiseGrid) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index ip = i + 1; ip < n; ++ip)
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index jp = j + 1; jp < n; ++jp) consider(i, ip, j, jp);
  } else {
    // Delta(a, a', .) = W(a, .) - W(a', .) increasing in y; adjacent cells suffice
    // because the cell increments sum to every larger quadruple.
    for (Eigen::Index i = 0; i + 1 < n; ++i)
      for (Eigen::Index j = 0; j + 1 < n; ++j) consider(i, i + 1, j, j + 1);
  }
  rep.is_twist = rep.margin > rep.margin_tol;
  return rep;
}

StabilityResult twist_stability_probe(const Potential& p, const Potential& R, const std::vector<double>& eps_list,
                                      int depth, const TwistOptions& opt) {
  if (p.form != PotentialForm::Polynomial || p.coeffs.size() > 3 || p.coeffs.size() < 3 || !(p.coeffs(2) > 0.0))
    throw std::invalid_argument("twist_stability_probe: p must be a + b x + c x^2 with c > 0");
  const System sys = System::minus_doubling();
  StabilityResult out;
  for (double eps : eps_list) {
    const Potential A = sum(p, eps, R);
    const Kernel W = fundamental_kernel(sys, A, 0.0, depth);
    TwistReport rep = twist_check(W, TwistMethod::DeltaMonotone, opt);
    if (rep.is_twist && (!out.largest_passing || eps > *out.largest_passing)) out.largest_passing = eps;
    out.eps.push_back(eps);
    out.reports.push_back(rep);
  }
  return out;
}

}  // namespace ergo
