#include "ergo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ergo/export.hpp"

namespace ergo {

GridFunction::GridFunction(GridLayout layout, int n_grid, double fill)
    : GridFunction(layout, n_grid, Eigen::ArrayXd::Constant(layout == GridLayout::Cells ? n_grid : n_grid + 1, fill)) {}

GridFunction::GridFunction(GridLayout layout, int n_grid, Eigen::ArrayXd values)
    : layout_(layout), n_grid_(n_grid), values_(std::move(values)) {
  if (n_grid < 2) throw std::invalid_argument("GridFunction: n_grid must be >= 2");
  const Eigen::Index expected = layout == GridLayout::Cells ? n_grid : n_grid + 1;
  if (values_.size() != expected) throw std::invalid_argument("GridFunction: value count does not match layout");
}

double GridFunction::point(Eigen::Index i) const {
  const double n = n_grid_;
  return layout_ == GridLayout::Cells ? (static_cast<double>(i) + 0.5) / n : static_cast<double>(i) / n;
}

Eigen::ArrayXd GridFunction::points() const {
  Eigen::ArrayXd p(size());
  for (Eigen::Index i = 0; i < size(); ++i) p(i) = point(i);
  return p;
}

Stencil GridFunction::stencil(double x) const {
  Stencil s;
  const double t = std::clamp(x, 0.0, 1.0) * n_grid_;
  if (layout_ == GridLayout::Cells) {
    s.index[0] = std::min<Eigen::Index>(static_cast<Eigen::Index>(t), n_grid_ - 1);
    return s;
  }
  const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(t), n_grid_ - 1);
  const double frac = t - static_cast<double>(i);
  s.index = {i, i + 1};
  s.weight = {1.0 - frac, frac};
  s.size = 2;
  return s;
}

double GridFunction::operator()(double x) const {
  const Stencil s = stencil(x);
  double r = s.weight[0] * values_(s.index[0]);
  if (s.size == 2 && s.weight[1] != 0.0) r += s.weight[1] * values_(s.index[1]);
  return r;
}

void GridFunction::write_csv(std::ostream& os) const {
  os << "cell_center,value\n";
  for (Eigen::Index i = 0; i < size(); ++i) os << format_real(point(i)) << ',' << format_real(values_(i)) << '\n';
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: grids differ");
  return (a.values() - b.values()).abs().maxCoeff();
}

}  // namespace ergo
