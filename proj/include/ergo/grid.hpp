#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace ergo {

/// Cells: n values at the cell centers (i + 1/2)/n, piecewise constant.
/// Nodes: n + 1 values at i/n, piecewise linear.
enum class GridLayout { Cells, Nodes };

/// Up to two (index, weight) pairs reproducing the grid lookup at a point.
struct Stencil {
  std::array<Eigen::Index, 2> index{0, 0};
  std::array<double, 2> weight{1.0, 0.0};
  int size = 1;
};

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridLayout layout, int n_grid, double fill = 0.0);
  GridFunction(GridLayout layout, int n_grid, Eigen::ArrayXd values);

  /// Samples f at the grid points.
  template <typename F>
  static GridFunction sample(GridLayout layout, int n_grid, F&& f) {
    GridFunction g(layout, n_grid);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.values_(i) = f(g.point(i));
    return g;
  }

  GridLayout layout() const { return layout_; }
  int n_grid() const { return n_grid_; }
  Eigen::Index size() const { return values_.size(); }
  double point(Eigen::Index i) const;
  Eigen::ArrayXd points() const;

  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() { return values_; }
  double operator[](Eigen::Index i) const { return values_(i); }

  Stencil stencil(double x) const;
  /// Grid lookup at an arbitrary x in [0,1] (clamped).
  double operator()(double x) const;

  GridFunction with_values(Eigen::ArrayXd v) const { return GridFunction(layout_, n_grid_, std::move(v)); }

  /// `cell_center,value` rows with 17 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  GridLayout layout_ = GridLayout::Cells;
  int n_grid_ = 0;
  Eigen::ArrayXd values_;
};

double sup_distance(const GridFunction& a, const GridFunction& b);

}  // namespace ergo
