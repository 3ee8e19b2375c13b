#pragma once

// Closed-form involution kernels. Templated on the argument type so they
// work for scalars and for Eigen array expressions alike.

#include <cmath>

#include <Eigen/Core>

namespace ergo::kernels {

/// Kernel of A(x) = x under T(x) = -2x mod 1.
template <typename X, typename Y>
auto w1(const X& x, const Y& y) {
  return -(x + y) / 3.0;
}

/// Kernel of A(x) = x^2 under T(x) = -2x mod 1.
template <typename X, typename Y>
auto w2(const X& x, const Y& y) {
  return (x * x + y * y) / 3.0 - 4.0 / 3.0 * x * y;
}

/// a + b W1 + c W2, the kernel of a + b x + c x^2.
template <typename X, typename Y>
auto quadratic(double a, double b, double c, const X& x, const Y& y) {
  return a + b * w1(x, y) + c * w2(x, y);
}

/// Kernel of 2 log x under the Gauss map.
inline double gauss_log(double x, double y) { return -2.0 * std::log1p(x * y); }

template <typename Derived>
Eigen::ArrayXd gauss_log(const Eigen::ArrayBase<Derived>& x, const Eigen::ArrayBase<Derived>& y) {
  return -2.0 * (x.derived() * y.derived()).log1p();
}

/// Golden mean (sqrt 5 - 1)/2, the Gauss fixed point of branch 1.
inline double golden() { return (std::sqrt(5.0) - 1.0) / 2.0; }

}  // namespace ergo::kernels
