#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ergo/involution.hpp"
#include "ergo/kernels.hpp"

using namespace ergo;

namespace {

const System md = System::minus_doubling();
const Potential x_sq = Potential::polynomial({0, 0, 1});

}  // namespace

TEST_CASE("closed-form kernels") {
  const Kernel w1 = Kernel::closed_quadratic(0, 1, 0), w2 = Kernel::closed_quadratic(0, 0, 1);
  CHECK(w1(0.3, 0.6) == doctest::Approx(-0.3));
  CHECK(w2(0.3, 0.6) == doctest::Approx((0.09 + 0.36) / 3.0 - 4.0 * 0.18 / 3.0));
  CHECK(Kernel::gauss_log()(0.5, 0.5) == doctest::Approx(-2.0 * std::log(1.25)));
  // kernels of the quadratic presets
  const Kernel dirac = Kernel::closed_quadratic(0, 2, -1);
  CHECK(dirac(2.0 / 3.0, 2.0 / 3.0) == doctest::Approx(-16.0 / 27.0).epsilon(1e-15));

  // a + b W1 + c W2 pointwise
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double a = u(rng) - 0.5, b = 2 * u(rng) - 1, c = 2 * u(rng) - 1, x = u(rng), y = u(rng);
    const Kernel W = Kernel::closed_quadratic(a, b, c);
    CHECK(W(x, y) == doctest::Approx(a + b * kernels::w1(x, y) + c * kernels::w2(x, y)).epsilon(1e-14));
  }

  const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(5, 0, 1), ys = Eigen::ArrayXd::LinSpaced(4, 0.1, 0.9);
  const Eigen::MatrixXd M = dirac.matrix(xs, ys);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(M(i, j) == doctest::Approx(dirac(xs(i), ys(j))).epsilon(1e-15));

  Eigen::MatrixXd nodes(3, 3);
  nodes << 0, 1, 2, 1, 2, 3, 2, 3, 4;
  const Kernel g = Kernel::explicit_grid(nodes);
  CHECK(g(0.25, 0.75) == doctest::Approx(2.0));
  CHECK(g(1.0, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("cocycle_delta examples") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Potential A = Potential::polynomial({0.3, -1.2, 0.7, 0.4});
  for (int k = 0; k < 300; ++k) {
    const double x = u(rng), xp = u(rng), xpp = u(rng), y = u(rng);
    CHECK(cocycle_delta(md, A, x, x, y).value == 0.0);
    const double d = cocycle_delta(md, A, x, xp, y).value;
    CHECK(d == doctest::Approx(-cocycle_delta(md, A, xp, x, y).value).epsilon(1e-14));
    // additivity
    const double d2 = cocycle_delta(md, A, xp, xpp, y).value, d3 = cocycle_delta(md, A, x, xpp, y).value;
    CHECK(std::abs(d + d2 - d3) < 1e-9);
  }
  CHECK_THROWS(cocycle_delta(md, A, 0.1, 0.2, 0.3, 0));
}

TEST_CASE("cocycle of x^2 matches W2 differences") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng), xp = u(rng), y = u(rng);
    const CocycleValue d = cocycle_delta(md, x_sq, x, xp, y, 40);
    const double ref = kernels::w2(x, y) - kernels::w2(xp, y);
    CHECK(std::abs(d.value - ref) <= d.tail_bound);
  }
  CHECK(cocycle_tail_bound(x_sq, 48) < 1e-12);
  CHECK(cocycle_tail_bound(x_sq, 40) == doctest::Approx(2.0 * std::ldexp(1.0, -40) / 0.5));
}

TEST_CASE("fundamental_kernel examples") {
  const Kernel W0 = fundamental_kernel(md, x_sq, 0.4);
  for (double y : {0.0, 0.13, 0.5, 0.77, 1.0}) CHECK(W0(0.4, y) == 0.0);

  // W0 - W2 depends on y alone
  const Kernel W2 = Kernel::closed_quadratic(0, 0, 1);
  for (double y : {0.05, 0.3, 0.61, 0.95}) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 50; ++i) {
      const double x = i / 50.0, d = W0(x, y) - W2(x, y);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    CHECK(hi - lo < 1e-8);
  }

  const Kernel Z = fundamental_kernel(md, Potential::zero(), 0.5);
  for (double x : {0.0, 0.3, 0.9})
    for (double y : {0.1, 0.6}) CHECK(Z(x, y) == 0.0);
}

TEST_CASE("dual_potential examples") {
  const Potential s = dual_potential(md, x_sq, Kernel::closed_quadratic(0, 0, 1));
  for (double y : {0.0, 0.2, 0.5, 0.71, 0.99}) CHECK(s(y) == doctest::Approx(y * y).epsilon(1e-12));

  const Potential g = dual_potential(System::gauss(), Potential::log_gauss(), Kernel::gauss_log());
  for (double y : {0.05, 0.3, 0.618, 0.9}) CHECK(g(y) == doctest::Approx(2.0 * std::log(y)).epsilon(1e-12));

  const Potential c = dual_potential(md, Potential::constant(0.7), Kernel::zero());
  for (double y : {0.1, 0.8}) CHECK(c(y) == doctest::Approx(0.7));

  // W1 is the kernel of x, not of x^2
  CHECK_THROWS_AS(dual_potential(md, x_sq, Kernel::closed_quadratic(0, 1, 0)), NotInvolutionKernel);
}

TEST_CASE("cohomology_residual examples") {
  CHECK(cohomology_residual(md, x_sq, Kernel::closed_quadratic(0, 0, 1), x_sq) < 1e-10);
  const Potential q = Potential::polynomial({-0.25, 1, -1});
  CHECK(cohomology_residual(md, q, Kernel::closed_quadratic(0, 1, -1), q) < 1e-10);
  CHECK(cohomology_residual(md, Potential::zero(), Kernel::zero(), Potential::zero()) == 0.0);
  const Potential lin = Potential::polynomial({0, 1});
  CHECK(cohomology_residual(md, lin, Kernel::closed_quadratic(0, 1, 0), lin) < 1e-10);
  CHECK(cohomology_residual(System::gauss(), Potential::log_gauss(), Kernel::gauss_log(), Potential::log_gauss()) <
        1e-10);
  // wrong kernel is detected
  CHECK(cohomology_residual(md, x_sq, Kernel::closed_quadratic(0, 1, 0), x_sq) > 1e-3);
}

TEST_CASE("involutivity of the quadratic family") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const Potential A = Potential::polynomial({a, b, c});
    CHECK(cohomology_residual(md, A, Kernel::closed_quadratic(a, b, c), A, 200, 5 + k) < 1e-10);
  }
}

TEST_CASE("twist_check examples") {
  const Kernel w1 = Kernel::closed_quadratic(0, 1, 0), w2 = Kernel::closed_quadratic(0, 0, 1);
  const TwistReport r2 = twist_check(w2, TwistMethod::MixedPartial);
  CHECK(r2.is_twist);
  CHECK(std::abs(r2.mixed_partial_max + 4.0 / 3.0) < 1e-6);
  CHECK(std::abs(r2.mixed_partial_min + 4.0 / 3.0) < 1e-6);

  const TwistReport r1 = twist_check(w1, TwistMethod::MixedPartial);
  CHECK_FALSE(r1.is_twist);
  CHECK(std::abs(r1.mixed_partial_max) < 1e-6);

  const Kernel kneg = Kernel::from_function(
      [](double x, double y) { return -x * x / 3 - y * y / 3 + 4 * x * y / 3 - 2 * x / 3 - y / 3; }, "kneg");
  const TwistReport r5 = twist_check(kneg, TwistMethod::MixedPartial);
  CHECK_FALSE(r5.is_twist);
  CHECK(std::abs(r5.mixed_partial_max - 4.0 / 3.0) < 1e-6);

  // witness ordering
  const TwistReport p = twist_check(kneg, TwistMethod::PairwiseGrid);
  CHECK_FALSE(p.is_twist);
  CHECK(p.witness[0] < p.witness[2]);
  CHECK(p.witness[1] < p.witness[3]);

  CHECK(twist_method_from_name(to_string(TwistMethod::DeltaMonotone)) == TwistMethod::DeltaMonotone);
  CHECK_THROWS(twist_method_from_name("bogus"));
}

TEST_CASE("twist methods agree on the quadratic family") {
  for (double c : {-1.0, -0.25, 0.0, 0.5, 1.0}) {
    const Kernel W = Kernel::closed_quadratic(0.1, 0.7, c);
    const bool a = twist_check(W, TwistMethod::PairwiseGrid).is_twist;
    const bool b = twist_check(W, TwistMethod::DeltaMonotone).is_twist;
    const bool m = twist_check(W, TwistMethod::MixedPartial).is_twist;
    CHECK(a == b);
    CHECK(b == m);
    CHECK(a == (c > 0));
  }
  const TwistReport r = twist_check(Kernel::closed_quadratic(0, 0, 1), TwistMethod::PairwiseGrid);
  CHECK(r.is_twist);
  CHECK(r.margin > r.margin_tol);
}

TEST_CASE("twist_stability_probe examples") {
  const StabilityResult zero = twist_stability_probe(x_sq, Potential::zero(), {0.5, 0.1, 0.01});
  REQUIRE(zero.largest_passing.has_value());
  CHECK(*zero.largest_passing == 0.5);
  for (const auto& r : zero.reports) CHECK(r.is_twist);

  const StabilityResult cubic = twist_stability_probe(x_sq, Potential::polynomial({0, 0, 0, 1}), {0.5, 0.1, 0.01});
  CHECK(cubic.largest_passing.has_value());
  CHECK(cubic.reports.size() == 3);

  const double two_pi = 2.0 * std::acos(-1.0);
  const Potential sine =
      Potential::from_function([two_pi](double x) { return std::sin(two_pi * x); }, two_pi, "sin(2 pi x)");
  const StabilityResult s = twist_stability_probe(x_sq, sine, {1e-3});
  REQUIRE(s.reports.size() == 1);
  CHECK(s.reports[0].is_twist);
  CHECK(s.reports[0].margin > 0.0);

  CHECK_THROWS(twist_stability_probe(Potential::polynomial({0, 1, -1}), Potential::zero(), {0.1}));
}
