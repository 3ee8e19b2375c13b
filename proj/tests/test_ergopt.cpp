#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ergo/ergopt.hpp"
#include "ergo/kernels.hpp"
#include "ergo/presets.hpp"

using namespace ergo;

namespace {

double sup_error(const GridFunction& V, const std::function<double(double)>& ref, double from = 0.0) {
  // compare after matching the additive constant at the grid maximum of ref
  double mx = -1e300;
  for (Eigen::Index i = 0; i < V.size(); ++i)
    if (V.point(i) >= from) mx = std::max(mx, ref(V.point(i)));
  double vmax = -1e300;
  for (Eigen::Index i = 0; i < V.size(); ++i)
    if (V.point(i) >= from) vmax = std::max(vmax, V[i]);
  double err = 0.0;
  for (Eigen::Index i = 0; i < V.size(); ++i)
    if (V.point(i) >= from) err = std::max(err, std::abs((V[i] - vmax) - (ref(V.point(i)) - mx)));
  return err;
}

}  // namespace

TEST_CASE("critical_value examples") {
  const System md = System::minus_doubling();
  const auto d = critical_value(md, Potential::polynomial({-1, 2, -1}), 4);
  CHECK(std::abs(d.m - (-1.0 / 9.0)) < 1e-12);
  REQUIRE(d.orbit.period() == 1);
  CHECK(d.orbit.points[0] == doctest::Approx(2.0 / 3.0));

  const auto p2 = critical_value(md, Potential::polynomial({-0.25, 1, -1}), 4);
  CHECK(std::abs(p2.m - (-1.0 / 36.0)) < 1e-12);
  REQUIRE(p2.ties.size() == 2);
  CHECK(p2.ties[0].points[0] == doctest::Approx(1.0 / 3.0));
  CHECK(p2.ties[1].points[0] == doctest::Approx(2.0 / 3.0));

  const double b = kernels::golden();
  const auto g = critical_value(System::gauss(), Potential::log_gauss(2.0), 3);
  CHECK(std::abs(g.m - 2.0 * std::log(b)) < 1e-12);
  CHECK(g.orbit.points[0] == doctest::Approx(b));
}

TEST_CASE("critical value shifts with constants, argmax does not") {
  const System md = System::minus_doubling();
  const Potential A = Potential::polynomial({0.1, -0.7, 0.4, 0.9});
  const auto base = critical_value(md, A, 8);
  for (double k : {-3.0, 0.5, 12.0}) {
    const auto s = critical_value(md, A.shifted(k), 8);
    CHECK(s.m == doctest::Approx(base.m + k).epsilon(1e-12));
    CHECK(s.orbit.points == base.orbit.points);
  }
}

TEST_CASE("lax_oleinik_step examples") {
  const System md = System::minus_doubling();
  const GridFunction zero(GridLayout::Nodes, 96, 0.0);
  const auto z = lax_oleinik_step(md, Potential::zero(), 0.0, zero);
  CHECK(z.values().abs().maxCoeff() == 0.0);

  const Potential A = Potential::polynomial({0.2, -1, 0.5});
  const GridFunction k(GridLayout::Nodes, 96, 1.5);
  const auto out = lax_oleinik_step(md, A, 0.3, k);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    double best = -1e300;
    for (const auto& br : md.branches()) best = std::max(best, A(br(out.point(i))) - 0.3);
    CHECK(out[i] == doctest::Approx(1.5 + best).epsilon(1e-14));
  }

  // the closed-form subaction of -(x-1)^2 is a fixed point
  const Preset p = preset("quad-dirac");
  const auto Vc = GridFunction::sample(GridLayout::Nodes, 6144, p.V_closed);
  const auto next = lax_oleinik_step(md, p.A, -1.0 / 9.0, Vc);
  CHECK(sup_distance(next, Vc) < 1e-8);
}

TEST_CASE("lax_oleinik_step is nonexpansive") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const System md = System::minus_doubling();
  const Potential A = Potential::polynomial({-0.25, 1, -1});
  for (int t = 0; t < 20; ++t) {
    GridFunction a(GridLayout::Nodes, 128), b(GridLayout::Nodes, 128);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a.values()(i) = u(rng);
      b.values()(i) = u(rng);
    }
    const double before = sup_distance(a, b);
    const double after = sup_distance(lax_oleinik_step(md, A, 0.0, a), lax_oleinik_step(md, A, 0.0, b));
    CHECK(after <= before + 1e-15);
  }
}

TEST_CASE("calibrated_subaction closed forms") {
  for (const char* name : {"quad-dirac", "quad-period2"}) {
    const Preset p = preset(name);
    const auto r = calibrated_subaction(p.system, p.A);
    CHECK(r.calibrated);
    CHECK(sup_error(r.V, p.V_closed) < 1e-6);
    CHECK(r.subaction_gap <= 1e-8);
    CHECK(r.calibration_gap <= 1e-8);
    CHECK(r.V.values().maxCoeff() == 0.0);
  }
  const Preset g = preset("gauss-golden");
  SubactionOptions o;
  o.max_period = 3;
  const auto r = calibrated_subaction(g.system, g.A, o);
  CHECK(sup_error(r.V, g.V_closed, 0.05) < 1e-5);
  CHECK(r.calibrated);
}

TEST_CASE("calibrated_subaction reports non-convergence") {
  SubactionOptions o;
  o.n_grid = 96;
  o.max_iter = 3;
  CHECK_THROWS_AS(calibrated_subaction(System::minus_doubling(), Potential::polynomial({-1, 2, -1}), o),
                  NonConvergence);
}

TEST_CASE("deviation_I examples") {
  const System md = System::minus_doubling();
  const Preset p = preset("quad-dirac");
  const double m = -1.0 / 9.0;
  CHECK(deviation_I(md, p.A, p.V_closed, m, 2.0 / 3.0) == doctest::Approx(0.0));
  CHECK(std::isinf(deviation_I(md, p.A, p.V_closed, m, 0.0)));

  auto zero = [](double) { return 0.0; };
  for (double x : {0.0, 0.1, 0.37, 0.9}) CHECK(deviation_I(md, Potential::zero(), zero, 0.0, x) == 0.0);

  // a preimage of the support: R vanishes after one step
  const double pre = md.branch(0)(2.0 / 3.0);
  const double I = deviation_I(md, p.A, p.V_closed, m, pre);
  CHECK(std::isfinite(I));
  CHECK(I >= 0.0);
}

TEST_CASE("R is nonnegative and I nondecreasing in n_terms") {
  const System md = System::minus_doubling();
  const Preset p = preset("quad-period2");
  const double m = -1.0 / 36.0;
  for (int k = 0; k <= 200; ++k) {
    const double x = k / 200.0;
    const double r = p.V_closed(apply_map(md, x)) - p.V_closed(x) - p.A(x) + m;
    CHECK(r >= -1e-8);
  }
  // finite values on backward images of the support
  for (double s : {1.0 / 3.0, 2.0 / 3.0}) {
    double prev = -1.0;
    const double x = md.branch(1)(md.branch(0)(s));
    for (int n : {1, 2, 3, 5, 50}) {
      DeviationOptions o;
      o.n_terms = n;
      o.cap = 1e6;
      const double I = deviation_I(md, p.A, p.V_closed, m, x, o);
      if (std::isfinite(I)) {
        CHECK(I >= prev - 1e-12);
        prev = I;
      }
    }
  }
}

TEST_CASE("potentials discontinuous on the circle are rejected") {
  // x^2: orbits hugging 0 and 1 alternately push the periodic values up to
  // (A(0) + A(1))/2 = 1/2 without reaching it
  const Potential x2 = Potential::polynomial({0, 0, 1});
  CHECK_THROWS_AS(calibrated_subaction(System::minus_doubling(), x2), std::invalid_argument);
  double prev = 0.0;
  for (int p : {2, 4, 6, 8}) {
    const double m = critical_value(System::minus_doubling(), x2, p).m;
    CHECK(m >= prev);
    CHECK(m < 0.5);
    prev = m;
  }
  CHECK(prev > 4.0 / 9.0);
}
