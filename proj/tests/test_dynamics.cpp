#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ergo/dynamics.hpp"

using namespace ergo;

TEST_CASE("lex_compare") {
  CHECK(lex_compare({0, 1, 1}, {1, 0, 0}) == Ordering::Less);
  CHECK(lex_compare({1, 0, 1}, {1, 0, 1}) == Ordering::Equal);
  CHECK(lex_compare({1, 0, 0}, {1, 0, 1}) == Ordering::Less);
  CHECK(lex_compare({1, 1, 0}, {1, 0, 1}) == Ordering::Greater);
  CHECK_THROWS_AS(lex_compare({1, 0}, {1, 0, 1}), DimensionMismatch);
}

TEST_CASE("lex order agrees with the dyadic embedding on depth-20 words") {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution bit(0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::uint8_t> a(20), b(20);
    for (auto& s : a) s = bit(rng);
    for (auto& s : b) s = bit(rng);
    if (a == b) continue;
    const SymbolWord wa(a), wb(b);
    const bool less = wa.to_real() < wb.to_real();
    CHECK((lex_compare(wa, wb) == Ordering::Less) == less);
  }
}

TEST_CASE("SymbolWord validation and embedding") {
  CHECK_THROWS(SymbolWord(std::vector<std::uint8_t>{}));
  CHECK_THROWS(SymbolWord({0, 2}));
  const SymbolWord w = SymbolWord::from_real(0.625, 8);
  CHECK(w[0] == 1);
  CHECK(w[1] == 0);
  CHECK(w[2] == 1);
  CHECK(w.to_real() == 0.625);
  CHECK(w.to_real() < 1.0);
}

TEST_CASE("apply_map examples") {
  CHECK(apply_map(System::doubling(), 0.25) == doctest::Approx(0.5));
  CHECK(apply_map(System::minus_doubling(), 1.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const double b = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(apply_map(System::gauss(), b) == doctest::Approx(b).epsilon(1e-14));
  const SymbolWord shifted = apply_map(System::full_shift(), SymbolWord{1, 0, 1, 1});
  CHECK(shifted == SymbolWord{0, 1, 1, 0});
}

TEST_CASE("inverse_branches examples") {
  auto md = inverse_branches(System::minus_doubling(), 1.0 / 3.0);
  REQUIRE(md.size() == 2);
  CHECK(md[0].branch == 0);
  CHECK(md[0].point == doctest::Approx(1.0 / 3.0));
  CHECK(md[1].branch == 1);
  CHECK(md[1].point == doctest::Approx(5.0 / 6.0));

  auto d = inverse_branches(System::doubling(), 0.0);
  CHECK(d[0].point == 0.0);
  CHECK(d[1].point == 0.5);

  auto g = inverse_branches(System::gauss(3), 0.5);
  REQUIRE(g.size() == 3);
  CHECK(g[0].branch == 1);
  CHECK(g[0].point == doctest::Approx(2.0 / 3.0));
  CHECK(g[1].point == doctest::Approx(0.4));
  CHECK(g[2].point == doctest::Approx(2.0 / 7.0));
}

TEST_CASE("inverse branches invert the map on a grid") {
  for (const System& sys : {System::doubling(), System::minus_doubling(), System::gauss()}) {
    for (int k = 1; k < 200; ++k) {
      const double x = k / 200.0;
      for (const auto& pre : inverse_branches(sys, x)) CHECK(std::abs(apply_map(sys, pre.point) - x) <= 1e-12);
    }
  }
}

TEST_CASE("tau_push examples") {
  const SymbolWord y{1, 0, 0, 0}, x{0, 1, 0, 0};
  CHECK(tau_push(y, x) == SymbolWord{1, 0, 1, 0});
  const System md = System::minus_doubling();
  CHECK(tau_push(md, 0.2, 1.0 / 3.0) == doctest::Approx(1.0 / 3.0));
  CHECK(tau_push(md, 0.9, 0.0) == 1.0);
}

TEST_CASE("tau_push followed by apply_map is the identity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const System& sys : {System::doubling(), System::minus_doubling()}) {
    for (int k = 0; k < 500; ++k) {
      const double x = u(rng), y = u(rng);
      const double z = tau_push(sys, y, x);
      const double back = apply_map(sys, z);
      // 0 and 1 are identified on the circle
      CHECK(std::min(std::abs(back - x), 1.0 - std::abs(back - x)) <= 1e-12);
    }
  }
  std::bernoulli_distribution bit(0.5);
  for (int k = 0; k < 200; ++k) {
    std::vector<std::uint8_t> a(24), b(24);
    for (auto& s : a) s = bit(rng);
    for (auto& s : b) s = bit(rng);
    const SymbolWord x(a), y(b);
    const SymbolWord z = tau_push(y, x);
    // shifting drops the pushed symbol; agreement up to the truncated tail
    const SymbolWord back = apply_map(System::full_shift(), z);
    for (int i = 0; i < 22; ++i) CHECK(back[i] == x[i]);
  }
}

TEST_CASE("dual_shift inverts the selected branch") {
  for (const System& sys : {System::doubling(), System::minus_doubling(), System::gauss()}) {
    for (int k = 0; k <= 100; ++k) {
      const double y = sys.kind == SystemKind::GaussMap ? (k + 1) / 101.0 : k / 100.0;
      const double ys = dual_shift(sys, y);
      CHECK(sys.branch(leading_symbol(sys, y))(ys) == doctest::Approx(y).epsilon(1e-13));
    }
  }
}

TEST_CASE("extension maps") {
  const System md = System::minus_doubling();
  const ExtensionPoint fixed{1.0 / 3.0, 1.0 / 3.0};
  const ExtensionPoint b = extension_backward(md, fixed);
  CHECK(b.x == doctest::Approx(1.0 / 3.0));
  CHECK(b.y == doctest::Approx(1.0 / 3.0));

  const WordExtensionPoint w{SymbolWord{1, 1, 0, 0}, SymbolWord{0, 1, 0, 0}};
  const WordExtensionPoint wb = extension_backward(w);
  CHECK(wb.x == SymbolWord{0, 1, 1, 0});
  CHECK(wb.y == SymbolWord{1, 0, 0, 0});

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const System& sys : {System::doubling(), md}) {
    for (int k = 0; k < 300; ++k) {
      const ExtensionPoint p{u(rng), u(rng)};
      const ExtensionPoint q = extension_forward(sys, extension_backward(sys, p));
      CHECK(std::abs(q.x - p.x) <= std::ldexp(1.0, -24));
      CHECK(std::abs(q.y - p.y) <= std::ldexp(1.0, -24));
    }
  }
}

TEST_CASE("periodic orbits of -2x mod 1") {
  const System md = System::minus_doubling();
  const auto p1 = periodic_orbits(md, 1);
  REQUIRE(p1.size() == 3);
  CHECK(p1[0].points[0] == 0.0);
  CHECK(p1[1].points[0] == doctest::Approx(1.0 / 3.0));
  CHECK(p1[2].points[0] == doctest::Approx(2.0 / 3.0));

  const auto p2 = periodic_orbits(md, 2);
  CHECK(p2.size() == 3);  // (-2)^2 - 1 = 3 points, all fixed

  const auto p3 = periodic_orbits(md, 3);
  REQUIRE(p3.size() == 5);
  CHECK(p3[3].points[0] == doctest::Approx(1.0 / 9.0));
  CHECK(p3[3].points[1] == doctest::Approx(7.0 / 9.0));
  CHECK(p3[3].points[2] == doctest::Approx(4.0 / 9.0));

  CHECK_THROWS(periodic_orbits(md, 0));
  CHECK_THROWS(periodic_orbits(md, kMaxPeriodCap + 1));
}

TEST_CASE("periodic orbits are closed, distinct and minimal") {
  for (const System& sys : {System::doubling(), System::minus_doubling(), System::gauss(6), System::full_shift()}) {
    const int maxp = sys.kind == SystemKind::GaussMap ? 4 : 8;
    const auto orbits = periodic_orbits(sys, maxp);
    std::vector<double> all;
    for (const auto& o : orbits) {
      CHECK(o.period() >= 1);
      CHECK(o.period() <= maxp);
      for (int i = 0; i < o.period(); ++i) {
        const double x = o.points[static_cast<std::size_t>(i)];
        const double nx = o.points[static_cast<std::size_t>((i + 1) % o.period())];
        if (sys.kind == SystemKind::FullShift2) {
          const auto& w = o.words[static_cast<std::size_t>(i)];
          const auto shifted = apply_map(sys, w);
          const auto& next = o.words[static_cast<std::size_t>((i + 1) % o.period())];
          for (int k = 0; k + 1 < w.depth(); ++k) CHECK(shifted[k] == next[k]);
        } else {
          CHECK(std::abs(apply_map(sys, x) - nx) <= 1e-9);
        }
        all.push_back(x);
      }
    }
    std::sort(all.begin(), all.end());
    for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k] - all[k - 1] > 1e-13);
  }
  const auto fs = periodic_orbits(System::full_shift(), 1);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].words[0] == SymbolWord::periodic(std::vector<int>{0}));
  CHECK(fs[1].words[0] == SymbolWord::periodic(std::vector<int>{1}));
}

TEST_CASE("orbit counts match the number of primitive necklaces") {
  // binary necklaces of exact length p: 2, 1, 2, 3, 6, 9
  const auto orbits = periodic_orbits(System::doubling(), 6);
  std::vector<int> count(7, 0);
  for (const auto& o : orbits) ++count[static_cast<std::size_t>(o.period())];
  // x -> 2x mod 1 on [0,1) has 2^p - 1 points of period dividing p
  CHECK(count[1] == 1);
  CHECK(count[2] == 1);
  CHECK(count[3] == 2);
  CHECK(count[4] == 3);
  CHECK(count[5] == 6);
  CHECK(count[6] == 9);
}

TEST_CASE("Gauss golden mean is the first fixed point") {
  const auto orbits = periodic_orbits(System::gauss(), 1);
  REQUIRE(orbits.size() == 30);
  const double b = (std::sqrt(5.0) - 1.0) / 2.0;
  bool found = false;
  for (const auto& o : orbits)
    if (std::abs(o.points[0] - b) < 1e-14) found = true;
  CHECK(found);
  CHECK_THROWS(periodic_orbits(System::gauss(), 5));
}

TEST_CASE("backward_images") {
  const System md = System::minus_doubling();
  const auto b = backward_images(md, {2.0 / 3.0}, 2);
  // 2/3 is fixed by tau_1, so depth 1 adds only 1/6
  REQUIRE(b.size() == 4);
  CHECK(b[0] == 2.0 / 3.0);
  CHECK(b[1] == doctest::Approx(1.0 / 6.0));
  for (double x : b) {
    double y = x;
    for (int k = 0; k < 2 && std::abs(y - 2.0 / 3.0) > 1e-12; ++k) y = apply_map(md, y);
    CHECK(y == doctest::Approx(2.0 / 3.0));
  }
  CHECK(backward_images(System::gauss(4), {0.5}, 1).size() == 5);
  CHECK_THROWS(backward_images(md, {0.1}, -1));
}
