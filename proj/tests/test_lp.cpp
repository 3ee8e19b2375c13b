#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ergo/lp.hpp"

using namespace ergo;

namespace {

void check_feasible(const lp::Solution& s, const Eigen::VectorXd& supply, const Eigen::VectorXd& demand) {
  CHECK(s.flow.minCoeff() >= -1e-14);
  CHECK((s.flow.rowwise().sum() - supply).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((s.flow.colwise().sum().transpose() - demand).cwiseAbs().maxCoeff() <= 1e-10);
}

void check_dual(const lp::Solution& s, const Eigen::MatrixXd& C) {
  const Eigen::MatrixXd reduced = C - s.u.replicate(1, C.cols()) - s.v.transpose().replicate(C.rows(), 1);
  CHECK(reduced.minCoeff() >= -1e-9);
  for (Eigen::Index i = 0; i < C.rows(); ++i)
    for (Eigen::Index j = 0; j < C.cols(); ++j)
      if (s.flow(i, j) > 1e-12) CHECK(std::abs(reduced(i, j)) <= 1e-9);
}

// min over permutation matrices, exact for uniform square marginals
double assignment_oracle(const Eigen::MatrixXd& C) {
  std::vector<int> p(static_cast<std::size_t>(C.rows()));
  std::iota(p.begin(), p.end(), 0);
  double best = 1e300;
  do {
    double s = 0.0;
    for (Eigen::Index i = 0; i < C.rows(); ++i) s += C(i, p[static_cast<std::size_t>(i)]);
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best / static_cast<double>(C.rows());
}

Eigen::VectorXd random_simplex(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = u(rng);
  return w / w.sum();
}

}  // namespace

TEST_CASE("spanning tree counts") {
  CHECK(lp::spanning_tree_count(1, 5) == 1.0);
  CHECK(lp::spanning_tree_count(2, 2) == 4.0);
  CHECK(lp::spanning_tree_count(3, 3) == 81.0);
  CHECK(lp::spanning_tree_count(2, 3) == 12.0);
}

TEST_CASE("single coupling") {
  Eigen::MatrixXd C(1, 1);
  C << 3.5;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  for (const auto& s : {lp::vertex_enumeration(C, one, one), lp::transportation_simplex(C, one, one)}) {
    CHECK(s.value == 3.5);
    CHECK(s.flow(0, 0) == 1.0);
  }
}

TEST_CASE("2x2 identity versus swap") {
  // -W for the period-2 data: W(1/3,1/3) = -7/27, W(1/3,2/3) = -9/27,
  // W(2/3,1/3) = -12/27, W(2/3,2/3) = -10/27
  Eigen::MatrixXd C(2, 2);
  C << 7.0 / 27, 9.0 / 27, 12.0 / 27, 10.0 / 27;
  const Eigen::VectorXd h = Eigen::VectorXd::Constant(2, 0.5);
  for (const auto& s : {lp::vertex_enumeration(C, h, h), lp::transportation_simplex(C, h, h)}) {
    check_feasible(s, h, h);
    CHECK(s.flow(0, 0) == doctest::Approx(0.5));
    CHECK(s.flow(1, 1) == doctest::Approx(0.5));
    CHECK(s.value == doctest::Approx(17.0 / 54.0));
  }

  // tied vertices: either one, same value
  Eigen::MatrixXd D(2, 2);
  D << 1, 2, 3, 2;
  const auto t = lp::vertex_enumeration(D, h, h);
  CHECK(t.value == doctest::Approx(1.5));
  check_feasible(t, h, h);
}

TEST_CASE("both solvers match the assignment oracle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 8; ++trial) {
      Eigen::MatrixXd C(n, n);
      for (Eigen::Index i = 0; i < C.size(); ++i) C(i) = u(rng);
      const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
      const double ref = assignment_oracle(C);
      const auto s = lp::transportation_simplex(C, w, w);
      check_feasible(s, w, w);
      check_dual(s, C);
      CHECK(s.value == doctest::Approx(ref).epsilon(1e-12));
      if (n <= 4) {
        const auto v = lp::vertex_enumeration(C, w, w);
        check_feasible(v, w, w);
        CHECK(v.value == doctest::Approx(ref).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("simplex agrees with vertex enumeration on random marginals") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 1 + trial % 4, m = 1 + (trial / 4) % 4;
    Eigen::MatrixXd C(n, m);
    for (Eigen::Index i = 0; i < C.size(); ++i) C(i) = u(rng);
    const Eigen::VectorXd a = random_simplex(rng, n), b = random_simplex(rng, m);
    const auto v = lp::vertex_enumeration(C, a, b);
    const auto s = lp::transportation_simplex(C, a, b);
    check_feasible(v, a, b);
    check_feasible(s, a, b);
    check_dual(s, C);
    CHECK(s.value == doctest::Approx(v.value).epsilon(1e-12));
  }
}

TEST_CASE("degenerate instances") {
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(5, 5, 2.0);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(5, 0.2);
  const auto s = lp::transportation_simplex(flat, w, w);
  CHECK(s.value == doctest::Approx(2.0));
  check_feasible(s, w, w);

  // integer data with many ties, larger than the enumeration range
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 3);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd C(12, 9);
    for (Eigen::Index i = 0; i < C.size(); ++i) C(i) = d(rng);
    const Eigen::VectorXd a = Eigen::VectorXd::Constant(12, 3.0), b = Eigen::VectorXd::Constant(9, 4.0);
    const auto r = lp::transportation_simplex(C, a, b);
    check_feasible(r, a, b);
    check_dual(r, C);
  }
}

TEST_CASE("unbalanced input is rejected") {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
  Eigen::VectorXd a(2), b(2);
  a << 0.5, 0.5;
  b << 0.5, 0.6;
  CHECK_THROWS(lp::transportation_simplex(C, a, b));
  CHECK_THROWS(lp::vertex_enumeration(C, a, b));
}
