#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fwg/lp.hpp"

using namespace fwg;
using namespace fwg::lp;

TEST_CASE("standard form: basic optimum") {
  // min -x1 - 2x2 s.t. x1 + x2 + s1 = 4, x1 + 3x2 + s2 = 6; optimum at (3,1).
  Matrix A(2, 4);
  A << 1, 1, 1, 0, 1, 3, 0, 1;
  Vector b = make_vector({4, 6});
  Vector c = make_vector({-1, -2, 0, 0});
  auto r = solve_standard(A, b, c);
  REQUIRE(r.status == Status::optimal);
  CHECK(r.x[0] == doctest::Approx(3.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(-5.0));
}

TEST_CASE("standard form: infeasible") {
  // x1 = 1 and x1 = 2 simultaneously.
  Matrix A(2, 1);
  A << 1, 1;
  Vector b = make_vector({1, 2});
  Vector c = make_vector({0});
  auto r = solve_standard(A, b, c);
  CHECK(r.status == Status::infeasible);
}

TEST_CASE("standard form: unbounded") {
  // min -x1 s.t. x1 - x2 = 0.
  Matrix A(1, 2);
  A << 1, -1;
  Vector b = make_vector({0});
  Vector c = make_vector({-1, 0});
  auto r = solve_standard(A, b, c);
  CHECK(r.status == Status::unbounded);
}

TEST_CASE("standard form: redundant rows survive phase 1") {
  Matrix A(3, 2);
  A << 1, 1, 2, 2, 1, 0;
  Vector b = make_vector({2, 4, 1});
  Vector c = make_vector({1, 1});
  auto r = solve_standard(A, b, c);
  REQUIRE(r.status == Status::optimal);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("standard form: degenerate vertex terminates (Bland)") {
  // A classic degenerate configuration; termination is the point.
  Matrix A(3, 6);
  A << 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1;
  Vector b = make_vector({1, 1, 2});
  Vector c = make_vector({-1, -1, -1, 0, 0, 0});
  auto r = solve_standard(A, b, c);
  REQUIRE(r.status == Status::optimal);
  CHECK(r.objective == doctest::Approx(-2.0));
}

TEST_CASE("model: free variables and mixed rows") {
  // min |x|-style: min t s.t. t >= x - 3, t >= 3 - x, x free, t free.
  Model mdl;
  int x = mdl.add_var(0.0, true);
  int t = mdl.add_var(1.0, true);
  mdl.add_ge({{t, 1.0}, {x, -1.0}}, -3.0);
  mdl.add_ge({{t, 1.0}, {x, 1.0}}, 3.0);
  auto r = mdl.minimize();
  REQUIRE(r.status == Status::optimal);
  CHECK(r.objective == doctest::Approx(0.0));
  CHECK(r.x[x] == doctest::Approx(3.0));
}

TEST_CASE("model: maximize and equality mix") {
  // max x + y s.t. x + 2y <= 4, x - y = 1, x,y >= 0 -> (2,1).
  Model mdl;
  int x = mdl.add_var(1.0);
  int y = mdl.add_var(1.0);
  mdl.add_le({{x, 1.0}, {y, 2.0}}, 4.0);
  mdl.add_eq({{x, 1.0}, {y, -1.0}}, 1.0);
  auto r = mdl.maximize();
  REQUIRE(r.status == Status::optimal);
  CHECK(r.x[x] == doctest::Approx(2.0));
  CHECK(r.x[y] == doctest::Approx(1.0));
}

TEST_CASE("model: random LPs agree with brute-force vertex enumeration") {
  // min c'x over {x in R^2 : A x <= b} with a bounded polygon; the oracle
  // enumerates all constraint-pair intersections and picks the best feasible.
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 6;
    Matrix A(m + 4, 2);
    Vector b(m + 4);
    for (int i = 0; i < m; ++i) {
      A(i, 0) = U(rng);
      A(i, 1) = U(rng);
      b[i] = 1.0 + std::abs(U(rng));
    }
    // Box constraints keep it bounded.
    A.row(m) << 1, 0;
    A.row(m + 1) << -1, 0;
    A.row(m + 2) << 0, 1;
    A.row(m + 3) << 0, -1;
    b[m] = b[m + 1] = b[m + 2] = b[m + 3] = 5.0;
    Vector c = make_vector({U(rng), U(rng)});

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m + 4; ++i)
      for (int j = i + 1; j < m + 4; ++j) {
        Eigen::Matrix2d M;
        M << A(i, 0), A(i, 1), A(j, 0), A(j, 1);
        if (std::abs(M.determinant()) < 1e-9) continue;
        Eigen::Vector2d v = M.inverse() * Eigen::Vector2d(b[i], b[j]);
        bool feas = true;
        for (int k = 0; k < m + 4; ++k)
          if (A.row(k).dot(v) > b[k] + 1e-7) feas = false;
        if (feas) best = std::min(best, c.dot(v));
      }

    Model mdl;
    int x = mdl.add_var(c[0], true);
    int y = mdl.add_var(c[1], true);
    for (int i = 0; i < m + 4; ++i)
      mdl.add_le({{x, A(i, 0)}, {y, A(i, 1)}}, b[i]);
    auto r = mdl.minimize();
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(best).epsilon(1e-6));
  }
}
