#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hypocalc/bchflow.hpp"

using namespace hypocalc;

namespace {

FormalSeriesField series(int dim, std::vector<std::pair<int, std::string>> terms, int order) {
  FormalSeriesField f(dim, order);
  for (auto& [deg, expr] : terms) f.coeffs[deg - 1] = parse_field(expr, dim);
  return f;
}

GradedLieBasis heisenberg_basis() {
  GradedLieAlgebra g(3, {1, 2, 3}, 3);
  g.set_bracket(0, 1, {{2, Rational(1)}});
  g.validate();
  GradedLieBasis basis{std::move(g),
                       {parse_field("dx", 2), parse_field("x*dy", 2), parse_field("dy", 2)}};
  basis.verify();
  return basis;
}

}  // namespace

TEST_CASE("bch_series with zero second argument truncates the first") {
  auto X = series(2, {{1, "dx"}, {2, "x*dy"}}, 3);
  FormalSeriesField zero(2, 3);
  auto Z = bch_series(X, zero, 2);
  CHECK(Z.coeffs[0] == parse_field("dx", 2));
  CHECK(Z.coeffs[1] == parse_field("x*dy", 2));
}

TEST_CASE("bch_series quadratic term for the worked pair") {
  // X = t dx, Y = t x dy, n = 2: Z = t dx + t x dy - 1/2 t^2 dy
  auto X = series(2, {{1, "dx"}}, 2);
  auto Y = series(2, {{1, "x*dy"}}, 2);
  auto Z = bch_series(X, Y, 2);
  CHECK(Z.coeffs[0] == parse_field("dx + x*dy", 2));
  CHECK(Z.coeffs[1] == parse_field("-1/2*dy", 2));
}

TEST_CASE("bch_series of commuting inputs is the sum") {
  auto X = series(2, {{1, "dx"}}, 3);
  auto Y = series(2, {{2, "dy"}, {3, "dx"}}, 3);
  auto Z = bch_series(X, Y, 3);
  CHECK(Z.coeffs[0] == parse_field("dx", 2));
  CHECK(Z.coeffs[1] == parse_field("dy", 2));
  CHECK(Z.coeffs[2] == parse_field("dx", 2));
}

TEST_CASE("flow order test: commuting pair sits at machine floor") {
  auto X = series(2, {{1, "dx"}}, 2);
  auto Y = series(2, {{1, "dy"}}, 2);
  auto fit = flow_order_test(X, Y, std::vector<double>{0.1, -0.2}, 2);
  CHECK(fit.exactly_zero);
}

TEST_CASE("flow order test: worked pair agrees exactly at n = 2") {
  // exp(t dx) after exp(t x dy) sends (x,y) to (x+t, y+tx); the n = 2 BCH
  // truncation t dx + t x dy - t^2/2 dy integrates to the same point, and all
  // higher brackets vanish, so the error sits at the machine floor.
  auto X = series(2, {{1, "dx"}}, 2);
  auto Y = series(2, {{1, "x*dy"}}, 2);
  auto fit = flow_order_test(X, Y, std::vector<double>{0.0, 0.0}, 2);
  CHECK(fit.exactly_zero);
}

TEST_CASE("flow order test: mixed-degree pair on the line at n = 3") {
  // the t^4 bracket corrections vanish for this pair, so the error decays at
  // fifth order; a coarser grid keeps it above the floor
  auto X = series(1, {{1, "x^2*dx"}}, 3);
  auto Y = series(1, {{2, "x*dx"}}, 3);
  OrderTestOptions opts;
  for (int k = 1; k <= 6; ++k) opts.t_grid.push_back(std::pow(2.0, -k));
  auto fit = flow_order_test(X, Y, std::vector<double>{1.0}, 3, opts);
  REQUIRE_FALSE(fit.inconclusive);
  CHECK(fit.slope >= 3.8);
}

TEST_CASE("flow order suite: five non-commuting pairs at n = 1, 2, 3") {
  struct Case {
    FormalSeriesField X, Y;
    std::vector<double> x0;
  };
  std::vector<Case> suite;
  suite.push_back({series(1, {{1, "x^2*dx"}}, 3), series(1, {{1, "dx"}}, 3), {0.5}});
  suite.push_back({series(2, {{1, "dx + x*dy"}}, 3),
                   series(2, {{1, "dy"}, {2, "x*dx"}}, 3), {0.6, -0.3}});
  suite.push_back({series(2, {{1, "y*dx"}}, 3), series(2, {{1, "x*dy"}}, 3), {0.7, 0.5}});
  suite.push_back({series(2, {{1, "dx + y^2*dy"}}, 3),
                   series(2, {{1, "dy + x^2*dx"}}, 3), {0.3, 0.4}});
  suite.push_back({series(2, {{1, "dx + x*y*dy"}}, 3),
                   series(2, {{1, "dy + x*dx"}}, 3), {0.3, 0.5}});

  for (int n = 1; n <= 3; ++n) {
    for (auto& c : suite) {
      auto fit = flow_order_test(c.X, c.Y, c.x0, n);
      REQUIRE_FALSE(fit.inconclusive);
      REQUIRE_FALSE(fit.exactly_zero);
      CHECK(fit.slope >= n + 0.8);
    }
  }
}

TEST_CASE("graded Lie basis verification rejects wrong structure constants") {
  GradedLieAlgebra g(3, {1, 2, 3}, 3);
  g.set_bracket(0, 1, {{2, Rational(2)}});  // should be 1 for these fields
  g.validate();
  GradedLieBasis basis{std::move(g),
                       {parse_field("dx", 2), parse_field("x*dy", 2), parse_field("dy", 2)}};
  CHECK_THROWS_AS(basis.verify(), std::logic_error);
}

TEST_CASE("local_inverse_k at the diagonal returns the seed") {
  auto basis = heisenberg_basis();
  std::vector<double> x{0.2, -0.3};
  std::vector<double> v0(3, 0.0);
  auto v = local_inverse_k(basis, v0, x, x);
  for (double c : v) CHECK(std::abs(c) < 1e-10);
}

TEST_CASE("local_inverse_k round trips random small displacements") {
  auto basis = heisenberg_basis();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(-0.2, 0.2);
  FlowOptions fopts;
  fopts.tol = 1e-13;
  int done = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x{unit(rng), unit(rng)};
    std::vector<double> v{unit(rng), unit(rng), unit(rng)};
    auto y = flow_time_one(basis.natural(v), x, fopts);
    auto w = local_inverse_k(basis, v, y, x);
    auto y2 = flow_time_one(basis.natural(w), x, fopts);
    double resid = std::hypot(y2[0] - y[0], y2[1] - y[1]);
    CHECK(resid < 1e-10);
    // property (c): seeding at the producing v returns v
    for (int i = 0; i < 3; ++i) CHECK(std::abs(w[i] - v[i]) < 1e-7);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("local_inverse_k moves along a generator direction") {
  auto basis = heisenberg_basis();
  std::vector<double> x{0.1, 0.1};
  double eps = 0.05;
  auto y = x;
  y[0] += eps;  // displacement along dx
  std::vector<double> v0(3, 0.0);
  auto v = local_inverse_k(basis, v0, y, x);
  CHECK(std::abs(v[0] - eps) < 1e-8);
  auto y2 = flow_time_one(basis.natural(v), x);
  CHECK(std::hypot(y2[0] - y[0], y2[1] - y[1]) < 1e-10);
}

TEST_CASE("phi_map at t = 0 is the group law") {
  auto basis = heisenberg_basis();
  std::vector<double> Y{0.3, -0.2, 0.1}, X{-0.1, 0.4, 0.2}, x{0.0, 0.0};
  auto out = phi_map(basis, Y, X, x, 0.0);
  auto expected = bch(basis.algebra, Y, X);
  for (int i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("phi_map with zero first argument is the identity in the second") {
  auto basis = heisenberg_basis();
  std::vector<double> zero(3, 0.0), X{0.2, -0.1, 0.3}, x{0.1, -0.2};
  for (double t : {0.5, 0.25, 0.1}) {
    auto out = phi_map(basis, zero, X, x, t);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(out[i] - X[i]) < 1e-8);
    auto out2 = phi_map(basis, X, zero, x, t);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(out2[i] - X[i]) < 1e-8);
  }
}

TEST_CASE("phi_map satisfies the evaluation identity") {
  auto basis = heisenberg_basis();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(-0.3, 0.3);
  FlowOptions fopts;
  fopts.tol = 1e-13;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> Y{unit(rng), unit(rng), unit(rng)};
    std::vector<double> X{unit(rng), unit(rng), unit(rng)};
    std::vector<double> x{unit(rng), unit(rng)};
    double t = 0.1 + 0.4 * std::abs(unit(rng));

    auto out = phi_map(basis, Y, X, x, t);
    auto lhs = flow_time_one(basis.natural(dilate(basis.algebra, t, out)), x, fopts);
    auto mid = flow_time_one(basis.natural(dilate(basis.algebra, t, X)), x, fopts);
    auto rhs = flow_time_one(basis.natural(dilate(basis.algebra, t, Y)), mid, fopts);
    CHECK(std::hypot(lhs[0] - rhs[0], lhs[1] - rhs[1]) < 1e-10);
  }
}

TEST_CASE("phi_map equivariance under the scaling action") {
  auto basis = heisenberg_basis();
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unit(-0.25, 0.25);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> Y{unit(rng), unit(rng), unit(rng)};
    std::vector<double> X{unit(rng), unit(rng), unit(rng)};
    std::vector<double> x{unit(rng), unit(rng)};
    double t = 0.2 + 0.3 * std::abs(unit(rng));
    double lambda = 0.5 + std::abs(unit(rng));

    auto lhs = phi_map(basis, dilate(basis.algebra, lambda, Y),
                       dilate(basis.algebra, lambda, X), x, t / lambda);
    auto rhs = dilate(basis.algebra, lambda, phi_map(basis, Y, X, x, t));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-6);
  }
}

TEST_CASE("phi_map converges to the group law as t drops") {
  auto basis = heisenberg_basis();
  std::vector<double> Y{0.2, 0.1, -0.1}, X{-0.15, 0.2, 0.05}, x{0.05, -0.05};
  auto limit = bch(basis.algebra, Y, X);
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    auto out = phi_map(basis, Y, X, x, t);
    double err = 0;
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(out[i] - limit[i]));
    CHECK(err < prev + 1e-12);
    prev = err;
  }
  CHECK(prev < 1e-2);
}
