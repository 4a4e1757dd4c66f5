#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hypocalc/polyfield.hpp"

using namespace hypocalc;

namespace {

PolyVectorField pf(const std::string& expr, int dim) { return parse_field(expr, dim); }

std::vector<Rational> qpoint(std::initializer_list<long> xs) {
  std::vector<Rational> p;
  for (long x : xs) p.emplace_back(x);
  return p;
}

PolyVectorField random_field(std::mt19937_64& rng, int dim, int deg) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  PolyVectorField f(dim);
  std::vector<Exponents> monos;
  Exponents cur(dim, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == dim) {
      monos.push_back(cur);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      cur[var] = d;
      rec(var + 1, left - d);
    }
    cur[var] = 0;
  };
  rec(0, deg);
  for (int c = 0; c < dim; ++c)
    for (const auto& e : monos)
      if (coeff(rng) > 1)  // sparse
        f.components[c].add_term(e, Rational(coeff(rng)));
  return f;
}

}  // namespace

TEST_CASE("bracket matches the paper's convention [dx, x dy] = dy") {
  auto X = pf("dx", 2);
  auto Y = pf("x*dy", 2);
  CHECK(bracket(X, Y) == pf("dy", 2));
}

TEST_CASE("bracket antisymmetry on equal arguments") {
  auto X = pf("x^2*dx + y*dy", 2);
  CHECK(bracket(X, X).is_zero());
}

TEST_CASE("bracket of x^2 dx with dx") {
  // [x^2 dx, dx] = -2x dx by the defining formula
  auto X = pf("x^2*dx", 1);
  auto Y = pf("dx", 1);
  CHECK(bracket(X, Y) == pf("-2*x*dx", 1));
}

TEST_CASE("bracket rejects dimension mismatch") {
  CHECK_THROWS_AS(bracket(pf("dx", 1), pf("dx", 2)), std::invalid_argument);
}

TEST_CASE("Jacobi identity holds exactly for random cubic fields") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    int dim = 1 + static_cast<int>(rng() % 3);
    auto X = random_field(rng, dim, 3);
    auto Y = random_field(rng, dim, 3);
    auto Z = random_field(rng, dim, 3);
    auto sum = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) +
               bracket(Z, bracket(X, Y));
    CHECK(sum.is_zero());
  }
}

TEST_CASE("bracket bilinearity over random samples") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto X = random_field(rng, 2, 2);
    auto Y = random_field(rng, 2, 2);
    auto Z = random_field(rng, 2, 2);
    Rational a(3, 2), b(-5, 7);
    auto lhs = bracket(a * X + b * Y, Z);
    auto rhs = a * bracket(X, Z) + b * bracket(Y, Z);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("evaluate") {
  auto X = pf("x*dy", 2);
  CHECK(evaluate(X, qpoint({0, 5})) == qpoint({0, 0}));
  auto v = evaluate(X, qpoint({2, 0}));
  CHECK(v[0] == 0);
  CHECK(v[1] == 2);
  auto C = pf("dx", 3);
  auto w = evaluate(C, qpoint({9, 9, 9}));
  CHECK(w[0] == 1);
  CHECK(w[1] == 0);
  CHECK(w[2] == 0);
}

TEST_CASE("flow of the zero field is the identity") {
  PolyVectorField zero(2);
  std::vector<double> p{0.3, -0.7};
  auto q = flow_time_one(zero, p);
  CHECK(q == p);
}

TEST_CASE("flow of a constant field translates") {
  auto X = pf("dx", 2);
  auto q = flow_time_one(X, std::vector<double>{0, 0});
  CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("flow of the linear field x dx reaches e") {
  auto X = pf("x*dx", 1);
  FlowOptions opts;
  opts.tol = 1e-12;
  auto q = flow_time_one(X, std::vector<double>{1.0}, opts);
  CHECK(std::abs(q[0] - std::exp(1.0)) < 1e-9);
}

TEST_CASE("flow divergence guard trips") {
  // x' = 1 + x^2 from x(0) = 1 blows up at pi/4 < 1
  auto X = pf("1*dx + x^2*dx", 1);
  FlowOptions opts;
  opts.divergence_bound = 1e6;
  CHECK_THROWS_AS(flow_time_one(X, std::vector<double>{1.0}, opts), FlowEscapedError);
}

TEST_CASE("flow composition in the scalar reparametrization") {
  auto X = pf("x^2*dx - y*dy + x*dy", 2);
  FlowOptions opts;
  opts.tol = 1e-12;
  double s = 0.3, t = 0.4;
  auto a = flow_time_one(rat_from_double(t) * X, std::vector<double>{0.2, 0.1}, opts);
  auto b = flow_time_one(rat_from_double(s) * X, a, opts);
  auto c = flow_time_one(rat_from_double(s + t) * X, std::vector<double>{0.2, 0.1}, opts);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(b[i] - c[i]) < 10 * opts.tol * 100);
}

TEST_CASE("jets") {
  auto X = pf("x^2*dx", 1);
  auto p0 = qpoint({0});
  CHECK(jet_at(X, p0, 1).components[0].is_zero());
  auto j2 = jet_at(X, p0, 2);
  CHECK(j2.components[0] == parse_poly("x^2", 1));

  // recentring at p = 1: x^2 -> (1+u)^2
  auto Y = pf("x*dx", 1);
  auto j = jet_at(Y, qpoint({1}), 1);
  CHECK(j.components[0] == parse_poly("1 + x", 1));
}

TEST_CASE("jet of bracket equals bracket of jets truncated (chain rule)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto X = random_field(rng, 2, 3);
    auto Y = random_field(rng, 2, 3);
    auto p = qpoint({1, -2});
    int K = 2;
    auto jb = jet_at(bracket(X, Y), p, K);
    // bracket on (K+1)-jets then truncate
    auto jx = jet_at(X, p, K + 1);
    auto jy = jet_at(Y, p, K + 1);
    PolyVectorField fx(2), fy(2);
    fx.components = jx.components;
    fy.components = jy.components;
    auto jj = bracket(fx, fy);
    for (int c = 0; c < 2; ++c)
      CHECK(jj.components[c].truncate_degree(K) == jb.components[c]);
  }
}

TEST_CASE("parser round trip is bit exact") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    int dim = 1 + static_cast<int>(rng() % 4);
    auto X = random_field(rng, dim, 3);
    CHECK(parse_field(to_string(X), dim) == X);
  }
}

TEST_CASE("parser accepts aliases and rationals") {
  auto X = parse_field("1/2*x^2*dx - 3*y*dy", 2);
  CHECK(X.components[0] == parse_poly("x^2", 2) * Rational(1, 2));
  CHECK(X.components[1] == -(parse_poly("y", 2) * Rational(3)));
  CHECK(parse_field("d/dx1", 2) == parse_field("dx", 2));
  CHECK(parse_field("0", 2).is_zero());
}
