#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hypocalc/filtration.hpp"
#include "hypocalc/hncone.hpp"

using namespace hypocalc;

namespace {

// Example with cone {xi1 xi3 = xi2^2}: fields x^2 dx, x dx, dx on R,
// weights 1, 2, 3.
PairingMap cone_b() {
  return PairingMap::from_basis(
      {parse_field("x^2*dx", 1), parse_field("x*dx", 1), parse_field("dx", 1)},
      {1, 2, 3}, {0.0});
}

// Example with cone {xi2 xi4 = xi3^2}: dx, x^2 dy, x dy, dy on R^2,
// weights 1, 2, 3, 4.
PairingMap cone_c() {
  return PairingMap::from_basis(
      {parse_field("dx", 2), parse_field("x^2*dy", 2), parse_field("x*dy", 2),
       parse_field("dy", 2)},
      {1, 2, 3, 4}, {0.0, 0.0});
}

// Quartic-monomial example on R^2, weights (1,1,1,1,2,2), cone relations
// xi1^3 = xi2 xi4^2, xi3^3 = xi2^2 xi4, xi_i xi5 >= 0.
PairingMap cone_d() {
  return PairingMap::from_basis(
      {parse_field("x^2*y^4*dx", 2), parse_field("x^6*dx", 2),
       parse_field("x^4*y^2*dx", 2), parse_field("y^6*dx", 2), parse_field("dx", 2),
       parse_field("dy", 2)},
      {1, 1, 1, 1, 2, 2}, {0.0, 0.0});
}

// Flat (non-polynomial) example via numeric callbacks, weights (1,2,3,3);
// cone relation: xi1 xi3 / xi2^2 in [1, 3].
PairingMap cone_e() {
  auto f1 = [](std::span<const double> x, std::span<double> out) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    out[1] = 0;
    out[0] = (r2 < 1e-300) ? 0.0 : (x[0] / std::sqrt(r2) + 2.0) * std::exp(-2.0 / r2);
  };
  auto f2 = [](std::span<const double> x, std::span<double> out) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    out[1] = 0;
    out[0] = (r2 < 1e-300) ? 0.0 : std::exp(-1.0 / r2);
  };
  std::vector<PairingMap::Field> fields;
  fields.push_back({std::nullopt, f1});
  fields.push_back({std::nullopt, f2});
  fields.push_back({parse_field("dx", 2), nullptr});
  fields.push_back({parse_field("dy", 2), nullptr});
  return PairingMap({std::move(fields)}, {1, 2, 3, 3}, {0.0, 0.0});
}

}  // namespace

TEST_CASE("pairing components match the weighted scaling") {
  auto phi = cone_b();
  double x = 0.7, eta = 1.3, t = 0.2;
  auto xi = phi.eval(std::vector<double>{x}, std::vector<double>{eta}, t);
  CHECK(xi[0] == doctest::Approx(x * x * t * eta));
  CHECK(xi[1] == doctest::Approx(x * t * t * eta));
  CHECK(xi[2] == doctest::Approx(t * t * t * eta));
  // image identity xi1 xi3 = xi2^2 holds for every input
  CHECK(std::abs(xi[0] * xi[2] - xi[1] * xi[1]) < 1e-15);
}

TEST_CASE("pairing is linear in eta and zero at eta = 0") {
  auto phi = cone_c();
  std::vector<double> x{0.3, -0.2}, eta{0.0, 0.0};
  auto xi = phi.eval(x, eta, 0.5);
  for (double v : xi) CHECK(v == 0.0);
  std::vector<double> eta2{2.0, -1.0};
  auto a = phi.eval(x, eta2, 0.5);
  std::vector<double> eta3{6.0, -3.0};
  auto b = phi.eval(x, eta3, 0.5);
  for (size_t k = 0; k < a.size(); ++k) CHECK(b[k] == doctest::Approx(3.0 * a[k]));
}

TEST_CASE("pairing homogeneity: Phi(x, eta, lambda t) = dilate_dual(lambda, Phi)") {
  auto phi = cone_c();
  GradedLieAlgebra g(4, {1, 2, 3, 4}, 4);  // weights only; brackets irrelevant here
  std::vector<double> x{0.4, 0.1}, eta{1.7, -0.6};
  double t = 0.3, lambda = 1.9;
  auto a = phi.eval(x, eta, lambda * t);
  auto b = dilate_dual(g, lambda, phi.eval(x, eta, t));
  for (size_t k = 0; k < a.size(); ++k)
    CHECK(std::abs(a[k] - b[k]) <= 1e-12 * std::max(1.0, std::abs(a[k])));
}

TEST_CASE("sampled cone b satisfies its algebraic relation") {
  auto phi = cone_b();
  SampleOptions so;
  so.seed = 11;
  auto sample = sample_cone(phi, 2000, so);
  CHECK(sample.entries.size() >= 50);
  for (const auto& e : sample.entries)
    CHECK(std::abs(e.xi[0] * e.xi[2] - e.xi[1] * e.xi[1]) < 1e-8);
}

TEST_CASE("sampled cone c satisfies xi2 xi4 = xi3^2") {
  auto phi = cone_c();
  SampleOptions so;
  so.seed = 12;
  auto sample = sample_cone(phi, 2000, so);
  CHECK(sample.entries.size() >= 50);
  for (const auto& e : sample.entries)
    CHECK(std::abs(e.xi[1] * e.xi[3] - e.xi[2] * e.xi[2]) < 1e-8);
}

TEST_CASE("sampled cone d satisfies cubic relations and sign constraints") {
  auto phi = cone_d();
  SampleOptions so;
  so.seed = 13;
  auto sample = sample_cone(phi, 2000, so);
  CHECK(sample.entries.size() >= 20);
  for (const auto& e : sample.entries) {
    CHECK(std::abs(std::pow(e.xi[0], 3) - e.xi[1] * e.xi[3] * e.xi[3]) < 1e-8);
    CHECK(std::abs(std::pow(e.xi[2], 3) - e.xi[1] * e.xi[1] * e.xi[3]) < 1e-8);
    for (int i = 0; i < 5; ++i) CHECK(e.xi[i] * e.xi[4] >= -1e-8);
  }
}

TEST_CASE("sampled flat example keeps the ratio in [1,3]") {
  auto phi = cone_e();
  SampleOptions so;
  so.seed = 14;
  so.t_min = 1e-3;
  auto sample = sample_cone(phi, 4000, so);
  int checked = 0;
  for (const auto& e : sample.entries) {
    if (std::abs(e.xi[1]) < 1e-3) continue;
    double lam = (e.xi[0] * e.xi[2]) / (e.xi[1] * e.xi[1]);
    CHECK(lam >= 1.0 - 1e-3);
    CHECK(lam <= 3.0 + 1e-3);
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("stored representatives are reachable from their parameters") {
  auto phi = cone_b();
  SampleOptions so;
  so.seed = 15;
  auto sample = sample_cone(phi, 500, so);
  for (const auto& e : sample.entries) {
    auto xi = phi.eval(e.x, e.eta, e.t);
    for (size_t k = 0; k < xi.size(); ++k) {
      double recon = e.xi[k] * e.gauge;
      CHECK(std::abs(xi[k] - recon) <= 1e-8 * std::max(1.0, std::abs(recon)));
    }
  }
}

TEST_CASE("membership certifies (1,1,1) as in") {
  auto phi = cone_b();
  MembershipOptions mo;
  mo.seed = 21;
  auto v = membership(phi, std::vector<double>{1.0, 1.0, 1.0}, mo);
  CHECK(v.verdict == Membership::In);
  CHECK(v.residual < 1e-6);
  // witness reproduces the target
  auto xi = phi.eval(v.witness_x, v.witness_eta, v.witness_t);
  CHECK(std::abs(xi[0] - 1) < 1e-5);
  CHECK(std::abs(xi[1] - 1) < 1e-5);
  CHECK(std::abs(xi[2] - 1) < 1e-5);
}

TEST_CASE("membership reports (1,0,1) as heuristic out") {
  auto phi = cone_b();
  MembershipOptions mo;
  mo.seed = 22;
  auto v = membership(phi, std::vector<double>{1.0, 0.0, 1.0}, mo);
  CHECK(v.verdict == Membership::Out);
  CHECK(v.heuristic_out);
  CHECK(v.residual > 1e-2);
}

TEST_CASE("membership accepts the zero covector") {
  auto phi = cone_b();
  auto v = membership(phi, std::vector<double>{0.0, 0.0, 0.0});
  CHECK(v.verdict == Membership::In);
  CHECK(v.residual == 0.0);
}

TEST_CASE("membership 'in' verdicts reproduce across seeds") {
  auto phi = cone_b();
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    MembershipOptions mo;
    mo.seed = seed;
    auto v = membership(phi, std::vector<double>{1.0, 1.0, 1.0}, mo);
    CHECK(v.verdict == Membership::In);
    CHECK(v.residual < 1e-6);
    auto w = membership(phi, std::vector<double>{1.0, 0.0, 1.0}, mo);
    CHECK(w.verdict == Membership::Out);
  }
}

TEST_CASE("invariance: dilations, scalars and coadjoint stay in the cone") {
  // nonabelian osculating algebra of example c at the singular line
  WeightedGenerators gen;
  gen.fields = {parse_field("dx", 2), parse_field("x^2*dy", 2)};
  gen.weights = {1, 2};
  gen.depth = 4;
  std::vector<Rational> p{0, 0};
  auto osc = osculating_at(gen, p);
  REQUIRE(osc.algebra.dim() == 4);

  std::vector<PolyVectorField> fields;
  for (const auto& f : osc.basis.fields) fields.push_back(f);
  auto phi = PairingMap::from_basis(fields, osc.basis.weights, {0.0, 0.0});

  SampleOptions so;
  so.seed = 31;
  auto sample = sample_cone(phi, 400, so);
  REQUIRE(sample.entries.size() >= 5);

  MembershipOptions mo;
  mo.seed = 32;
  mo.starts = 48;
  auto rep = invariance_check(phi, sample, osc.algebra, 4, mo);
  CHECK(rep.checked >= 12);
  CHECK(rep.failures == 0);
}
