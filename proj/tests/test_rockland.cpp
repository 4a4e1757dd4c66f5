#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hypocalc/hermite.hpp"

using namespace hypocalc;

namespace {

// Frozen oracle values for d^4 + y^4, computed beforehand with an independent
// dense Hermite-Galerkin assembly at M = 200 and M = 400 (agreement ~1e-11).
constexpr double kQuarticLambda1 = 1.39672823046213;
constexpr double kQuarticLambda2 = 7.13152876517407;

DiffOp harmonic_oscillator() {
  DiffOp op(1);
  op.add_term({2}, CPoly::constant(1, CRational(Rational(-1))));
  op.add_term({0}, CPoly(MultiPoly::variable(1, 0).pow(2), MultiPoly(1)));
  return op;
}

DiffOp quartic() {
  DiffOp op(1);
  op.add_term({4}, CPoly::constant(1, CRational(Rational(1))));
  op.add_term({0}, CPoly(MultiPoly::variable(1, 0).pow(4), MultiPoly(1)));
  return op;
}

}  // namespace

TEST_CASE("position operator is the exact ladder tridiagonal") {
  DiffOp y(1);
  y.add_term({0}, CPoly(MultiPoly::variable(1, 0), MultiPoly(1)));
  auto tr = discretize(y, 16);
  for (int m = 0; m + 1 < 16; ++m) {
    CHECK(std::abs(tr.matrix(m, m + 1).real() - std::sqrt((m + 1) / 2.0)) < 1e-14);
    CHECK(std::abs(tr.matrix(m + 1, m).real() - std::sqrt((m + 1) / 2.0)) < 1e-14);
  }
  CHECK(tr.hermiticity_defect() < 1e-14);
}

TEST_CASE("derivative operator is antisymmetric in the Hermite basis") {
  DiffOp d(1);
  d.add_term({1}, CPoly::constant(1, CRational(Rational(1))));
  auto tr = discretize(d, 24);
  CHECK((tr.matrix + tr.matrix.transpose()).norm() < 1e-13);
}

TEST_CASE("harmonic oscillator spectrum is the odd integers") {
  auto rep = spectrum_1d(harmonic_oscillator(), 5, 1e-8, 64);
  REQUIRE(rep.eigenvalues.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(rep.eigenvalues[i] - (2 * i + 1)) < 1e-8);
  CHECK(rep.converged);
}

TEST_CASE("harmonic oscillator truncation is Hermitian") {
  auto tr = discretize(harmonic_oscillator(), 50);
  CHECK(tr.hermiticity_defect() < 1e-10);
}

TEST_CASE("identity shift moves the spectrum exactly") {
  auto S = harmonic_oscillator();
  DiffOp shifted = S;
  shifted.add_term({0}, CPoly::constant(1, CRational(Rational(5, 2))));
  auto a = spectrum_1d(S, 4, 1e-8, 48);
  auto b = spectrum_1d(shifted, 4, 1e-8, 48);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(b.eigenvalues[i] - a.eigenvalues[i] - 2.5) < 1e-9);
}

TEST_CASE("quartic spectrum matches the frozen oracle") {
  auto rep = spectrum_1d(quartic(), 2, 1e-6, 128);
  CHECK(rep.converged);
  CHECK(std::abs(rep.eigenvalues[0] - kQuarticLambda1) < 1e-6);
  CHECK(std::abs(rep.eigenvalues[1] - kQuarticLambda2) < 1e-6);
}

TEST_CASE("variational monotonicity of the lowest eigenvalue") {
  auto S = quartic();
  double prev = std::numeric_limits<double>::infinity();
  for (int M : {24, 48, 96, 192}) {
    auto tr = discretize(S, M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(tr.matrix);
    double lo = es.eigenvalues()(0);
    CHECK(lo <= prev + 1e-10);
    prev = lo;
  }
}

TEST_CASE("injectivity of the harmonic oscillator with s_min = 1") {
  auto rep = injectivity_test(harmonic_oscillator(), {64, 128, 256}, 0.5);
  CHECK(rep.verdict == Injectivity::Injective);
  for (double s : rep.s_min) CHECK(std::abs(s - 1.0) < 1e-6);
}

TEST_CASE("shifted quartic loses injectivity at the ground state") {
  auto S = quartic();
  DiffOp shifted = S;
  shifted.add_term({0}, CPoly::constant(1, CRational(rat_from_double(-kQuarticLambda1))));
  auto rep = injectivity_test(shifted, {64, 128, 256}, 1e-4);
  CHECK(rep.verdict == Injectivity::NotInjective);
  CHECK(rep.residual < 1e-4);
}

TEST_CASE("zero operator is not injective") {
  auto rep = injectivity_test(DiffOp::zero(1), {32, 64}, 1e-6);
  CHECK(rep.verdict == Injectivity::NotInjective);
}

TEST_CASE("two-variable discretization handles the 2d oscillator") {
  DiffOp op(2);
  op.add_term({2, 0}, CPoly::constant(2, CRational(Rational(-1))));
  op.add_term({0, 2}, CPoly::constant(2, CRational(Rational(-1))));
  MultiPoly r2 = MultiPoly::variable(2, 0).pow(2) + MultiPoly::variable(2, 1).pow(2);
  op.add_term({0, 0}, CPoly(r2, MultiPoly(2)));
  auto tr = discretize(op, 20);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(tr.matrix);
  // spectrum 2(m+n+1): 2, 4, 4, 6, ...
  CHECK(std::abs(es.eigenvalues()(0) - 2.0) < 1e-8);
  CHECK(std::abs(es.eigenvalues()(1) - 4.0) < 1e-8);
  CHECK(std::abs(es.eigenvalues()(2) - 4.0) < 1e-8);
}

TEST_CASE("truncation guard") {
  DiffOp op(2);
  op.add_term({0, 0}, CPoly::constant(2, CRational(Rational(1))));
  CHECK_THROWS_AS(discretize(op, 100), TruncationGuardError);
}

TEST_CASE("hypoellipticity criterion for k = n = 1") {
  auto at0 = hypoellipticity_verdict(1, 1, 0.0);
  CHECK(at0.maximally_hypoelliptic);
  CHECK(at0.beta_reduction_consistent);

  auto at_l1 = hypoellipticity_verdict(1, 1, kQuarticLambda1);
  CHECK_FALSE(at_l1.maximally_hypoelliptic);
  CHECK(at_l1.offending_index == 0);

  double mid = 0.5 * (kQuarticLambda1 + kQuarticLambda2);
  auto at_mid = hypoellipticity_verdict(1, 1, mid);
  CHECK(at_mid.maximally_hypoelliptic);

  auto imag = hypoellipticity_verdict(1, 1, {1.0, 2.0});
  CHECK(imag.maximally_hypoelliptic);
  CHECK(imag.certificate == "nonreal-shift");
}

TEST_CASE("model spectra scale by beta^{2n} and the verdict survives beta <-> 1/beta") {
  const int k = 1, n = 1;
  auto s1 = spectrum_1d(model_operator(k, n, Rational(1)), 3, 1e-6, 96);
  auto s2 = spectrum_1d(model_operator(k, n, Rational(2)), 3, 1e-6, 96);
  auto shalf = spectrum_1d(model_operator(k, n, Rational(1, 2)), 3, 1e-6, 96);
  const double scale = std::pow(2.0, 2 * n);  // beta^{2n} from the grading
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(s2.eigenvalues[i] - scale * s1.eigenvalues[i]) < 1e-5);
    CHECK(std::abs(shalf.eigenvalues[i] - s1.eigenvalues[i] / scale) < 1e-6);
  }

  // full symbol with the lambda shift: injectivity verdicts agree at beta and 1/beta
  for (double lambda : {0.0, kQuarticLambda1}) {
    auto verdict_at = [&](const Rational& beta) {
      DiffOp op = model_operator(k, n, beta);
      // lambda (-1)^n beta^{2n}
      Rational b2n = beta * beta;
      Rational shift = rat_from_double(lambda) * b2n * Rational(n % 2 == 0 ? 1 : -1);
      op.add_term({0}, CPoly::constant(1, CRational(shift)));
      return injectivity_test(op, {64, 128}, 1e-4).verdict;
    };
    CHECK(verdict_at(Rational(2)) == verdict_at(Rational(1, 2)));
    CHECK(verdict_at(Rational(2)) == verdict_at(Rational(1)));
  }
}
