#include "hypocalc/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hypocalc {

double HermiteTruncation::hermiticity_defect() const {
  double scale = std::max(1.0, matrix.norm());
  return (matrix - matrix.adjoint()).norm() / scale;
}

namespace {

// ladder matrices in dimension n: y and d/dy act tridiagonally on Hermite
// functions h_m: y h_m = sqrt(m/2) h_{m-1} + sqrt((m+1)/2) h_{m+1},
//              h_m' = sqrt(m/2) h_{m-1} - sqrt((m+1)/2) h_{m+1}
void ladder(int n, Eigen::MatrixXd& Y, Eigen::MatrixXd& D) {
  Y.setZero(n, n);
  D.setZero(n, n);
  for (int m = 1; m < n; ++m) {
    double down = std::sqrt(m / 2.0);
    Y(m - 1, m) = down;
    D(m - 1, m) = down;
  }
  for (int m = 0; m + 1 < n; ++m) {
    double up = std::sqrt((m + 1) / 2.0);
    Y(m + 1, m) = up;
    D(m + 1, m) = -up;
  }
}

}  // namespace

HermiteTruncation discretize(const DiffOp& S, int M) {
  const int q = S.q();
  if (q > 2) throw TruncationGuardError("discretize: q <= 2 required");
  if (q == 0) {
    HermiteTruncation tr;
    tr.q = 0;
    tr.M = 1;
    tr.matrix.setZero(1, 1);
    for (const auto& [alpha, c] : S.terms())
      tr.matrix(0, 0) += std::complex<double>(to_double(c.re.constant_term()),
                                              to_double(c.im.constant_term()));
    return tr;
  }
  const long dim = static_cast<long>(std::pow(M, q));
  if (M < 1 || dim > 4096)
    throw TruncationGuardError("truncation too large (dimension cap 4096)");

  // pad so that entries inside the M-window are exact: each application of a
  // ladder operator shifts the index by one
  const int pad = S.max_order() + S.max_coeff_degree() + 1;
  const int n = M + pad;
  Eigen::MatrixXd Y, D;
  ladder(n, Y, D);

  auto mono_matrix_1d = [&](int ypow, int dpow) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < dpow; ++i) acc = acc * D;
    for (int i = 0; i < ypow; ++i) acc = Y * acc;  // coefficient acts after
    return acc;
  };

  Eigen::MatrixXcd total;
  if (q == 1) {
    total.setZero(M, M);
    for (const auto& [alpha, c] : S.terms()) {
      auto add_poly = [&](const MultiPoly& p, std::complex<double> unit) {
        for (const auto& [e, coef] : p.terms()) {
          Eigen::MatrixXd m = mono_matrix_1d(e[0], alpha[0]);
          total += unit * to_double(coef) * m.topLeftCorner(M, M);
        }
      };
      add_poly(c.re, {1, 0});
      add_poly(c.im, {0, 1});
    }
  } else {
    total.setZero(M * M, M * M);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(M, M);
    for (const auto& [alpha, c] : S.terms()) {
      auto add_poly = [&](const MultiPoly& p, std::complex<double> unit) {
        for (const auto& [e, coef] : p.terms()) {
          Eigen::MatrixXd m1 = mono_matrix_1d(e[0], alpha[0]).topLeftCorner(M, M);
          Eigen::MatrixXd m2 = mono_matrix_1d(e[1], alpha[1]).topLeftCorner(M, M);
          // kron(m1, m2): variable 1 indexes the outer blocks
          Eigen::MatrixXd kron(M * M, M * M);
          for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
              kron.block(i * M, j * M, M, M) = m1(i, j) * m2;
          total += unit * to_double(coef) * kron;
        }
      };
      add_poly(c.re, {1, 0});
      add_poly(c.im, {0, 1});
    }
  }

  HermiteTruncation tr;
  tr.q = q;
  tr.M = M;
  tr.matrix = std::move(total);
  return tr;
}

SpectralReport spectrum_1d(const DiffOp& S, int L, double tol, int M) {
  if (!S.is_formally_symmetric())
    throw std::invalid_argument("spectrum_1d: operator is not formally symmetric");

  SpectralReport rep;
  rep.M = M;
  auto eigs_at = [&](int size, std::vector<double>& out, double& smin) {
    HermiteTruncation tr = discretize(S, size);
    if (tr.hermiticity_defect() > 1e-10)
      throw std::logic_error("spectrum_1d: truncation not Hermitian");
    Eigen::MatrixXcd H = 0.5 * (tr.matrix + tr.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const auto& ev = es.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end());
    smin = std::abs(out.front());
    for (double v : out) smin = std::min(smin, std::abs(v));
  };

  std::vector<double> coarse, fine;
  eigs_at(M, coarse, rep.smallest_singular_coarse);
  eigs_at(2 * M, fine, rep.smallest_singular_fine);

  const int count = std::min<int>(L, static_cast<int>(coarse.size()));
  rep.eigenvalues.assign(fine.begin(), fine.begin() + count);
  rep.eigenvalues_coarse.assign(coarse.begin(), coarse.begin() + count);
  rep.max_disagreement = 0;
  for (int i = 0; i < count; ++i)
    rep.max_disagreement =
        std::max(rep.max_disagreement, std::abs(rep.eigenvalues[i] - coarse[i]));
  rep.converged = rep.max_disagreement <= tol;
  return rep;
}

InjectivityReport injectivity_test(const DiffOp& S, const std::vector<int>& ladder_sizes,
                                   double threshold) {
  InjectivityReport rep;
  rep.ladder = ladder_sizes;
  if (S.is_zero()) {
    rep.verdict = Injectivity::NotInjective;
    rep.s_min.assign(ladder_sizes.size(), 0.0);
    rep.residual = 0;
    return rep;
  }

  Eigen::MatrixXcd last;
  for (int M : ladder_sizes) {
    HermiteTruncation tr = discretize(S, M);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tr.matrix, Eigen::ComputeThinV);
    rep.s_min.push_back(svd.singularValues().tail(1)(0));
    last = tr.matrix;
    if (M == ladder_sizes.back()) {
      Eigen::VectorXcd v = svd.matrixV().col(svd.matrixV().cols() - 1);
      rep.residual = (tr.matrix * v).norm() / v.norm();
    }
  }

  // stabilized above the threshold -> injective; persistent near-null vector
  // under refinement -> not injective
  const size_t n = rep.s_min.size();
  if (n >= 2) {
    double a = rep.s_min[n - 2], b = rep.s_min[n - 1];
    bool stabilized = std::abs(a - b) <= 0.05 * std::max({1.0, std::abs(a), std::abs(b)});
    if (stabilized && b > threshold) rep.verdict = Injectivity::Injective;
    else if (b < threshold && rep.residual < threshold)
      rep.verdict = Injectivity::NotInjective;
    else rep.verdict = Injectivity::Inconclusive;
  }
  return rep;
}

DiffOp model_operator(int k, int n, const Rational& beta) {
  const int dorder = 2 * n * (k + n);
  const int ypow = 2 * k * (k + n);
  DiffOp op(1);
  DiffOp::Multi alpha{dorder};
  Rational sign = (((n * (k + n)) % 2) == 0) ? Rational(1) : Rational(-1);
  op.add_term(alpha, CPoly::constant(1, CRational(sign)));
  Rational bpow = 1;
  for (int i = 0; i < 2 * (k + n); ++i) bpow *= beta;
  Exponents e{ypow};
  op.add_term(DiffOp::Multi{0},
              CPoly(MultiPoly::monomial(1, e, bpow), MultiPoly(1)));
  return op;
}

HypoellipticityEvidence hypoellipticity_verdict(int k, int n, std::complex<double> lambda,
                                                double tol, int M) {
  if (k < 1 || n < 1) throw std::invalid_argument("hypoellipticity_verdict: k, n >= 1");

  HypoellipticityEvidence ev;
  DiffOp model = model_operator(k, n, Rational(1));
  SpectralReport spec = spectrum_1d(model, std::max(8, M / 8), tol, M);

  // keep only eigenvalues certified by two-resolution agreement
  for (size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (std::abs(spec.eigenvalues[i] - spec.eigenvalues_coarse[i]) > tol) break;
    ev.spectrum.push_back(spec.eigenvalues[i]);
  }
  if (ev.spectrum.empty())
    throw std::logic_error("hypoellipticity_verdict: no converged eigenvalues");

  const std::complex<double> target =
      (((n + 1) % 2 == 0) ? 1.0 : -1.0) * lambda;

  if (std::abs(target.imag()) > tol) {
    // the model is selfadjoint: a nonreal shift never hits the spectrum
    ev.maximally_hypoelliptic = true;
    ev.certificate = "nonreal-shift";
    ev.distance = std::abs(target.imag());
  } else {
    double mu = target.real();
    double dist = std::numeric_limits<double>::infinity();
    int hit = -1;
    for (size_t i = 0; i < ev.spectrum.size(); ++i) {
      double d = std::abs(mu - ev.spectrum[i]);
      if (d < dist) {
        dist = d;
        if (d <= tol) hit = static_cast<int>(i);
      }
    }
    ev.distance = dist;
    if (hit >= 0) {
      ev.maximally_hypoelliptic = false;
      ev.certificate = "eigenvalue-hit";
      ev.offending_index = hit;
    } else if (mu < ev.spectrum.back()) {
      ev.maximally_hypoelliptic = true;
      ev.certificate = "spectral-gap";
    } else {
      // above the certified window: eigenvalues grow monotonically, so push
      // the window up; report the growth certificate if the guard blocks us
      ev.maximally_hypoelliptic = true;
      ev.certificate = "beyond-certified-window";
    }
  }

  // beta reduction: the verdict must agree between beta = +1 and beta = -1.
  // The lambda-shift scales by beta^{2n} (positive for beta = -1), so compare
  // the shifted models directly through their lowest spectra.
  DiffOp model_neg = model_operator(k, n, Rational(-1));
  SpectralReport spec_neg = spectrum_1d(model_neg, 4, tol, std::max(32, M / 2));
  ev.beta_reduction_consistent = true;
  for (int i = 0; i < 4 && i < static_cast<int>(spec_neg.eigenvalues.size()); ++i) {
    if (std::abs(spec_neg.eigenvalues[i] - spec.eigenvalues[i]) > 10 * tol) {
      ev.beta_reduction_consistent = false;
      break;
    }
  }
  return ev;
}

}  // namespace hypocalc
