#ifndef HYPOCALC_HERMITE_HPP
#define HYPOCALC_HERMITE_HPP

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

#include "hypocalc/diffop.hpp"

namespace hypocalc {

/// Finite window of a polynomial-coefficient operator on the span of the
/// first M Hermite functions per variable (tensor grid for q = 2). Entries
/// come from the tridiagonal ladder recursions for y and d/dy; products are
/// taken in a padded space so the retained window is assembly-exact.
struct HermiteTruncation {
  int q = 0;
  int M = 0;
  Eigen::MatrixXcd matrix;

  double hermiticity_defect() const;  // relative, 0 for exactly Hermitian
};

struct TruncationGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// q <= 2 and matrix dimension <= 4096 (dense eigensolver scale).
HermiteTruncation discretize(const DiffOp& S, int M);

struct SpectralReport {
  std::vector<double> eigenvalues;       // lowest L, from the finer truncation
  std::vector<double> eigenvalues_coarse;
  int M = 0;                             // coarse size; fine is 2M
  bool converged = false;                // pairwise agreement within tol
  double max_disagreement = 0;
  double smallest_singular_coarse = 0;
  double smallest_singular_fine = 0;
};

/// Lowest L eigenvalues from truncations M and 2M of a formally symmetric
/// operator; convergence is two-resolution agreement within tol.
SpectralReport spectrum_1d(const DiffOp& S, int L, double tol, int M = 64);

enum class Injectivity { Injective, NotInjective, Inconclusive };

struct InjectivityReport {
  Injectivity verdict = Injectivity::Inconclusive;
  std::vector<int> ladder;
  std::vector<double> s_min;             // smallest singular value per rung
  double residual = 0;                   // ||S v||/||v|| for the near-null vector
  bool evidence_only = true;             // numerical evidence, never a proof
};

InjectivityReport injectivity_test(const DiffOp& S, const std::vector<int>& ladder,
                                   double threshold);

struct HypoellipticityEvidence {
  bool maximally_hypoelliptic = false;
  std::string certificate;               // "spectral-gap", "nonreal-shift", ...
  std::vector<double> spectrum;          // converged eigenvalues of the model
  double distance = 0;                   // dist((-1)^{n+1} lambda, spectrum)
  int offending_index = -1;              // eigenvalue hit when verdict is false
  bool beta_reduction_consistent = false;
};

/// Decision for the weighted family on R^2 (d/dx with weight 1, x^k d/dy with
/// weight n): the operator with shift parameter lambda is maximally
/// hypoelliptic iff (-1)^{n+1} lambda avoids the spectrum of the model
/// (-1)^{n(k+n)} d^{2n(k+n)} + y^{2k(k+n)}. Also confirms the verdict is
/// unchanged across the representation parameters beta = +-1.
HypoellipticityEvidence hypoellipticity_verdict(int k, int n, std::complex<double> lambda,
                                                double tol = 1e-6, int M = 128);

/// The model operator (-1)^{n(k+n)} d^{2n(k+n)} + beta^{2(k+n)} y^{2k(k+n)}
/// as an exact DiffOp (beta rational).
DiffOp model_operator(int k, int n, const Rational& beta);

}  // namespace hypocalc

#endif
