#ifndef HYPOCALC_HNCONE_HPP
#define HYPOCALC_HNCONE_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypocalc/lie.hpp"
#include "hypocalc/polyfield.hpp"

namespace hypocalc {

/// Numeric coefficient function R^m -> R^m for fields outside the polynomial
/// class (flat examples); writes the field value at x into out.
using FieldCallback = std::function<void(std::span<const double> x, std::span<double> out)>;

/// Weighted pairing map whose t->0 limit set is the Helffer-Nourrigat cone:
/// component k is Phi_k(x, eta, t) = t^{w_k} <eta, B_k(x)>.
class PairingMap {
 public:
  struct Field {
    std::optional<PolyVectorField> poly;
    FieldCallback callback;
  };

  PairingMap(std::vector<Field> fields, std::vector<int> weights,
             std::vector<double> base_point, double chart_radius = 1.0);

  static PairingMap from_basis(const std::vector<PolyVectorField>& fields,
                               const std::vector<int>& weights,
                               const std::vector<double>& base_point,
                               double chart_radius = 1.0);

  int cone_dim() const { return static_cast<int>(weights_.size()); }
  int space_dim() const { return static_cast<int>(base_point_.size()); }
  const std::vector<int>& weights() const { return weights_; }
  const std::vector<double>& base_point() const { return base_point_; }
  double chart_radius() const { return chart_radius_; }

  /// xi_k = t^{w_k} <eta, B_k(x)>, componentwise.
  std::vector<double> eval(std::span<const double> x, std::span<const double> eta,
                           double t) const;

  /// Field evaluation matrix: row k = B_k(x) (cone_dim x space_dim).
  void field_matrix(std::span<const double> x, std::vector<double>& rows) const;

 private:
  std::vector<Field> fields_;
  std::vector<int> weights_;
  std::vector<double> base_point_;
  double chart_radius_;
};

struct ConeSampleEntry {
  std::vector<double> xi;      // gauge-normalized representative
  std::vector<double> x;       // parameters that produced it
  std::vector<double> eta;
  double t = 0;
  double gauge = 1.0;          // xi * gauge = raw pairing value
};

struct ConeSample {
  std::vector<ConeSampleEntry> entries;
  int budget_used = 0;
};

struct SampleOptions {
  double t_max = 1e-1;
  double t_min = 1e-6;
  double eta_log_radius = 3.0;   // |eta| in 10^[-r, r]
  double eps_net = 1e-3;         // dedup resolution on normalized reps
  size_t max_entries = 100000;
  uint64_t seed = 1;
};

ConeSample sample_cone(const PairingMap& phi, int budget, const SampleOptions& opts = {});

enum class Membership { In, Out, Inconclusive };

struct MembershipVerdict {
  Membership verdict = Membership::Inconclusive;
  bool heuristic_out = false;    // "out" is a bounded-budget failure, not a proof
  double residual = 0;           // best achieved ||Phi - xi||
  std::vector<double> witness_x;
  std::vector<double> witness_eta;
  double witness_t = 0;
  int starts_used = 0;
  std::vector<double> trace;     // best residual after each start
};

struct MembershipOptions {
  int starts = 64;
  int iterations = 500;
  double eps_in = 1e-6;
  double eps_out = 1e-2;
  double t_small = 1e-3;
  uint64_t seed = 1;
};

/// Minimizes ||Phi(x,eta,t) - xi|| over x in the chart, eta in R^m and
/// t in (0, t_small]. eta is eliminated exactly per evaluation (the pairing is
/// linear in eta), leaving a low-dimensional search over (x, log t).
MembershipVerdict membership(const PairingMap& phi, std::span<const double> xi,
                             const MembershipOptions& opts = {});

struct InvarianceReport {
  int checked = 0;
  int failures = 0;
  struct Failure {
    std::string transform;
    std::vector<double> xi;
    double residual;
  };
  std::vector<Failure> cases;
};

/// Re-certifies dilates, scalar multiples and coadjoint transforms of sampled
/// cone points via the membership optimizer.
InvarianceReport invariance_check(const PairingMap& phi, const ConeSample& sample,
                                  const GradedLieAlgebra& g, int max_points = 16,
                                  const MembershipOptions& opts = {});

}  // namespace hypocalc

#endif
