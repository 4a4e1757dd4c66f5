#ifndef HYPOCALC_FILTRATION_HPP
#define HYPOCALC_FILTRATION_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypocalc/lie.hpp"
#include "hypocalc/polyfield.hpp"
#include "hypocalc/qlinalg.hpp"

namespace hypocalc {

/// Weighted generating data (X_i, v_i) with a declared depth N. Levels j < N
/// of the induced filtration are generated by iterated brackets of weight
/// <= j; level N is the full module of vector fields by convention.
struct WeightedGenerators {
  std::vector<PolyVectorField> fields;
  std::vector<int> weights;
  int depth = 1;

  int dim() const { return fields.empty() ? 0 : fields.front().dim; }
  void check() const;
};

/// An iterated left-nested bracket [X_{i1},[...,X_{ik}]...] of generators.
/// Frame fields injected at the top level carry letters = {} and frame >= 0.
struct BracketWord {
  std::vector<int> letters;
  int weight = 0;
  PolyVectorField field;
  int frame = -1;  // >= 0 marks the coordinate frame field d/dx_{frame+1}

  std::string label(const WeightedGenerators& gen) const;
};

struct Filtration {
  std::vector<BracketWord> words;   // deduplicated, sorted by (weight, length, letters)
  int depth = 1;
  bool top_full = true;             // level depth is the full module by convention

  /// Words of weight <= j (level N additionally holds the frame words).
  std::vector<const BracketWord*> level(int j) const;
};

struct FiltrationOptions {
  int word_cap = 10000;
};

/// Thrown when iterated bracket generation exceeds the word cap.
struct BracketBlowupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Filtration generate_filtration(const WeightedGenerators& gen,
                               const FiltrationOptions& opts = {});

struct HormanderResult {
  bool holds = false;
  /// True when the words alone fail to span at the point but level N is the
  /// full module by convention and the words span generically nearby.
  bool by_convention = false;
  std::vector<BracketWord> witness;
};

HormanderResult check_hormander(const WeightedGenerators& gen,
                                std::span<const Rational> p,
                                const FiltrationOptions& opts = {});

struct FiberReport {
  std::vector<Rational> point;
  std::vector<int> dims;                           // dim F^i_p / F^{i-1}_p per level
  std::vector<std::vector<BracketWord>> basis;     // chosen class representatives
  int jet_order = 0;
  bool stable = true;                              // dims agree between K and K+1
  int total_dim() const;
};

/// Fiber dimensions via jet-truncated linear algebra over Q. Membership in
/// F^{i-1} + I_p F^i is decided on K-jets; exact for polynomial germs of
/// degree <= K, a semi-decision in general (see the stability flag).
FiberReport fiber_dims(const WeightedGenerators& gen, std::span<const Rational> p, int K,
                       const FiltrationOptions& opts = {});

struct GradedBasisData {
  std::vector<PolyVectorField> fields;
  std::vector<int> weights;
  std::vector<BracketWord> words;
  std::vector<Rational> point;
  FiberReport report;
};

/// One field per fiber-basis class, graded by weight. Requires Hormander.
GradedBasisData minimal_graded_basis(const WeightedGenerators& gen,
                                     std::span<const Rational> p,
                                     const FiltrationOptions& opts = {});

struct OsculatingResult {
  GradedLieAlgebra algebra;
  GradedBasisData basis;
};

/// Structure constants of gr(F)_p on the minimal graded basis: brackets of
/// representatives projected onto the next fiber level.
OsculatingResult osculating_at(const WeightedGenerators& gen, std::span<const Rational> p,
                               const FiltrationOptions& opts = {});

/// Class of an arbitrary field Z in the level-w fiber at p, expressed in the
/// coordinates of the given graded basis (zero vector when the class dies).
/// Throws when the class is not expressible (jet order too small).
QVector fiber_class_coords(const WeightedGenerators& gen, const GradedBasisData& basis,
                           const PolyVectorField& Z, int w,
                           const FiltrationOptions& opts = {});

}  // namespace hypocalc

#endif
