#ifndef FUZZBIS_HM_HPP
#define FUZZBIS_HM_HPP

#include "fuzzbis/bisim.hpp"

namespace fuzzbis {

/// A lattice-side precondition of a checker was not met for the requested
/// language fragment. what() names the failed condition id.
class GatingError : public Error {
 public:
  GatingError(std::string condition, const std::string& detail)
      : Error("gating refused: condition '" + condition + "' fails — " +
              detail),
        condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

/// Invariance preconditions for a fragment: when union is part of the
/// language the lattice must be linear ("linearity"); when full implication
/// or tests are part of the language it must be Heyting ("heyting").
/// Throws GatingError naming the first failed condition.
void check_gating(const Lattice& lat, const FragmentSpec& phi);

/// Bounds for diamond-fragment formula enumeration.
struct EnumerationBudget {
  std::size_t max_depth = 3;
  /// Constants usable in formulas; empty means {0, 1} for enumeration and
  /// the default pool (see default_constant_pool) for distance computation.
  std::vector<Value> constant_pool;
  /// Cap on distinct value vectors explored per distance computation; when
  /// hit, the result is still an upper bound on the true distances.
  std::size_t max_vectors = 20000;
};

struct Signature {
  std::vector<std::string> props;
  std::vector<std::string> actions;
};

Signature signature_of(const KripkeModel& m);

/// {0, 1} and every value occurring in the two models, then closed for
/// `rounds` rounds under residuum, biresiduum, meet and join, capped at
/// `cap` values (base values are never dropped). Deterministic order.
std::vector<Value> default_constant_pool(const KripkeModel& m,
                                         const KripkeModel& mp,
                                         std::size_t rounds = 2,
                                         std::size_t cap = 32);

/// All diamond-fragment formulas (constants, props, /\, a -> f, f -> a,
/// <action>f) of nesting depth <= max_depth, each exactly once (structural
/// dedup), ordered by depth then construction order.
std::vector<FormulaPtr> enumerate_fKz(const EnumerationBudget& budget,
                                      const Signature& sig,
                                      const LatticePtr& lattice);

/// Pointwise infimum, over the enumerated diamond-fragment formulas, of the
/// biresiduum of the formula's values at the paired states, with a witness
/// formula attaining each entry's current value.
struct DistanceMatrix {
  FuzzyRelation distances;             // deepest level reached
  std::vector<FormulaPtr> witnesses;   // row-major over (x, x'); may be null
  std::vector<FuzzyRelation> by_depth; // snapshot after each depth 0..d
  std::size_t vectors_explored = 0;
  bool capped = false;  // max_vectors was hit; entries remain upper bounds

  const FormulaPtr& witness(std::size_t x, std::size_t xp) const {
    return witnesses[x * distances.cols().size() + xp];
  }
  nlohmann::json to_json() const;
};

/// Computes the matrix by closing joint value vectors (one value per state of
/// either model) under the fragment's operators — semantically the same
/// infimum as enumerating formulas, without re-deriving equal-valued ones.
/// Requires a continuity-flagged lattice. If `early_stop_target` is given,
/// deeper levels are skipped once the matrix equals it.
DistanceMatrix logical_distance(const KripkeModel& m, const KripkeModel& mp,
                                const EnumerationBudget& budget,
                                const FuzzyRelation* early_stop_target = nullptr);

struct HmReport {
  FuzzyRelation solver;     // greatest bisimulation Z*
  DistanceMatrix distance;  // logical distance D
  bool solver_converged = true;
  bool sound = true;    // Z* <= D at every explored depth
  bool matched = false; // D reached Z* (exactly, or within cfg tolerance)
  mpq_class max_gap{0}; // sup-norm of D - Z* at the deepest level
  nlohmann::json to_json() const;
};

/// Runs the bisimulation solver and the distance computation side by side and
/// compares them pointwise.
HmReport hm_check(const KripkeModel& m, const KripkeModel& mp,
                  const EnumerationBudget& budget, const SolverConfig& cfg = {});

struct InvarianceReport {
  bool holds = true;
  /// condition "invariance", states {x, x'}, lhs Z(x,x'), rhs biresiduum.
  std::vector<BisimViolation> violations;
  nlohmann::json to_json() const;
};

/// Checks Z(x,x') <= (f^M(x) <=> f^M'(x')) for all state pairs. The formula
/// must lie in the fragment; the lattice must pass check_gating for it unless
/// `override_gating` is set (for demonstrating counterexamples).
InvarianceReport invariance_check(const KripkeModel& m, const KripkeModel& mp,
                                  const FuzzyRelation& z, const Formula& f,
                                  const FragmentSpec& phi,
                                  bool override_gating = false);

/// Existential zigzag for a compound program: for all (x, x', y) some y' has
/// Z(x,x') (x) a^M(x,y) <= a^M'(x',y') (x) Z(y,y') (condition "forth"), and
/// the mirror ("back"). Same fragment/gating contract as invariance_check.
BisimReport program_zigzag_check(const KripkeModel& m, const KripkeModel& mp,
                                 const FuzzyRelation& z, const Program& alpha,
                                 const FragmentSpec& phi,
                                 bool override_gating = false);

}  // namespace fuzzbis

#endif  // FUZZBIS_HM_HPP
