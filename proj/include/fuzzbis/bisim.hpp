#ifndef FUZZBIS_BISIM_HPP
#define FUZZBIS_BISIM_HPP

#include <utility>
#include <vector>

#include "fuzzbis/model.hpp"

namespace fuzzbis {

struct BisimViolation {
  std::string condition;            // FB1..FB3, E1..E3, or a prefixed variant
  std::vector<std::string> states;  // witnessing states, left-to-right
  std::string lhs;                  // printed values of the failed inequality
  std::string rhs;
};

struct BisimReport {
  bool holds = true;
  std::vector<BisimViolation> violations;

  void add(std::string condition, std::vector<std::string> states,
           const Lattice& lat, const Value& lhs, const Value& rhs);
  void absorb(const BisimReport& sub, const std::string& prefix);
  nlohmann::json to_json() const;
};

enum class SolverMode { Auto, Exact, Approximate };

struct SolverConfig {
  mpq_class tolerance = mpq_class(1, 1000000000);
  std::size_t max_iterations = 10000;
  SolverMode mode = SolverMode::Auto;
};

struct SolverResult {
  FuzzyRelation relation;
  std::size_t iterations = 0;
  bool converged = true;
  bool exact = true;  // whether the run used the exact (fixpoint) regime
  /// (iteration, sup-norm delta) per step, for CSV export.
  std::vector<std::pair<std::size_t, mpq_class>> trace;
};

/// Pointwise bisimulation conditions:
///   FB1: Z(x,x') <= (p(x) <=> p'(x')) for every proposition p;
///   FB2: for all x,x',y there is y' with
///        Z(x,x') (x) r(x,y) <= r'(x',y') (x) Z(y,y');
///   FB3: the mirror of FB2.
/// Both models must agree on proposition and action names.
BisimReport check_bisimulation(const KripkeModel& m, const KripkeModel& mp,
                               const FuzzyRelation& z);

/// Relational form of the same conditions:
///   E1: Z <= pointwise inf of proposition biresidua;
///   E2: Z~ o r <= r' o Z~;   E3: Z o r' <= r o Z.
BisimReport check_relational(const KripkeModel& m, const KripkeModel& mp,
                             const FuzzyRelation& z);

/// Greatest fuzzy bisimulation by antitone iteration from the proposition
/// biresiduum seed. Requires a linear lattice. Mode Auto picks the exact
/// regime for finite carriers and the min / bounded-sum t-norms (where the
/// iterates stay on a finite value grid) and the approximate regime for the
/// product t-norm.
SolverResult greatest_bisimulation(const KripkeModel& m, const KripkeModel& mp,
                                   const SolverConfig& cfg = {});

/// Given bisimulations Z1 (m <-> mp) and Z2 (mp <-> mpp), checks that the
/// converse of Z1, the composition Z1 o Z2, and (on linear lattices) the
/// pointwise sup of Z1 with the all-zero relation are bisimulations too.
BisimReport closure_check(const KripkeModel& m, const KripkeModel& mp,
                          const KripkeModel& mpp, const FuzzyRelation& z1,
                          const FuzzyRelation& z2);

}  // namespace fuzzbis

#endif  // FUZZBIS_BISIM_HPP
