#ifndef FUZZBIS_MODEL_HPP
#define FUZZBIS_MODEL_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fuzzbis/relation.hpp"
#include "fuzzbis/syntax.hpp"

namespace fuzzbis {

/// A fuzzy Kripke model: a finite state set with fuzzy valuations for
/// propositions and a fuzzy accessibility relation per atomic action.
/// Propositions and actions keep their document order.
class KripkeModel {
 public:
  KripkeModel(LatticePtr lattice, std::vector<std::string> states)
      : lattice_(std::move(lattice)), states_(std::move(states)) {}

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<std::string>& states() const { return states_; }
  std::size_t state_index(const std::string& name) const {
    return domain_index(states_, name);
  }

  const std::vector<std::pair<std::string, FuzzySet>>& props() const {
    return props_;
  }
  const std::vector<std::pair<std::string, FuzzyRelation>>& actions() const {
    return actions_;
  }
  bool has_prop(const std::string& name) const;
  bool has_action(const std::string& name) const;
  const FuzzySet& prop(const std::string& name) const;
  const FuzzyRelation& action(const std::string& name) const;

  void add_prop(const std::string& name, FuzzySet values);
  void add_action(const std::string& name, FuzzyRelation rel);

  /// Document schema:
  ///   { "lattice": <name or table>, "states": [...],
  ///     "props": { "p": { "u": "9/10", ... }, ... },
  ///     "actions": { "r": [["u","v","3/5"], ...], ... } }
  /// When "lattice" is absent, `fallback_lattice` is used (the CLI passes the
  /// FUZZBIS_LATTICE / --lattice selection through here).
  static KripkeModel from_json(const nlohmann::json& doc,
                               LatticePtr fallback_lattice = nullptr);
  nlohmann::json to_json() const;

 private:
  LatticePtr lattice_;
  std::vector<std::string> states_;
  std::vector<std::pair<std::string, FuzzySet>> props_;
  std::vector<std::pair<std::string, FuzzyRelation>> actions_;
};

KripkeModel load_model(const std::string& path,
                       LatticePtr fallback_lattice = nullptr);

/// Evaluates formulas and programs over one model, memoizing by the printed
/// form of each subterm (terms are interned per evaluation, so printing is a
/// sound cache key within one model).
class Evaluator {
 public:
  explicit Evaluator(const KripkeModel& model) : model_(&model) {}

  /// The fuzzy set of formula values, one per state.
  FuzzySet eval(const Formula& f);
  Value eval_at(const Formula& f, const std::string& state);
  /// The fuzzy accessibility relation denoted by a program. Iteration is the
  /// finite join of powers 0 .. |states|-1, which is exhaustive on a finite
  /// state space.
  FuzzyRelation eval(const Program& p);

 private:
  const KripkeModel* model_;
  std::map<std::string, FuzzySet> formula_cache_;
  std::map<std::string, FuzzyRelation> program_cache_;
};

struct ModelStats {
  std::size_t states = 0;
  std::size_t props = 0;
  std::size_t actions = 0;
  std::size_t nonzero_transitions = 0;
  std::string lattice;
};

ModelStats model_stats(const KripkeModel& m);

}  // namespace fuzzbis

#endif  // FUZZBIS_MODEL_HPP
