#ifndef FUZZBIS_AUTOMATA_HPP
#define FUZZBIS_AUTOMATA_HPP

#include "fuzzbis/bisim.hpp"

namespace fuzzbis {

/// A fuzzy automaton: states, alphabet, per-letter fuzzy transition relation,
/// fuzzy initial set and fuzzy terminal set, all over one lattice.
class FuzzyAutomaton {
 public:
  FuzzyAutomaton(LatticePtr lattice, std::vector<std::string> states,
                 std::vector<std::string> alphabet);

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const FuzzySet& initial() const { return initial_; }
  const FuzzySet& terminal() const { return terminal_; }
  const FuzzyRelation& transitions(const std::string& letter) const;

  void set_initial(FuzzySet s);
  void set_terminal(FuzzySet s);
  void set_transitions(const std::string& letter, FuzzyRelation r);

  /// { "lattice": ..., "states": [...], "alphabet": [...],
  ///   "initial": {...}, "terminal": {...},
  ///   "transitions": { "<letter>": [[from,to,value], ...] } }
  static FuzzyAutomaton from_json(const nlohmann::json& doc,
                                  LatticePtr fallback_lattice = nullptr);
  nlohmann::json to_json() const;

 private:
  LatticePtr lattice_;
  std::vector<std::string> states_;
  std::vector<std::string> alphabet_;
  FuzzySet initial_;
  FuzzySet terminal_;
  std::vector<std::pair<std::string, FuzzyRelation>> transitions_;
};

FuzzyAutomaton load_automaton(const std::string& path,
                              LatticePtr fallback_lattice = nullptr);

/// The six forward-bisimulation conditions; condition ids:
///   initial-forth:  sigmaA <= sigmaB o Z~      initial-back:  sigmaB <= sigmaA o Z
///   delta-forth:    Z~ o deltaA <= deltaB o Z~ delta-back:    Z o deltaB <= deltaA o Z
///   terminal-forth: Z~ o tauA <= tauB          terminal-back: Z o tauB <= tauA
BisimReport check_forward_bisimulation(const FuzzyAutomaton& a,
                                       const FuzzyAutomaton& b,
                                       const FuzzyRelation& z);

struct ForwardSolverResult {
  SolverResult core;
  /// The two initial-set conditions are not antitone in Z, so the solver
  /// maximizes the other four and verifies these afterward; when they fail
  /// there is no forward bisimulation with these initial sets.
  bool initial_ok = true;
  BisimReport initial_report;
};

/// Greatest relation satisfying the four terminal/transition conditions,
/// seeded from the terminal biresidua; linear lattices only.
ForwardSolverResult greatest_forward_bisimulation(const FuzzyAutomaton& a,
                                                  const FuzzyAutomaton& b,
                                                  const SolverConfig& cfg = {});

/// The Kripke model of an automaton: two fresh states (named "__init__" and
/// "__final__", suffixed with '_' until fresh) carrying crisp props i and f;
/// every letter becomes an action whose relation embeds the letter's
/// transitions and adds init->x with the initial value of x and x->final with
/// the terminal value of x.
KripkeModel to_kripke(const FuzzyAutomaton& a, std::string* init_name = nullptr,
                      std::string* final_name = nullptr);

struct CorrespondenceReport {
  bool automata_holds = false;  // Z as a forward bisimulation
  bool kripke_holds = false;    // extended Z2 as a Kripke bisimulation
  bool direction1_ok = true;    // Kripke holds => automata holds
  bool direction2_ok = true;    // automata holds => Kripke holds
  bool direction2_covered = true;  // false on non-linear lattices
  BisimReport automata_report;
  BisimReport kripke_report;
  nlohmann::json to_json() const;
};

/// Builds both Kripke models, extends Z with the two crisp endpoint pairs,
/// and cross-checks the automata-level and Kripke-level verdicts in both
/// directions (the converse direction only on linear lattices).
CorrespondenceReport correspondence_check(const FuzzyAutomaton& a,
                                          const FuzzyAutomaton& b,
                                          const FuzzyRelation& z);

}  // namespace fuzzbis

#endif  // FUZZBIS_AUTOMATA_HPP
