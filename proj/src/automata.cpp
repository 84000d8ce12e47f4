#include "fuzzbis/automata.hpp"

#include <algorithm>
#include <fstream>

namespace fuzzbis {

FuzzyAutomaton::FuzzyAutomaton(LatticePtr lattice,
                               std::vector<std::string> states,
                               std::vector<std::string> alphabet)
    : lattice_(std::move(lattice)),
      states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      initial_(lattice_, states_),
      terminal_(lattice_, states_) {
  if (states_.empty())
    throw ValidationError("automaton needs at least one state");
  for (std::size_t i = 0; i < states_.size(); ++i)
    for (std::size_t j = i + 1; j < states_.size(); ++j)
      if (states_[i] == states_[j])
        throw ValidationError("duplicate state '" + states_[i] + "'");
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    for (std::size_t j = i + 1; j < alphabet_.size(); ++j)
      if (alphabet_[i] == alphabet_[j])
        throw ValidationError("duplicate letter '" + alphabet_[i] + "'");
  for (const std::string& letter : alphabet_)
    transitions_.emplace_back(letter, FuzzyRelation(lattice_, states_, states_));
}

const FuzzyRelation& FuzzyAutomaton::transitions(
    const std::string& letter) const {
  for (const auto& [l, r] : transitions_)
    if (l == letter) return r;
  throw ValidationError("unknown letter '" + letter + "'");
}

void FuzzyAutomaton::set_initial(FuzzySet s) {
  if (s.lattice()->tag() != lattice_->tag() || s.domain() != states_)
    throw ValidationError("initial set does not match the automaton");
  initial_ = std::move(s);
}

void FuzzyAutomaton::set_terminal(FuzzySet s) {
  if (s.lattice()->tag() != lattice_->tag() || s.domain() != states_)
    throw ValidationError("terminal set does not match the automaton");
  terminal_ = std::move(s);
}

void FuzzyAutomaton::set_transitions(const std::string& letter,
                                     FuzzyRelation r) {
  if (r.lattice()->tag() != lattice_->tag() || r.rows() != states_ ||
      r.cols() != states_)
    throw ValidationError("transition relation does not match the automaton");
  for (auto& [l, rel] : transitions_)
    if (l == letter) {
      rel = std::move(r);
      return;
    }
  throw ValidationError("unknown letter '" + letter + "'");
}

FuzzyAutomaton FuzzyAutomaton::from_json(const nlohmann::json& doc,
                                         LatticePtr fallback_lattice) {
  if (!doc.is_object())
    throw ValidationError("automaton must be a JSON object");
  LatticePtr lat;
  if (doc.contains("lattice"))
    lat = Lattice::from_spec(doc.at("lattice"));
  else if (fallback_lattice)
    lat = std::move(fallback_lattice);
  else
    throw ValidationError("automaton has no 'lattice' and no default given");
  if (!doc.contains("states") || !doc.contains("alphabet"))
    throw ValidationError("automaton needs 'states' and 'alphabet'");

  FuzzyAutomaton a(lat, doc.at("states").get<std::vector<std::string>>(),
                   doc.at("alphabet").get<std::vector<std::string>>());
  if (doc.contains("initial"))
    a.set_initial(FuzzySet::from_json(lat, a.states(), doc.at("initial")));
  if (doc.contains("terminal"))
    a.set_terminal(FuzzySet::from_json(lat, a.states(), doc.at("terminal")));
  const nlohmann::json trans =
      doc.value("transitions", nlohmann::json::object());
  for (const auto& [letter, triples] : trans.items()) {
    FuzzyRelation r(lat, a.states(), a.states());
    if (!triples.is_array())
      throw ValidationError("transitions for '" + letter +
                            "' must be an array of [from, to, value]");
    for (const auto& entry : triples) {
      if (!entry.is_array() || entry.size() != 3)
        throw ValidationError("transition entry must be [from, to, value]");
      std::string text = entry[2].is_string() ? entry[2].get<std::string>()
                                              : entry[2].dump();
      r.set(entry[0].get<std::string>(), entry[1].get<std::string>(),
            lat->parse(text));
    }
    a.set_transitions(letter, std::move(r));
  }
  return a;
}

nlohmann::json FuzzyAutomaton::to_json() const {
  nlohmann::json out;
  out["lattice"] = lattice_->name();
  out["states"] = states_;
  out["alphabet"] = alphabet_;
  out["initial"] = initial_.to_json();
  out["terminal"] = terminal_.to_json();
  auto trans = nlohmann::json::object();
  for (const auto& [letter, r] : transitions_) {
    auto triples = nlohmann::json::array();
    for (std::size_t i = 0; i < states_.size(); ++i)
      for (std::size_t j = 0; j < states_.size(); ++j)
        if (!lattice_->eq(r.at(i, j), lattice_->bot()))
          triples.push_back({states_[i], states_[j], lattice_->str(r.at(i, j))});
    trans[letter] = std::move(triples);
  }
  out["transitions"] = std::move(trans);
  return out;
}

FuzzyAutomaton load_automaton(const std::string& path,
                              LatticePtr fallback_lattice) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open automaton file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
  return FuzzyAutomaton::from_json(doc, std::move(fallback_lattice));
}

namespace {

void check_automata_pair(const FuzzyAutomaton& a, const FuzzyAutomaton& b,
                         const FuzzyRelation& z) {
  if (a.lattice()->tag() != b.lattice()->tag())
    throw LatticeError("automata over different lattices");
  if (z.lattice()->tag() != a.lattice()->tag())
    throw LatticeError("relation over a different lattice than the automata");
  std::vector<std::string> sa = a.alphabet(), sb = b.alphabet();
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) throw ValidationError("automata over different alphabets");
  if (z.rows() != a.states() || z.cols() != b.states())
    throw ValidationError("relation domains do not match the automata states");
}

void compare_sets(const FuzzySet& lhs, const FuzzySet& rhs,
                  const std::string& condition, BisimReport& rep) {
  const auto& lat = lhs.lattice();
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (!lat->leq(lhs.at(i), rhs.at(i)))
      rep.add(condition, {lhs.domain()[i]}, *lat, lhs.at(i), rhs.at(i));
}

void compare_relations(const FuzzyRelation& lhs, const FuzzyRelation& rhs,
                       const std::string& condition, const std::string& letter,
                       BisimReport& rep) {
  const auto& lat = lhs.lattice();
  for (std::size_t i = 0; i < lhs.rows().size(); ++i)
    for (std::size_t j = 0; j < lhs.cols().size(); ++j)
      if (!lat->leq(lhs.at(i, j), rhs.at(i, j)))
        rep.add(condition, {lhs.rows()[i], lhs.cols()[j], letter}, *lat,
                lhs.at(i, j), rhs.at(i, j));
}

}  // namespace

BisimReport check_forward_bisimulation(const FuzzyAutomaton& a,
                                       const FuzzyAutomaton& b,
                                       const FuzzyRelation& z) {
  check_automata_pair(a, b, z);
  BisimReport rep;
  FuzzyRelation zc = z.converse();

  compare_sets(a.initial(), compose(b.initial(), zc), "initial-forth", rep);
  compare_sets(b.initial(), compose(a.initial(), z), "initial-back", rep);
  for (const std::string& letter : a.alphabet()) {
    const FuzzyRelation& da = a.transitions(letter);
    const FuzzyRelation& db = b.transitions(letter);
    compare_relations(compose(zc, da), compose(db, zc), "delta-forth", letter,
                      rep);
    compare_relations(compose(z, db), compose(da, z), "delta-back", letter,
                      rep);
  }
  compare_sets(compose(zc, a.terminal()), b.terminal(), "terminal-forth", rep);
  compare_sets(compose(z, b.terminal()), a.terminal(), "terminal-back", rep);
  return rep;
}

ForwardSolverResult greatest_forward_bisimulation(const FuzzyAutomaton& a,
                                                  const FuzzyAutomaton& b,
                                                  const SolverConfig& cfg) {
  const auto& lat = a.lattice();
  {
    FuzzyRelation probe(lat, a.states(), b.states());
    check_automata_pair(a, b, probe);
  }
  if (!lat->is_linear())
    throw SolverError(
        "greatest-forward-bisimulation solver requires the linearity "
        "condition on the lattice; '" +
        lat->name() + "' is not linear");
  if (cfg.max_iterations == 0)
    throw ValidationError("max_iterations must be positive");

  bool exact;
  switch (cfg.mode) {
    case SolverMode::Exact:
      exact = true;
      break;
    case SolverMode::Approximate:
      exact = false;
      break;
    case SolverMode::Auto:
      exact = lat->tnorm_kind() != TnormKind::Product;
      break;
  }

  const auto& xs = a.states();
  const auto& ys = b.states();
  FuzzyRelation z(lat, xs, ys);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      z.set(i, j, lat->biresiduum(a.terminal().at(i), b.terminal().at(j)));

  ForwardSolverResult res{{z}};
  SolverResult& core = res.core;
  bool converged = false;
  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    FuzzyRelation next(lat, xs, ys);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        Value acc = z.at(i, j);
        for (const std::string& letter : a.alphabet()) {
          const FuzzyRelation& da = a.transitions(letter);
          const FuzzyRelation& db = b.transitions(letter);
          for (std::size_t i2 = 0; i2 < xs.size(); ++i2) {
            Value best = lat->bot();
            for (std::size_t j2 = 0; j2 < ys.size(); ++j2)
              best = lat->join(best, lat->tnorm(db.at(j, j2), z.at(i2, j2)));
            acc = lat->meet(acc, lat->residuum(da.at(i, i2), best));
          }
          for (std::size_t j2 = 0; j2 < ys.size(); ++j2) {
            Value best = lat->bot();
            for (std::size_t i2 = 0; i2 < xs.size(); ++i2)
              best = lat->join(best, lat->tnorm(da.at(i, i2), z.at(i2, j2)));
            acc = lat->meet(acc, lat->residuum(db.at(j, j2), best));
          }
        }
        next.set(i, j, acc);
      }
    mpq_class delta = z.sup_norm_distance(next);
    core.trace.emplace_back(iter, delta);
    core.iterations = iter;
    bool done = exact ? z.eq(next) : (delta <= cfg.tolerance);
    z = std::move(next);
    if (done) {
      converged = true;
      break;
    }
  }
  core.relation = z;
  core.converged = converged;
  core.exact = exact;

  FuzzyRelation zc = z.converse();
  compare_sets(a.initial(), compose(b.initial(), zc), "initial-forth",
               res.initial_report);
  compare_sets(b.initial(), compose(a.initial(), z), "initial-back",
               res.initial_report);
  res.initial_ok = res.initial_report.holds;
  return res;
}

KripkeModel to_kripke(const FuzzyAutomaton& a, std::string* init_name,
                      std::string* final_name) {
  const auto& lat = a.lattice();
  auto fresh = [&](std::string base) {
    while (std::find(a.states().begin(), a.states().end(), base) !=
           a.states().end())
      base += "_";
    return base;
  };
  std::string si = fresh("__init__");
  std::string sf = fresh("__final__");
  if (si == sf) sf += "_";
  if (init_name) *init_name = si;
  if (final_name) *final_name = sf;

  std::vector<std::string> states = a.states();
  states.push_back(si);
  states.push_back(sf);
  KripkeModel m(lat, states);

  FuzzySet pi(lat, states), pf(lat, states);
  pi.set(si, lat->top());
  pf.set(sf, lat->top());
  m.add_prop("i", std::move(pi));
  m.add_prop("f", std::move(pf));

  std::size_t n = a.states().size();
  for (const std::string& letter : a.alphabet()) {
    const FuzzyRelation& d = a.transitions(letter);
    FuzzyRelation r(lat, states, states);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r.set(i, j, d.at(i, j));
    for (std::size_t i = 0; i < n; ++i) {
      r.set(n, i, a.initial().at(i));      // init -> state
      r.set(i, n + 1, a.terminal().at(i)); // state -> final
    }
    m.add_action(letter, std::move(r));
  }
  return m;
}

CorrespondenceReport correspondence_check(const FuzzyAutomaton& a,
                                          const FuzzyAutomaton& b,
                                          const FuzzyRelation& z) {
  check_automata_pair(a, b, z);
  const auto& lat = a.lattice();

  std::string si_a, sf_a, si_b, sf_b;
  KripkeModel ma = to_kripke(a, &si_a, &sf_a);
  KripkeModel mb = to_kripke(b, &si_b, &sf_b);

  FuzzyRelation z2(lat, ma.states(), mb.states());
  for (std::size_t i = 0; i < a.states().size(); ++i)
    for (std::size_t j = 0; j < b.states().size(); ++j)
      z2.set(i, j, z.at(i, j));
  z2.set(si_a, si_b, lat->top());
  z2.set(sf_a, sf_b, lat->top());

  CorrespondenceReport rep;
  rep.automata_report = check_forward_bisimulation(a, b, z);
  rep.kripke_report = check_bisimulation(ma, mb, z2);
  rep.automata_holds = rep.automata_report.holds;
  rep.kripke_holds = rep.kripke_report.holds;
  rep.direction1_ok = !(rep.kripke_holds && !rep.automata_holds);
  rep.direction2_covered = lat->is_linear();
  rep.direction2_ok = rep.direction2_covered
                          ? !(rep.automata_holds && !rep.kripke_holds)
                          : true;
  return rep;
}

nlohmann::json CorrespondenceReport::to_json() const {
  nlohmann::json out;
  out["automata_holds"] = automata_holds;
  out["kripke_holds"] = kripke_holds;
  out["direction1_ok"] = direction1_ok;
  out["direction2_ok"] = direction2_ok;
  out["direction2_covered"] = direction2_covered;
  if (!direction2_covered)
    out["note"] =
        "converse direction not covered on non-linear lattices; reported as "
        "not exercised";
  out["automata_report"] = automata_report.to_json();
  out["kripke_report"] = kripke_report.to_json();
  return out;
}

}  // namespace fuzzbis
