#ifndef FUZZBIS_TESTS_HELPERS_HPP
#define FUZZBIS_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "fuzzbis/automata.hpp"
#include "fuzzbis/bisim.hpp"
#include "fuzzbis/hm.hpp"

namespace fuzzbis::testing {

inline Value val(const LatticePtr& lat, const std::string& text) {
  return lat->parse(text);
}

/// A value grid for random models: evenly spaced rationals on unit carriers,
/// the full carrier on finite lattices.
inline std::vector<Value> value_grid(const LatticePtr& lat,
                                     std::size_t steps = 4) {
  std::vector<Value> out;
  if (lat->is_finite()) {
    for (std::size_t i = 0; i < lat->size(); ++i)
      out.push_back(lat->element_at(i));
    return out;
  }
  for (std::size_t i = 0; i <= steps; ++i)
    out.push_back(lat->make(mpq_class(i, steps)));
  return out;
}

/// Random model over fixed props {p, q} and actions {r, s}; transitions are
/// kept sparse so solvers and distance computations stay small.
inline KripkeModel random_model(std::mt19937_64& rng, const LatticePtr& lat,
                                std::size_t max_states,
                                const std::vector<Value>& grid) {
  std::size_t n = 1 + rng() % max_states;
  std::vector<std::string> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back("s" + std::to_string(i));
  KripkeModel m(lat, states);
  for (const char* pname : {"p", "q"}) {
    FuzzySet f(lat, states);
    for (std::size_t i = 0; i < n; ++i) f.set(i, grid[rng() % grid.size()]);
    m.add_prop(pname, std::move(f));
  }
  for (const char* aname : {"r", "s"}) {
    FuzzyRelation rel(lat, states, states);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 2 == 0) rel.set(i, j, grid[rng() % grid.size()]);
    m.add_action(aname, std::move(rel));
  }
  return m;
}

inline FuzzyAutomaton random_automaton(std::mt19937_64& rng,
                                       const LatticePtr& lat,
                                       std::size_t max_states,
                                       const std::vector<Value>& grid,
                                       std::size_t letters = 2) {
  std::size_t n = 1 + rng() % max_states;
  std::vector<std::string> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back("a" + std::to_string(i));
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < letters; ++i)
    alphabet.push_back(std::string(1, static_cast<char>('x' + i)));
  FuzzyAutomaton a(lat, states, alphabet);
  FuzzySet ini(lat, states), ter(lat, states);
  for (std::size_t i = 0; i < n; ++i) {
    ini.set(i, grid[rng() % grid.size()]);
    ter.set(i, grid[rng() % grid.size()]);
  }
  a.set_initial(std::move(ini));
  a.set_terminal(std::move(ter));
  for (const std::string& letter : alphabet) {
    FuzzyRelation rel(lat, states, states);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 2 == 0) rel.set(i, j, grid[rng() % grid.size()]);
    a.set_transitions(letter, std::move(rel));
  }
  return a;
}

/// Random formula respecting a fragment, over props {p, q}, actions {r, s}
/// and a constant grid.
inline FormulaPtr random_formula(std::mt19937_64& rng, const LatticePtr& lat,
                                 const FragmentSpec& phi,
                                 const std::vector<Value>& grid,
                                 std::size_t depth);

inline ProgramPtr random_program(std::mt19937_64& rng, const LatticePtr& lat,
                                 const FragmentSpec& phi,
                                 const std::vector<Value>& grid,
                                 std::size_t depth) {
  if (depth == 0) return Program::atomic(rng() % 2 ? "r" : "s");
  switch (rng() % 5) {
    case 0:
      return Program::atomic(rng() % 2 ? "r" : "s");
    case 1:
      if (!phi.exclude_test)
        return Program::test_of(
            random_formula(rng, lat, phi, grid, depth - 1));
      return Program::atomic("r");
    case 2:
      if (!phi.exclude_union)
        return Program::union_(random_program(rng, lat, phi, grid, depth - 1),
                               random_program(rng, lat, phi, grid, depth - 1));
      return Program::atomic("s");
    case 3:
      return Program::compose(random_program(rng, lat, phi, grid, depth - 1),
                              random_program(rng, lat, phi, grid, depth - 1));
    default:
      return Program::star(random_program(rng, lat, phi, grid, depth - 1));
  }
}

inline FormulaPtr random_formula(std::mt19937_64& rng, const LatticePtr& lat,
                                 const FragmentSpec& phi,
                                 const std::vector<Value>& grid,
                                 std::size_t depth) {
  auto leaf = [&]() -> FormulaPtr {
    switch (rng() % 3) {
      case 0:
        return Formula::constant_of(grid[rng() % grid.size()]);
      case 1:
        return Formula::prop_of("p");
      default:
        return Formula::prop_of("q");
    }
  };
  if (depth == 0) return leaf();
  switch (rng() % 9) {
    case 0:
      return leaf();
    case 1:
      return Formula::and_(random_formula(rng, lat, phi, grid, depth - 1),
                           random_formula(rng, lat, phi, grid, depth - 1));
    case 2:
      return Formula::or_(random_formula(rng, lat, phi, grid, depth - 1),
                          random_formula(rng, lat, phi, grid, depth - 1));
    case 3: {
      if (!phi.exclude_implies) {
        FormulaPtr a = random_formula(rng, lat, phi, grid, depth - 1);
        FormulaPtr b = random_formula(rng, lat, phi, grid, depth - 1);
        return Formula::implies(std::move(a), std::move(b));
      }
      return Formula::implies(Formula::constant_of(grid[rng() % grid.size()]),
                              random_formula(rng, lat, phi, grid, depth - 1));
    }
    case 4:
      return Formula::implies(random_formula(rng, lat, phi, grid, depth - 1),
                              Formula::constant_of(grid[rng() % grid.size()]));
    case 5:
      return Formula::not_(random_formula(rng, lat, phi, grid, depth - 1));
    case 6:
      return Formula::box(random_program(rng, lat, phi, grid, depth - 1),
                          random_formula(rng, lat, phi, grid, depth - 1));
    default:
      return Formula::diamond(random_program(rng, lat, phi, grid, depth - 1),
                              random_formula(rng, lat, phi, grid, depth - 1));
  }
}

/// Brute-force greatest bisimulation: enumerates every relation whose entries
/// come from the carrier of a finite lattice, keeps those passing
/// check_bisimulation, and returns their pointwise sup.
inline FuzzyRelation brute_force_greatest(const KripkeModel& m,
                                          const KripkeModel& mp) {
  const auto& lat = m.lattice();
  std::size_t cells = m.states().size() * mp.states().size();
  std::size_t k = lat->size();
  FuzzyRelation best(lat, m.states(), mp.states());
  std::vector<std::size_t> idx(cells, 0);
  while (true) {
    FuzzyRelation z(lat, m.states(), mp.states());
    for (std::size_t c = 0; c < cells; ++c)
      z.set(c / mp.states().size(), c % mp.states().size(),
            lat->element_at(idx[c]));
    if (check_bisimulation(m, mp, z).holds) {
      std::vector<FuzzyRelation> fam{best, z};
      best = sup_relations(fam);
    }
    std::size_t c = 0;
    for (; c < cells; ++c) {
      if (++idx[c] < k) break;
      idx[c] = 0;
    }
    if (c == cells) break;
  }
  return best;
}

/// Same brute force for the four Z-antitone forward-bisimulation conditions
/// of automata (initial conditions excluded, matching the solver's scope).
inline FuzzyRelation brute_force_greatest_forward(const FuzzyAutomaton& a,
                                                  const FuzzyAutomaton& b) {
  const auto& lat = a.lattice();
  std::size_t cells = a.states().size() * b.states().size();
  std::size_t k = lat->size();
  FuzzyRelation best(lat, a.states(), b.states());
  std::vector<std::size_t> idx(cells, 0);
  auto four_conditions = [&](const FuzzyRelation& z) {
    BisimReport rep = check_forward_bisimulation(a, b, z);
    for (const auto& v : rep.violations)
      if (v.condition != "initial-forth" && v.condition != "initial-back")
        return false;
    return true;
  };
  while (true) {
    FuzzyRelation z(lat, a.states(), b.states());
    for (std::size_t c = 0; c < cells; ++c)
      z.set(c / b.states().size(), c % b.states().size(),
            lat->element_at(idx[c]));
    if (four_conditions(z)) {
      std::vector<FuzzyRelation> fam{best, z};
      best = sup_relations(fam);
    }
    std::size_t c = 0;
    for (; c < cells; ++c) {
      if (++idx[c] < k) break;
      idx[c] = 0;
    }
    if (c == cells) break;
  }
  return best;
}

}  // namespace fuzzbis::testing

#endif  // FUZZBIS_TESTS_HELPERS_HPP
