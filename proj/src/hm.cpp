#include "fuzzbis/hm.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fuzzbis {

void check_gating(const Lattice& lat, const FragmentSpec& phi) {
  if (!phi.exclude_union && !lat.is_linear())
    throw GatingError("linearity",
                      "the language keeps union but lattice '" + lat.name() +
                          "' is not linear");
  if ((!phi.exclude_implies || !phi.exclude_test) && !lat.is_heyting())
    throw GatingError("heyting",
                      "the language keeps full implication or tests but "
                      "lattice '" +
                          lat.name() + "' is not a Heyting algebra");
}

Signature signature_of(const KripkeModel& m) {
  Signature sig;
  for (const auto& [n, _] : m.props()) sig.props.push_back(n);
  for (const auto& [n, _] : m.actions()) sig.actions.push_back(n);
  return sig;
}

namespace {

void check_hm_pair(const KripkeModel& m, const KripkeModel& mp) {
  if (m.lattice()->tag() != mp.lattice()->tag())
    throw LatticeError("models over different lattices");
  if (m.props().size() != mp.props().size())
    throw ValidationError("models declare different proposition sets");
  for (const auto& [n, _] : m.props()) mp.prop(n);  // throws when absent
  if (m.actions().size() != mp.actions().size())
    throw ValidationError("models declare different action sets");
  for (const auto& [n, _] : m.actions()) mp.action(n);
}

void check_relation(const KripkeModel& m, const KripkeModel& mp,
                    const FuzzyRelation& z) {
  if (z.lattice()->tag() != m.lattice()->tag())
    throw LatticeError("relation over a different lattice than the models");
  if (z.rows() != m.states() || z.cols() != mp.states())
    throw ValidationError("relation domains do not match the model states");
}

bool value_less(const Lattice& lat, const Value& a, const Value& b) {
  if (a.finite_carrier()) return a.index() < b.index();
  (void)lat;
  return a.rational() < b.rational();
}

void collect_model_values(const KripkeModel& m, const Lattice& lat,
                          std::map<std::string, Value>& seen) {
  for (const auto& [_, f] : m.props())
    for (std::size_t i = 0; i < f.size(); ++i)
      seen.emplace(lat.str(f.at(i)), f.at(i));
  for (const auto& [_, r] : m.actions())
    for (std::size_t i = 0; i < m.states().size(); ++i)
      for (std::size_t j = 0; j < m.states().size(); ++j)
        seen.emplace(lat.str(r.at(i, j)), r.at(i, j));
}

}  // namespace

std::vector<Value> default_constant_pool(const KripkeModel& m,
                                         const KripkeModel& mp,
                                         std::size_t rounds, std::size_t cap) {
  const auto& lat = *m.lattice();
  std::map<std::string, Value> seen;
  seen.emplace(lat.str(lat.bot()), lat.bot());
  seen.emplace(lat.str(lat.top()), lat.top());
  collect_model_values(m, lat, seen);
  collect_model_values(mp, lat, seen);

  std::vector<Value> base;
  for (const auto& [_, v] : seen) base.push_back(v);
  std::sort(base.begin(), base.end(),
            [&](const Value& a, const Value& b) { return value_less(lat, a, b); });

  std::vector<Value> pool = base;
  constexpr std::size_t kClosureBail = 256;
  for (std::size_t r = 0; r < rounds && pool.size() < kClosureBail; ++r) {
    std::size_t end = pool.size();
    for (std::size_t i = 0; i < end && pool.size() < kClosureBail; ++i)
      for (std::size_t j = 0; j < end && pool.size() < kClosureBail; ++j) {
        for (const Value& v : {lat.residuum(pool[i], pool[j]),
                               lat.biresiduum(pool[i], pool[j]),
                               lat.meet(pool[i], pool[j]),
                               lat.join(pool[i], pool[j])})
          if (seen.emplace(lat.str(v), v).second) pool.push_back(v);
      }
  }

  std::vector<Value> derived(pool.begin() + base.size(), pool.end());
  std::sort(derived.begin(), derived.end(),
            [&](const Value& a, const Value& b) { return value_less(lat, a, b); });
  std::vector<Value> out = base;
  for (const Value& v : derived) {
    if (out.size() >= cap) break;
    out.push_back(v);
  }
  if (out.size() > cap) out.resize(std::max(cap, base.size()));
  return out;
}

std::vector<FormulaPtr> enumerate_fKz(const EnumerationBudget& budget,
                                      const Signature& sig,
                                      const LatticePtr& lattice) {
  std::vector<Value> pool = budget.constant_pool;
  if (pool.empty()) pool = {lattice->bot(), lattice->top()};

  std::vector<FormulaPtr> all;
  std::set<std::string> seen;
  auto add = [&](FormulaPtr f) {
    if (seen.insert(to_string(*f)).second) all.push_back(std::move(f));
  };

  for (const Value& a : pool) add(Formula::constant_of(a));
  for (const std::string& p : sig.props) add(Formula::prop_of(p));

  std::size_t frontier_start = 0;
  for (std::size_t d = 1; d <= budget.max_depth; ++d) {
    std::size_t end = all.size();
    // Conjunctions need at least one operand from the newest depth level;
    // older pairs were produced at an earlier level already.
    for (std::size_t i = 0; i < end; ++i)
      for (std::size_t j = 0; j < end; ++j) {
        if (i < frontier_start && j < frontier_start) continue;
        add(Formula::and_(all[i], all[j]));
      }
    for (std::size_t i = frontier_start; i < end; ++i) {
      for (const Value& a : pool) {
        add(Formula::implies(Formula::constant_of(a), all[i]));
        add(Formula::implies(all[i], Formula::constant_of(a)));
      }
      for (const std::string& act : sig.actions)
        add(Formula::diamond(Program::atomic(act), all[i]));
    }
    if (all.size() == end) break;  // closure reached below the depth bound
    frontier_start = end;
  }
  return all;
}

// ---------------------------------------------------------------------------
// Logical distance via joint value vectors. Each diamond-fragment formula
// denotes one vector of values over the disjoint union of the two state
// spaces; distinct formulas with equal vectors contribute identically to
// every biresiduum, so closing vectors under the fragment's operators
// computes the same infimum as enumerating formulas.

namespace {

struct VectorClosure {
  const KripkeModel& m;
  const KripkeModel& mp;
  const LatticePtr lat;
  std::size_t off;  // index of mp's first state in a joint vector
  std::size_t n;

  std::vector<std::vector<Value>> vecs;
  std::vector<FormulaPtr> wits;
  std::set<std::string> seen;

  FuzzyRelation dist;
  std::vector<FormulaPtr> dist_wits;

  VectorClosure(const KripkeModel& m_, const KripkeModel& mp_)
      : m(m_),
        mp(mp_),
        lat(m_.lattice()),
        off(m_.states().size()),
        n(m_.states().size() + mp_.states().size()),
        dist(FuzzyRelation::constant(m_.lattice(), m_.states(), mp_.states(),
                                     m_.lattice()->top())),
        dist_wits(m_.states().size() * mp_.states().size()) {}

  std::string key(const std::vector<Value>& v) const {
    std::string k;
    for (const Value& x : v) {
      k += lat->str(x);
      k += '|';
    }
    return k;
  }

  bool add(std::vector<Value> v, FormulaPtr wit) {
    if (!seen.insert(key(v)).second) return false;
    for (std::size_t x = 0; x < off; ++x)
      for (std::size_t xp = 0; xp + off < n; ++xp) {
        Value b = lat->biresiduum(v[x], v[off + xp]);
        Value nd = lat->meet(dist.at(x, xp), b);
        if (!lat->eq(nd, dist.at(x, xp))) {
          dist.set(x, xp, nd);
          dist_wits[x * (n - off) + xp] = wit;
        }
      }
    vecs.push_back(std::move(v));
    wits.push_back(std::move(wit));
    return true;
  }
};

}  // namespace

DistanceMatrix logical_distance(const KripkeModel& m, const KripkeModel& mp,
                                const EnumerationBudget& budget,
                                const FuzzyRelation* early_stop_target) {
  check_hm_pair(m, mp);
  const auto& lat = m.lattice();
  if (!lat->is_continuous())
    throw GatingError("continuity",
                      "logical distance requires a continuity-flagged "
                      "lattice; '" +
                          lat->name() + "' is not");

  std::vector<Value> pool = budget.constant_pool;
  if (pool.empty()) pool = default_constant_pool(m, mp);

  VectorClosure cl(m, mp);
  DistanceMatrix out{cl.dist, {}, {}, 0, false};

  // Depth 0: constant and proposition vectors.
  for (const Value& a : pool)
    cl.add(std::vector<Value>(cl.n, a), Formula::constant_of(a));
  for (const auto& [pname, pm] : m.props()) {
    const FuzzySet& pmp = mp.prop(pname);
    std::vector<Value> v;
    for (std::size_t i = 0; i < pm.size(); ++i) v.push_back(pm.at(i));
    for (std::size_t i = 0; i < pmp.size(); ++i) v.push_back(pmp.at(i));
    cl.add(std::move(v), Formula::prop_of(pname));
  }
  out.by_depth.push_back(cl.dist);

  std::size_t frontier_start = 0;
  for (std::size_t d = 1; d <= budget.max_depth; ++d) {
    if (early_stop_target && cl.dist.eq(*early_stop_target)) break;
    if (cl.vecs.size() >= budget.max_vectors) {
      out.capped = true;
      break;
    }
    std::size_t end = cl.vecs.size();
    auto room = [&] { return cl.vecs.size() < budget.max_vectors; };

    // Meets: at least one operand from the newest level (meet is
    // commutative, so unordered pairs suffice).
    for (std::size_t i = frontier_start; i < end && room(); ++i)
      for (std::size_t j = 0; j <= i && room(); ++j) {
        std::vector<Value> v(cl.n, lat->bot());
        for (std::size_t k = 0; k < cl.n; ++k)
          v[k] = lat->meet(cl.vecs[i][k], cl.vecs[j][k]);
        cl.add(std::move(v), Formula::and_(cl.wits[i], cl.wits[j]));
      }

    for (std::size_t i = frontier_start; i < end && room(); ++i) {
      for (const Value& a : pool) {
        if (!room()) break;
        std::vector<Value> v1(cl.n, lat->bot()), v2(cl.n, lat->bot());
        for (std::size_t k = 0; k < cl.n; ++k) {
          v1[k] = lat->residuum(a, cl.vecs[i][k]);
          v2[k] = lat->residuum(cl.vecs[i][k], a);
        }
        cl.add(std::move(v1),
               Formula::implies(Formula::constant_of(a), cl.wits[i]));
        cl.add(std::move(v2),
               Formula::implies(cl.wits[i], Formula::constant_of(a)));
      }
      for (const auto& [aname, rm] : m.actions()) {
        if (!room()) break;
        const FuzzyRelation& rmp = mp.action(aname);
        std::vector<Value> v(cl.n, lat->bot());
        for (std::size_t x = 0; x < cl.off; ++x) {
          Value acc = lat->bot();
          for (std::size_t y = 0; y < cl.off; ++y)
            acc = lat->join(acc, lat->tnorm(rm.at(x, y), cl.vecs[i][y]));
          v[x] = acc;
        }
        for (std::size_t x = 0; x + cl.off < cl.n; ++x) {
          Value acc = lat->bot();
          for (std::size_t y = 0; y + cl.off < cl.n; ++y)
            acc = lat->join(acc,
                            lat->tnorm(rmp.at(x, y), cl.vecs[i][cl.off + y]));
          v[cl.off + x] = acc;
        }
        cl.add(std::move(v),
               Formula::diamond(Program::atomic(aname), cl.wits[i]));
      }
    }

    out.by_depth.push_back(cl.dist);
    if (cl.vecs.size() >= budget.max_vectors) out.capped = true;
    if (cl.vecs.size() == end) break;  // closed below the depth bound
    frontier_start = end;
  }

  out.distances = cl.dist;
  out.witnesses = cl.dist_wits;
  out.vectors_explored = cl.vecs.size();
  return out;
}

nlohmann::json DistanceMatrix::to_json() const {
  nlohmann::json out;
  out["vectors_explored"] = vectors_explored;
  out["capped"] = capped;
  out["depths"] = by_depth.size();
  auto pairs = nlohmann::json::array();
  const auto& lat = distances.lattice();
  for (std::size_t x = 0; x < distances.rows().size(); ++x)
    for (std::size_t xp = 0; xp < distances.cols().size(); ++xp) {
      nlohmann::json e;
      e["left"] = distances.rows()[x];
      e["right"] = distances.cols()[xp];
      e["distance"] = lat->str(distances.at(x, xp));
      const FormulaPtr& w = witness(x, xp);
      e["witness"] = w ? to_string(*w) : "";
      pairs.push_back(std::move(e));
    }
  out["pairs"] = std::move(pairs);
  return out;
}

HmReport hm_check(const KripkeModel& m, const KripkeModel& mp,
                  const EnumerationBudget& budget, const SolverConfig& cfg) {
  SolverResult sol = greatest_bisimulation(m, mp, cfg);
  DistanceMatrix dist = logical_distance(m, mp, budget, &sol.relation);
  HmReport rep{sol.relation, std::move(dist)};
  rep.solver_converged = sol.converged;
  for (const FuzzyRelation& snap : rep.distance.by_depth)
    if (!leq_relations(rep.solver, snap)) rep.sound = false;
  if (sol.exact)
    rep.matched = rep.distance.distances.eq(rep.solver);
  else
    rep.matched =
        rep.distance.distances.sup_norm_distance(rep.solver) <= cfg.tolerance;
  rep.max_gap = rep.distance.distances.sup_norm_distance(rep.solver);
  return rep;
}

nlohmann::json HmReport::to_json() const {
  nlohmann::json out;
  out["sound"] = sound;
  out["matched"] = matched;
  out["solver_converged"] = solver_converged;
  out["max_gap"] = rational_to_string(max_gap);
  const auto& lat = solver.lattice();
  auto pairs = nlohmann::json::array();
  for (std::size_t x = 0; x < solver.rows().size(); ++x)
    for (std::size_t xp = 0; xp < solver.cols().size(); ++xp) {
      nlohmann::json e;
      e["left"] = solver.rows()[x];
      e["right"] = solver.cols()[xp];
      e["solver"] = lat->str(solver.at(x, xp));
      e["distance"] = lat->str(distance.distances.at(x, xp));
      e["gap"] = rational_to_string(
          lat->distance(solver.at(x, xp), distance.distances.at(x, xp)));
      const FormulaPtr& w = distance.witness(x, xp);
      e["witness"] = w ? to_string(*w) : "";
      pairs.push_back(std::move(e));
    }
  out["pairs"] = std::move(pairs);
  return out;
}

InvarianceReport invariance_check(const KripkeModel& m, const KripkeModel& mp,
                                  const FuzzyRelation& z, const Formula& f,
                                  const FragmentSpec& phi,
                                  bool override_gating) {
  check_hm_pair(m, mp);
  check_relation(m, mp, z);
  if (!in_fragment(f, phi))
    throw ValidationError("formula '" + to_string(f) +
                          "' is not in fragment " + phi.str());
  if (!override_gating) check_gating(*m.lattice(), phi);

  const auto& lat = m.lattice();
  Evaluator em(m), emp(mp);
  FuzzySet vm = em.eval(f);
  FuzzySet vmp = emp.eval(f);
  InvarianceReport rep;
  for (std::size_t x = 0; x < m.states().size(); ++x)
    for (std::size_t xp = 0; xp < mp.states().size(); ++xp) {
      Value bound = lat->biresiduum(vm.at(x), vmp.at(xp));
      if (!lat->leq(z.at(x, xp), bound)) {
        rep.holds = false;
        rep.violations.push_back({"invariance",
                                  {m.states()[x], mp.states()[xp]},
                                  lat->str(z.at(x, xp)),
                                  lat->str(bound)});
      }
    }
  return rep;
}

nlohmann::json InvarianceReport::to_json() const {
  nlohmann::json out;
  out["holds"] = holds;
  auto arr = nlohmann::json::array();
  for (const auto& v : violations)
    arr.push_back({{"condition", v.condition},
                   {"states", v.states},
                   {"lhs", v.lhs},
                   {"rhs", v.rhs}});
  out["violations"] = std::move(arr);
  return out;
}

BisimReport program_zigzag_check(const KripkeModel& m, const KripkeModel& mp,
                                 const FuzzyRelation& z, const Program& alpha,
                                 const FragmentSpec& phi,
                                 bool override_gating) {
  check_hm_pair(m, mp);
  check_relation(m, mp, z);
  if (!in_fragment(alpha, phi))
    throw ValidationError("program '" + to_string(alpha) +
                          "' is not in fragment " + phi.str());
  if (!override_gating) check_gating(*m.lattice(), phi);

  const auto& lat = m.lattice();
  Evaluator em(m), emp(mp);
  FuzzyRelation ra = em.eval(alpha);
  FuzzyRelation rap = emp.eval(alpha);
  const auto& xs = m.states();
  const auto& xps = mp.states();
  BisimReport rep;
  for (std::size_t x = 0; x < xs.size(); ++x)
    for (std::size_t xp = 0; xp < xps.size(); ++xp) {
      for (std::size_t y = 0; y < xs.size(); ++y) {
        Value lhs = lat->tnorm(z.at(x, xp), ra.at(x, y));
        Value best = lat->bot();
        for (std::size_t yp = 0; yp < xps.size(); ++yp)
          best = lat->join(best, lat->tnorm(rap.at(xp, yp), z.at(y, yp)));
        if (!lat->leq(lhs, best))
          rep.add("forth", {xs[x], xps[xp], xs[y]}, *lat, lhs, best);
      }
      for (std::size_t yp = 0; yp < xps.size(); ++yp) {
        Value lhs = lat->tnorm(z.at(x, xp), rap.at(xp, yp));
        Value best = lat->bot();
        for (std::size_t y = 0; y < xs.size(); ++y)
          best = lat->join(best, lat->tnorm(ra.at(x, y), z.at(y, yp)));
        if (!lat->leq(lhs, best))
          rep.add("back", {xs[x], xps[xp], xps[yp]}, *lat, lhs, best);
      }
    }
  return rep;
}

}  // namespace fuzzbis
