#include "fuzzbis/bisim.hpp"

#include <algorithm>

namespace fuzzbis {

void BisimReport::add(std::string condition, std::vector<std::string> states,
                      const Lattice& lat, const Value& lhs, const Value& rhs) {
  holds = false;
  violations.push_back({std::move(condition), std::move(states), lat.str(lhs),
                        lat.str(rhs)});
}

void BisimReport::absorb(const BisimReport& sub, const std::string& prefix) {
  if (!sub.holds) holds = false;
  for (const auto& v : sub.violations) {
    BisimViolation copy = v;
    copy.condition = prefix + ":" + copy.condition;
    violations.push_back(std::move(copy));
  }
}

nlohmann::json BisimReport::to_json() const {
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

namespace {

std::vector<std::string> sorted_names(
    const std::vector<std::pair<std::string, FuzzySet>>& xs) {
  std::vector<std::string> out;
  for (const auto& [n, _] : xs) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> sorted_names(
    const std::vector<std::pair<std::string, FuzzyRelation>>& xs) {
  std::vector<std::string> out;
  for (const auto& [n, _] : xs) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

void check_pair(const KripkeModel& m, const KripkeModel& mp,
                const FuzzyRelation& z) {
  if (m.lattice()->tag() != mp.lattice()->tag())
    throw LatticeError("models over different lattices");
  if (z.lattice()->tag() != m.lattice()->tag())
    throw LatticeError("relation over a different lattice than the models");
  if (z.rows() != m.states() || z.cols() != mp.states())
    throw ValidationError("relation domains do not match the model states");
  if (sorted_names(m.props()) != sorted_names(mp.props()))
    throw ValidationError("models declare different proposition sets");
  if (sorted_names(m.actions()) != sorted_names(mp.actions()))
    throw ValidationError("models declare different action sets");
}

}  // namespace

BisimReport check_bisimulation(const KripkeModel& m, const KripkeModel& mp,
                               const FuzzyRelation& z) {
  check_pair(m, mp, z);
  const auto& lat = m.lattice();
  const auto& xs = m.states();
  const auto& xps = mp.states();
  BisimReport rep;

  for (const auto& [pname, pm] : m.props()) {
    const FuzzySet& pmp = mp.prop(pname);
    for (std::size_t x = 0; x < xs.size(); ++x)
      for (std::size_t xp = 0; xp < xps.size(); ++xp) {
        Value bound = lat->biresiduum(pm.at(x), pmp.at(xp));
        if (!lat->leq(z.at(x, xp), bound))
          rep.add("FB1", {xs[x], xps[xp], pname}, *lat, z.at(x, xp), bound);
      }
  }

  for (const auto& [aname, rm] : m.actions()) {
    const FuzzyRelation& rmp = mp.action(aname);
    for (std::size_t x = 0; x < xs.size(); ++x)
      for (std::size_t xp = 0; xp < xps.size(); ++xp) {
        for (std::size_t y = 0; y < xs.size(); ++y) {
          Value lhs = lat->tnorm(z.at(x, xp), rm.at(x, y));
          Value best = lat->bot();
          for (std::size_t yp = 0; yp < xps.size(); ++yp)
            best = lat->join(best, lat->tnorm(rmp.at(xp, yp), z.at(y, yp)));
          if (!lat->leq(lhs, best))
            rep.add("FB2", {xs[x], xps[xp], xs[y], aname}, *lat, lhs, best);
        }
        for (std::size_t yp = 0; yp < xps.size(); ++yp) {
          Value lhs = lat->tnorm(z.at(x, xp), rmp.at(xp, yp));
          Value best = lat->bot();
          for (std::size_t y = 0; y < xs.size(); ++y)
            best = lat->join(best, lat->tnorm(rm.at(x, y), z.at(y, yp)));
          if (!lat->leq(lhs, best))
            rep.add("FB3", {xs[x], xps[xp], xps[yp], aname}, *lat, lhs, best);
        }
      }
  }
  return rep;
}

BisimReport check_relational(const KripkeModel& m, const KripkeModel& mp,
                             const FuzzyRelation& z) {
  check_pair(m, mp, z);
  const auto& lat = m.lattice();
  const auto& xs = m.states();
  const auto& xps = mp.states();
  BisimReport rep;

  for (std::size_t x = 0; x < xs.size(); ++x)
    for (std::size_t xp = 0; xp < xps.size(); ++xp) {
      Value bound = lat->top();
      for (const auto& [pname, pm] : m.props())
        bound = lat->meet(bound,
                          lat->biresiduum(pm.at(x), mp.prop(pname).at(xp)));
      if (!lat->leq(z.at(x, xp), bound))
        rep.add("E1", {xs[x], xps[xp]}, *lat, z.at(x, xp), bound);
    }

  FuzzyRelation zc = z.converse();
  for (const auto& [aname, rm] : m.actions()) {
    const FuzzyRelation& rmp = mp.action(aname);
    FuzzyRelation l2 = compose(zc, rm);
    FuzzyRelation r2 = compose(rmp, zc);
    for (std::size_t i = 0; i < xps.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j)
        if (!lat->leq(l2.at(i, j), r2.at(i, j)))
          rep.add("E2", {xps[i], xs[j], aname}, *lat, l2.at(i, j), r2.at(i, j));
    FuzzyRelation l3 = compose(z, rmp);
    FuzzyRelation r3 = compose(rm, z);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < xps.size(); ++j)
        if (!lat->leq(l3.at(i, j), r3.at(i, j)))
          rep.add("E3", {xs[i], xps[j], aname}, *lat, l3.at(i, j), r3.at(i, j));
  }
  return rep;
}

SolverResult greatest_bisimulation(const KripkeModel& m, const KripkeModel& mp,
                                   const SolverConfig& cfg) {
  const auto& lat = m.lattice();
  const auto& xs = m.states();
  const auto& xps = mp.states();
  {
    // Validate with a throwaway zero relation; the solver builds its own Z.
    FuzzyRelation probe(lat, xs, xps);
    check_pair(m, mp, probe);
  }
  if (!lat->is_linear())
    throw SolverError(
        "greatest-bisimulation solver requires the linearity condition on "
        "the lattice; '" +
        lat->name() + "' is not linear");
  if (cfg.max_iterations == 0)
    throw ValidationError("max_iterations must be positive");
  if (cfg.tolerance < 0) throw ValidationError("tolerance must be >= 0");

  bool exact;
  switch (cfg.mode) {
    case SolverMode::Exact:
      exact = true;
      break;
    case SolverMode::Approximate:
      exact = false;
      break;
    case SolverMode::Auto:
      // Finite carriers and the min / bounded-sum t-norms keep all iterates
      // on a finite value grid, so equality is reached in finitely many
      // steps. Product iterates can descend forever, so go approximate.
      exact = lat->tnorm_kind() != TnormKind::Product;
      break;
  }

  FuzzyRelation z(lat, xs, xps);
  for (std::size_t x = 0; x < xs.size(); ++x)
    for (std::size_t xp = 0; xp < xps.size(); ++xp) {
      Value seed = lat->top();
      for (const auto& [pname, pm] : m.props())
        seed =
            lat->meet(seed, lat->biresiduum(pm.at(x), mp.prop(pname).at(xp)));
      z.set(x, xp, seed);
    }

  SolverResult res{z};
  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    FuzzyRelation next(lat, xs, xps);
    for (std::size_t x = 0; x < xs.size(); ++x)
      for (std::size_t xp = 0; xp < xps.size(); ++xp) {
        Value acc = z.at(x, xp);
        for (const auto& [aname, rm] : m.actions()) {
          const FuzzyRelation& rmp = mp.action(aname);
          for (std::size_t y = 0; y < xs.size(); ++y) {
            Value best = lat->bot();
            for (std::size_t yp = 0; yp < xps.size(); ++yp)
              best = lat->join(best, lat->tnorm(rmp.at(xp, yp), z.at(y, yp)));
            acc = lat->meet(acc, lat->residuum(rm.at(x, y), best));
          }
          for (std::size_t yp = 0; yp < xps.size(); ++yp) {
            Value best = lat->bot();
            for (std::size_t y = 0; y < xs.size(); ++y)
              best = lat->join(best, lat->tnorm(rm.at(x, y), z.at(y, yp)));
            acc = lat->meet(acc, lat->residuum(rmp.at(xp, yp), best));
          }
        }
        next.set(x, xp, acc);
      }

    mpq_class delta = z.sup_norm_distance(next);
    res.trace.emplace_back(iter, delta);
    res.iterations = iter;
    bool done = exact ? z.eq(next) : (delta <= cfg.tolerance);
    z = std::move(next);
    if (done) {
      res.relation = z;
      res.converged = true;
      res.exact = exact;
      return res;
    }
  }
  res.relation = z;
  res.converged = false;
  res.exact = exact;
  return res;
}

BisimReport closure_check(const KripkeModel& m, const KripkeModel& mp,
                          const KripkeModel& mpp, const FuzzyRelation& z1,
                          const FuzzyRelation& z2) {
  BisimReport rep;
  rep.absorb(check_bisimulation(mp, m, z1.converse()), "converse");
  rep.absorb(check_bisimulation(m, mpp, compose(z1, z2)), "compose");
  if (m.lattice()->is_linear()) {
    FuzzyRelation zero(m.lattice(), m.states(), mp.states());
    std::vector<FuzzyRelation> family{z1, zero};
    rep.absorb(check_bisimulation(m, mp, sup_relations(family)), "sup");
  }
  return rep;
}

}  // namespace fuzzbis
