#include "fuzzbis/laws.hpp"

#include <random>

namespace fuzzbis {

namespace {

// Each law reads the tuple as (x, x', y, y', z).
std::vector<Law> build_catalogue() {
  using A = std::array<Value, 5>;
  std::vector<Law> laws;
  auto add = [&](std::string name,
                 std::function<bool(const Lattice&, const A&)> f,
                 bool heyting = false) {
    laws.push_back({std::move(name), heyting, std::move(f)});
  };

  add("adjunction", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.tnorm(x, y), z) == l.leq(x, l.residuum(y, z));
  });
  add("tnorm-monotone", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &xp = v[1], &y = v[2], &yp = v[3];
    if (!(l.leq(x, xp) && l.leq(y, yp))) return true;
    return l.leq(l.tnorm(x, y), l.tnorm(xp, yp));
  });
  add("residuum-antitone-monotone", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &xp = v[1], &y = v[2], &yp = v[3];
    if (!(l.leq(xp, x) && l.leq(y, yp))) return true;
    return l.leq(l.residuum(x, y), l.residuum(xp, yp));
  });
  add("residuum-top-iff-leq", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2];
    return l.leq(x, y) == l.eq(l.residuum(x, y), l.top());
  });
  add("tnorm-zero", [](const Lattice& l, const A& v) {
    return l.eq(l.tnorm(v[0], l.bot()), l.bot());
  });
  add("tnorm-join-distributive", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.eq(l.tnorm(x, l.join(y, z)),
                l.join(l.tnorm(x, y), l.tnorm(x, z)));
  });
  add("modus-ponens", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2];
    return l.leq(l.tnorm(x, l.residuum(x, y)), y);
  });
  add("tnorm-residuum-exchange", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.tnorm(x, l.residuum(y, z)),
                 l.residuum(l.residuum(x, y), z));
  });
  add("tnorm-biresiduum-exchange", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.tnorm(x, l.biresiduum(y, z)),
                 l.residuum(l.residuum(x, y), z));
  });
  add("biresiduum-tnorm-shift", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.tnorm(x, l.biresiduum(y, z)),
                 l.biresiduum(y, l.tnorm(x, z)));
  });
  add("residuum-exchange", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.eq(l.residuum(x, l.residuum(y, z)),
                l.residuum(y, l.residuum(x, z)));
  });
  add("residuum-currying", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.residuum(x, l.residuum(y, z)),
                 l.residuum(l.tnorm(x, y), z));
  });
  add("residuum-biresiduum-currying", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.residuum(x, l.biresiduum(y, z)),
                 l.residuum(l.tnorm(x, y), z));
  });
  add("residuum-transitive", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.tnorm(l.residuum(x, y), l.residuum(y, z)),
                 l.residuum(x, z));
  });
  add("biresiduum-transitive", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.tnorm(l.biresiduum(x, y), l.biresiduum(y, z)),
                 l.biresiduum(x, z));
  });
  add("meet-congruence", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &xp = v[1], &y = v[2], &yp = v[3];
    return l.leq(l.meet(l.biresiduum(x, xp), l.biresiduum(y, yp)),
                 l.biresiduum(l.meet(x, y), l.meet(xp, yp)));
  });
  add("join-congruence", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &xp = v[1], &y = v[2], &yp = v[3];
    return l.leq(l.meet(l.biresiduum(x, xp), l.biresiduum(y, yp)),
                 l.biresiduum(l.join(x, y), l.join(xp, yp)));
  });
  add("residuum-left-congruence", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.biresiduum(x, y),
                 l.biresiduum(l.residuum(z, x), l.residuum(z, y)));
  });
  add("residuum-right-congruence", [](const Lattice& l, const A& v) {
    const auto &x = v[0], &y = v[2], &z = v[4];
    return l.leq(l.biresiduum(x, y),
                 l.biresiduum(l.residuum(x, z), l.residuum(y, z)));
  });
  add(
      "implication-congruence",
      [](const Lattice& l, const A& v) {
        const auto &x = v[0], &xp = v[1], &y = v[2], &yp = v[3];
        return l.leq(l.meet(l.biresiduum(x, xp), l.biresiduum(y, yp)),
                     l.biresiduum(l.residuum(x, y), l.residuum(xp, yp)));
      },
      /*heyting=*/true);
  add(
      "biresiduum-cancellation",
      [](const Lattice& l, const A& v) {
        const auto &x = v[0], &y = v[2], &z = v[4];
        if (!l.leq(x, l.biresiduum(y, z))) return true;
        return l.eq(l.tnorm(x, y), l.tnorm(x, z));
      },
      /*heyting=*/true);
  return laws;
}

}  // namespace

const std::vector<Law>& law_catalogue() {
  static const std::vector<Law> laws = build_catalogue();
  return laws;
}

LawSuiteReport run_law_suite(const LatticePtr& lattice, std::size_t samples,
                             std::uint64_t seed) {
  const auto& laws = law_catalogue();
  LawSuiteReport rep;
  rep.heyting_included = lattice->is_heyting();

  auto run_case = [&](const std::array<Value, 5>& tuple) {
    ++rep.cases_checked;
    for (const Law& law : laws) {
      if (law.heyting_only && !lattice->is_heyting()) continue;
      if (!law.check(*lattice, tuple)) {
        std::vector<std::string> printed;
        for (const Value& v : tuple) printed.push_back(lattice->str(v));
        rep.violations.push_back({law.name, std::move(printed)});
      }
    }
  };
  for (const Law& law : laws)
    if (!law.heyting_only || lattice->is_heyting()) ++rep.laws_checked;

  constexpr std::size_t kExhaustiveGuard = 200000;
  std::size_t n = lattice->is_finite() ? lattice->size() : 0;
  if (lattice->is_finite() && n * n * n * n * n <= kExhaustiveGuard) {
    rep.exhaustive = true;
    std::array<Value, 5> t{lattice->bot(), lattice->bot(), lattice->bot(),
                           lattice->bot(), lattice->bot()};
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d)
            for (std::size_t e = 0; e < n; ++e) {
              t = {lattice->element_at(a), lattice->element_at(b),
                   lattice->element_at(c), lattice->element_at(d),
                   lattice->element_at(e)};
              run_case(t);
            }
    return rep;
  }

  std::mt19937_64 rng(seed);
  auto draw = [&]() -> Value {
    if (lattice->is_finite())
      return lattice->element_at(rng() % lattice->size());
    unsigned long den = 1 + rng() % 32;
    unsigned long num = rng() % (den + 1);
    return lattice->make(mpq_class(num, den));
  };
  for (std::size_t i = 0; i < samples; ++i)
    run_case({draw(), draw(), draw(), draw(), draw()});
  return rep;
}

nlohmann::json LawSuiteReport::to_json() const {
  nlohmann::json out;
  out["laws_checked"] = laws_checked;
  out["cases_checked"] = cases_checked;
  out["exhaustive"] = exhaustive;
  out["heyting_included"] = heyting_included;
  out["passed"] = passed();
  auto arr = nlohmann::json::array();
  for (const auto& v : violations)
    arr.push_back({{"law", v.law}, {"values", v.values}});
  out["violations"] = std::move(arr);
  return out;
}

}  // namespace fuzzbis
