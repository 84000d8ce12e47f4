#include <doctest.h>

#include <set>

#include "helpers.hpp"

using namespace fuzzbis;
using fuzzbis::testing::val;

namespace {

KripkeModel left_model(const LatticePtr& lat) {
  KripkeModel m(lat, {"u", "v", "w"});
  FuzzySet p(lat, m.states());
  p.set("u", lat->bot());
  p.set("v", val(lat, "1/2"));
  p.set("w", val(lat, "4/5"));
  m.add_prop("p", std::move(p));
  FuzzyRelation r(lat, m.states(), m.states());
  r.set("u", "v", val(lat, "3/5"));
  r.set("u", "w", lat->top());
  m.add_action("r", std::move(r));
  return m;
}

KripkeModel right_model(const LatticePtr& lat) {
  KripkeModel m(lat, {"u'", "v'", "w'"});
  FuzzySet p(lat, m.states());
  p.set("u'", lat->bot());
  p.set("v'", val(lat, "1/2"));
  p.set("w'", val(lat, "4/5"));
  m.add_prop("p", std::move(p));
  FuzzyRelation r(lat, m.states(), m.states());
  r.set("u'", "v'", lat->top());
  r.set("u'", "w'", val(lat, "4/5"));
  m.add_action("r", std::move(r));
  return m;
}

// One-state models whose propositions differ slightly; the gap between the
// greatest bisimulation and the proposition biresidua of *compound* formulas
// is what makes implication and tests unsafe outside Heyting lattices.
KripkeModel tiny_left(const LatticePtr& lat) {
  KripkeModel m(lat, {"v"});
  FuzzySet p(lat, m.states()), q(lat, m.states());
  p.set("v", val(lat, "1/5"));
  q.set("v", val(lat, "1/5"));
  m.add_prop("p", std::move(p));
  m.add_prop("q", std::move(q));
  return m;
}

KripkeModel tiny_right(const LatticePtr& lat) {
  KripkeModel m(lat, {"v'"});
  FuzzySet p(lat, m.states()), q(lat, m.states());
  p.set("v'", val(lat, "3/10"));
  q.set("v'", val(lat, "1/10"));
  m.add_prop("p", std::move(p));
  m.add_prop("q", std::move(q));
  return m;
}

LatticePtr diamond_lattice() {
  auto doc = nlohmann::json::parse(R"({
    "elements": ["0","a","b","1"],
    "leq": [[1,1,1,1],[0,1,0,1],[0,0,1,1],[0,0,0,1]],
    "tnorm": [["0","0","0","0"],["0","a","0","a"],
              ["0","0","b","b"],["0","a","b","1"]]
  })");
  return Lattice::from_json(doc);
}

// independent unrolling of the diamond-fragment grammar, strings only
std::set<std::string> unroll_fKz(const Signature& sig, const LatticePtr& lat,
                                 const std::vector<Value>& pool,
                                 std::size_t depth) {
  std::set<std::string> cur;
  for (const Value& c : pool) cur.insert(to_string(Formula::constant_of(c)));
  for (const auto& p : sig.props) cur.insert(p);
  for (std::size_t d = 0; d < depth; ++d) {
    std::set<std::string> next = cur;
    for (const auto& a : cur)
      for (const auto& b : cur)
        next.insert(to_string(*parse_formula("(" + a + ") /\\ (" + b + ")",
                                             lat)));
    for (const auto& a : cur) {
      for (const Value& c : pool) {
        auto cf = Formula::constant_of(c);
        next.insert(to_string(
            Formula::implies(Formula::constant_of(c),
                             parse_formula("(" + a + ")", lat))));
        next.insert(to_string(
            Formula::implies(parse_formula("(" + a + ")", lat),
                             Formula::constant_of(c))));
      }
      for (const auto& act : sig.actions)
        next.insert(to_string(
            *parse_formula("<" + act + ">(" + a + ")", lat)));
    }
    cur = std::move(next);
  }
  // re-print through the parser so parenthesisation matches the enumerator
  std::set<std::string> out;
  for (const auto& s : cur) out.insert(to_string(parse_formula(s, lat)));
  return out;
}

}  // namespace

TEST_CASE("diamond-fragment enumeration: shallow levels by hand") {
  auto g = Lattice::godel();
  Signature sig{{"p"}, {"r"}};
  EnumerationBudget b0;
  b0.max_depth = 0;
  auto level0 = enumerate_fKz(b0, sig, g);
  std::set<std::string> names;
  for (const auto& f : level0) names.insert(to_string(*f));
  CHECK(names == std::set<std::string>{"0", "1", "p"});

  EnumerationBudget b1;
  b1.max_depth = 1;
  auto level1 = enumerate_fKz(b1, sig, g);
  std::set<std::string> names1;
  for (const auto& f : level1) {
    CHECK(is_fKz(*f));
    CHECK(names1.insert(to_string(*f)).second);  // no duplicates
  }
  CHECK(names1.count("<r>p") == 1);
  CHECK(names1.count("p /\\ p") == 1);
  CHECK(names1.count("0 -> p") == 1);
  CHECK(names1.count("p -> 1") == 1);
  CHECK_FALSE(names1.count("p \\/ p"));
}

TEST_CASE("enumeration matches an independent grammar unrolling") {
  auto g = Lattice::godel();
  Signature sig{{"p"}, {"r"}};
  std::vector<Value> pool{g->bot(), g->top()};
  for (std::size_t depth : {std::size_t{1}, std::size_t{2}}) {
    EnumerationBudget b;
    b.max_depth = depth;
    b.constant_pool = pool;
    auto got = enumerate_fKz(b, sig, g);
    std::set<std::string> got_names;
    for (const auto& f : got) got_names.insert(to_string(*f));
    CHECK(got_names == unroll_fKz(sig, g, pool, depth));
  }
}

TEST_CASE("the default constant pool is closed over the model's values") {
  auto g = Lattice::godel();
  KripkeModel m = left_model(g), mp = right_model(g);
  auto pool = default_constant_pool(m, mp);
  auto has = [&](const char* t) {
    for (const Value& v : pool)
      if (g->eq(v, val(g, t))) return true;
    return false;
  };
  for (const char* t : {"0", "1", "1/2", "3/5", "4/5"}) CHECK(has(t));
  CHECK(pool.size() <= 32);
  // min-based operations cannot leave the set of occurring values
  for (const Value& a : pool)
    for (const Value& b : pool) {
      CHECK(has(g->str(g->residuum(a, b)).c_str()));
      CHECK(has(g->str(g->meet(a, b)).c_str()));
    }
}

TEST_CASE("logical distance reaches the greatest bisimulation (min t-norm)") {
  auto g = Lattice::godel();
  KripkeModel m = left_model(g), mp = right_model(g);
  SolverResult sol = greatest_bisimulation(m, mp);
  EnumerationBudget budget;  // depth 3
  DistanceMatrix d = logical_distance(m, mp, budget);
  CHECK_FALSE(d.capped);
  CHECK(d.distances.eq(sol.relation));
  CHECK(g->eq(d.distances.at("u", "u'"), val(g, "3/5")));
  CHECK(g->eq(d.distances.at("v", "u'"), g->bot()));

  // each witness attains its entry: biresiduum of its two values equals D
  Evaluator em(m), emp(mp);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t xp = 0; xp < 3; ++xp) {
      const FormulaPtr& w = d.witness(x, xp);
      if (!w) {
        CHECK(g->eq(d.distances.at(x, xp), g->top()));
        continue;
      }
      CHECK(is_fKz(*w));
      Value got = g->biresiduum(em.eval(*w).at(x), emp.eval(*w).at(xp));
      CHECK(g->eq(got, d.distances.at(x, xp)));
    }

  // depth snapshots only tighten
  for (std::size_t k = 1; k < d.by_depth.size(); ++k)
    CHECK(leq_relations(d.by_depth[k], d.by_depth[k - 1]));
  auto dumped = d.to_json();
  CHECK(dumped.contains("pairs"));
  CHECK(dumped["capped"] == false);
}

TEST_CASE("hm_check: matched on the min t-norm, sound everywhere") {
  EnumerationBudget budget;
  auto g = Lattice::godel();
  HmReport hg = hm_check(left_model(g), right_model(g), budget);
  CHECK(hg.solver_converged);
  CHECK(hg.sound);
  CHECK(hg.matched);
  CHECK(hg.max_gap == 0);
  auto j = hg.to_json();
  CHECK(j["matched"] == true);

  for (const auto& lat : {Lattice::lukasiewicz(), Lattice::product()}) {
    HmReport h = hm_check(left_model(lat), right_model(lat), budget);
    CHECK(h.sound);  // the distance never undercuts the solver
  }
}

TEST_CASE("one-state pair: depth-0 distance equals the proposition biresidua") {
  auto l = Lattice::lukasiewicz();
  KripkeModel m = tiny_left(l), mp = tiny_right(l);
  EnumerationBudget budget;
  budget.max_depth = 0;
  DistanceMatrix d = logical_distance(m, mp, budget);
  CHECK(l->eq(d.distances.at("v", "v'"), val(l, "9/10")));
  CHECK(l->eq(greatest_bisimulation(m, mp).relation.at("v", "v'"),
              val(l, "9/10")));
}

TEST_CASE("gating: implication and tests need a Heyting lattice") {
  FragmentSpec full = FragmentSpec::full();
  FragmentSpec safe = FragmentSpec::parse("implies, test");
  auto l = Lattice::lukasiewicz();
  CHECK_NOTHROW(check_gating(*Lattice::godel(), full));
  CHECK_NOTHROW(check_gating(*l, safe));
  try {
    check_gating(*l, full);
    FAIL("expected a refusal");
  } catch (const GatingError& e) {
    CHECK(e.condition() == "heyting");
  }
  try {
    check_gating(*Lattice::product(), FragmentSpec::parse("union, implies"));
    FAIL("expected a refusal");
  } catch (const GatingError& e) {
    CHECK(e.condition() == "heyting");  // tests still allowed -> heyting first
  }
}

TEST_CASE("gating: union needs a linear lattice") {
  auto d = diamond_lattice();
  CHECK_NOTHROW(check_gating(*d, FragmentSpec::parse("union")));
  try {
    check_gating(*d, FragmentSpec::parse("implies, test"));
    FAIL("expected a refusal");
  } catch (const GatingError& e) {
    CHECK(e.condition() == "linearity");
  }
}

TEST_CASE("overriding the gate exposes real invariance failures") {
  // bounded-sum residuum: p -> q differs across the pair by more than the
  // greatest bisimulation allows
  auto l = Lattice::lukasiewicz();
  KripkeModel m = tiny_left(l), mp = tiny_right(l);
  FuzzyRelation z = greatest_bisimulation(m, mp).relation;
  FormulaPtr f = parse_formula("p -> q", l);
  CHECK_THROWS_AS(
      invariance_check(m, mp, z, *f, FragmentSpec::full()), GatingError);
  InvarianceReport rep =
      invariance_check(m, mp, z, *f, FragmentSpec::full(), true);
  CHECK_FALSE(rep.holds);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(l->eq(rep.violations[0].lhs == "9/10" ? val(l, "9/10") : l->bot(),
              val(l, "9/10")));
  // lhs Z = 9/10 exceeds the biresiduum 4/5 of the implication's values
  CHECK(rep.violations[0].rhs == "4/5");

  // product residuum: a test program inside a box shows the same effect
  auto p = Lattice::product();
  KripkeModel pm = tiny_left(p), pmp = tiny_right(p);
  FuzzyRelation pz = greatest_bisimulation(pm, pmp).relation;
  CHECK(p->eq(pz.at("v", "v'"), val(p, "1/2")));
  FormulaPtr bf = parse_formula("[p?]q", p);
  InvarianceReport prep =
      invariance_check(pm, pmp, pz, *bf, FragmentSpec::full(), true);
  CHECK_FALSE(prep.holds);
  CHECK(prep.violations[0].rhs == "1/3");
}

TEST_CASE("formulas outside the fragment are rejected up front") {
  auto g = Lattice::godel();
  KripkeModel m = left_model(g), mp = right_model(g);
  FuzzyRelation z(g, m.states(), mp.states());
  FormulaPtr f = parse_formula("p -> p", g);
  CHECK_THROWS_AS(
      invariance_check(m, mp, z, *f, FragmentSpec::parse("implies")),
      ValidationError);
}

TEST_CASE("diamond-fragment formulas are invariant under any bisimulation") {
  for (const auto& lat : {Lattice::godel(), Lattice::lukasiewicz(),
                          Lattice::product()}) {
    KripkeModel m = left_model(lat), mp = right_model(lat);
    FuzzyRelation z = greatest_bisimulation(m, mp).relation;
    EnumerationBudget b;
    b.max_depth = 2;
    for (const auto& f : enumerate_fKz(b, signature_of(m), lat))
      CHECK(invariance_check(m, mp, z, *f, FragmentSpec::full(), true).holds);
  }
}

TEST_CASE("random formulas in a lattice's legal fragment are invariant") {
  std::mt19937_64 rng(99);
  struct Setup {
    LatticePtr lat;
    FragmentSpec phi;
  };
  const Setup setups[] = {
      {Lattice::godel(), FragmentSpec::full()},
      {Lattice::lukasiewicz(), FragmentSpec::parse("implies, test")},
      {Lattice::product(), FragmentSpec::parse("implies, test")},
  };
  for (const auto& s : setups) {
    auto grid = fuzzbis::testing::value_grid(s.lat);
    for (int i = 0; i < 20; ++i) {
      KripkeModel m = fuzzbis::testing::random_model(rng, s.lat, 3, grid);
      KripkeModel mp = fuzzbis::testing::random_model(rng, s.lat, 3, grid);
      FuzzyRelation z = greatest_bisimulation(m, mp).relation;
      FormulaPtr f =
          fuzzbis::testing::random_formula(rng, s.lat, s.phi, grid, 3);
      CAPTURE(s.lat->name());
      CAPTURE(to_string(*f));
      CHECK(invariance_check(m, mp, z, *f, s.phi).holds);
    }
  }
}

TEST_CASE("zigzag for compound programs") {
  auto g = Lattice::godel();
  KripkeModel m = left_model(g), mp = right_model(g);
  FuzzyRelation z = greatest_bisimulation(m, mp).relation;
  for (const char* prog : {"r", "r*", "r ; r", "r | r", "p? ; r"}) {
    CAPTURE(prog);
    BisimReport rep = program_zigzag_check(m, mp, z, *parse_program(prog, g),
                                           FragmentSpec::full());
    CHECK(rep.holds);
  }
  FuzzyRelation bad = z;
  bad.set("u", "u'", g->top());
  BisimReport rep = program_zigzag_check(m, mp, bad, *parse_program("r", g),
                                         FragmentSpec::full());
  CHECK_FALSE(rep.holds);
  for (const auto& v : rep.violations)
    CHECK((v.condition == "forth" || v.condition == "back"));
}

TEST_CASE("the vector cap marks results as upper bounds") {
  auto g = Lattice::godel();
  KripkeModel m = left_model(g), mp = right_model(g);
  EnumerationBudget tight;
  tight.max_vectors = 4;
  DistanceMatrix d = logical_distance(m, mp, tight);
  CHECK(d.capped);
  FuzzyRelation best = greatest_bisimulation(m, mp).relation;
  CHECK(leq_relations(best, d.distances));  // still an upper bound
}
