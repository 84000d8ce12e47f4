#include "fuzzbis/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzbis/automata.hpp"
#include "fuzzbis/hm.hpp"
#include "fuzzbis/laws.hpp"

namespace fuzzbis {

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
  return doc;
}

/// A lattice option value is a builtin name ("godel", "chain:4", ...), a path
/// to a lattice JSON file, or inline JSON.
LatticePtr resolve_lattice(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{')
    return Lattice::from_spec(nlohmann::json::parse(spec));
  if (std::ifstream probe(spec); probe) return Lattice::from_spec(read_json_file(spec));
  return Lattice::by_name(spec);
}

/// --lattice overrides a model/automaton document; FUZZBIS_LATTICE only fills
/// the gap when the document names no lattice.
LatticePtr fallback_lattice() {
  const char* env = std::getenv("FUZZBIS_LATTICE");
  if (env && *env) return resolve_lattice(env);
  return nullptr;
}

KripkeModel load_model_cli(const std::string& path,
                           const std::string& lattice_override) {
  nlohmann::json doc = read_json_file(path);
  if (!lattice_override.empty()) {
    doc.erase("lattice");
    return KripkeModel::from_json(doc, resolve_lattice(lattice_override));
  }
  return KripkeModel::from_json(doc, fallback_lattice());
}

FuzzyAutomaton load_automaton_cli(const std::string& path,
                                  const std::string& lattice_override) {
  nlohmann::json doc = read_json_file(path);
  if (!lattice_override.empty()) {
    doc.erase("lattice");
    return FuzzyAutomaton::from_json(doc, resolve_lattice(lattice_override));
  }
  return FuzzyAutomaton::from_json(doc, fallback_lattice());
}

std::string decimal_string(const mpq_class& q, unsigned digits) {
  mpz_class scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  mpz_class num = q.get_num() * scale * 2 + q.get_den();  // round half up
  mpz_class scaled = num / (q.get_den() * 2);
  std::string s = scaled.get_str();
  if (digits == 0) return s;
  while (s.size() <= digits) s.insert(s.begin(), '0');
  s.insert(s.size() - digits, ".");
  return s;
}

std::string format_value(const Lattice& lat, const Value& v, int decimals) {
  if (decimals >= 0 && !v.finite_carrier())
    return decimal_string(v.rational(), static_cast<unsigned>(decimals));
  return lat.str(v);
}

void write_output(const std::string& path, const nlohmann::json& doc,
                  std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write output file '" + path + "'");
    f << doc.dump(2) << "\n";
  }
}

void write_trace(const std::string& path,
                 const std::vector<std::pair<std::size_t, mpq_class>>& trace) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write trace file '" + path + "'");
  f << "iteration,delta\n";
  for (const auto& [it, d] : trace)
    f << it << "," << rational_to_string(d) << "\n";
}

SolverConfig make_config(const std::string& mode, const std::string& tolerance,
                         std::size_t max_iterations) {
  SolverConfig cfg;
  if (mode == "exact")
    cfg.mode = SolverMode::Exact;
  else if (mode == "approximate")
    cfg.mode = SolverMode::Approximate;
  else if (mode == "auto")
    cfg.mode = SolverMode::Auto;
  else
    throw ValidationError("unknown solver mode '" + mode + "'");
  if (!tolerance.empty()) cfg.tolerance = parse_rational(tolerance);
  cfg.max_iterations = max_iterations;
  return cfg;
}

int run_suite(const std::string& manifest_path, std::ostream& out,
              std::ostream& err);

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Fuzzy dynamic-logic toolkit: model evaluation, fuzzy "
               "bisimulations, logical-distance oracles, fuzzy automata and "
               "lattice law checking"};
  app.require_subcommand(1);

  std::string lattice_opt, output_path, trace_path;
  std::string mode = "auto", tolerance;
  std::size_t max_iterations = 10000;
  int decimals = -1;

  auto add_common = [&](CLI::App* sub, bool solver = false) {
    sub->add_option("--lattice", lattice_opt,
                    "Lattice name, lattice JSON file, or inline JSON; "
                    "overrides the input documents");
    sub->add_option("--output", output_path, "Write the JSON report here");
    if (solver) {
      sub->add_option("--mode", mode, "Solver mode: auto|exact|approximate");
      sub->add_option("--tolerance", tolerance,
                      "Approximate-mode tolerance (rational)");
      sub->add_option("--max-iterations", max_iterations, "Iteration cap");
      sub->add_option("--trace", trace_path,
                      "Write a CSV convergence trace (iteration,delta)");
    }
  };

  // eval
  std::string model_path, formula_text, program_text, at_state;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula or program");
  eval_cmd->add_option("--model", model_path)->required();
  eval_cmd->add_option("--formula", formula_text);
  eval_cmd->add_option("--program", program_text);
  eval_cmd->add_option("--at", at_state, "Print only this state's value");
  eval_cmd->add_option("--decimal", decimals, "Print decimals with N digits");
  add_common(eval_cmd);

  // bisim-check
  std::string left_path, right_path, relation_path, third_path;
  bool relational = false;
  auto* check_cmd =
      app.add_subcommand("bisim-check", "Check a fuzzy bisimulation");
  check_cmd->add_option("--left", left_path)->required();
  check_cmd->add_option("--right", right_path)->required();
  check_cmd->add_option("--relation", relation_path)->required();
  check_cmd->add_flag("--relational", relational,
                      "Use the relational-composition form of the conditions");
  add_common(check_cmd);

  // bisim-greatest
  auto* greatest_cmd = app.add_subcommand(
      "bisim-greatest", "Compute the greatest fuzzy bisimulation");
  greatest_cmd->add_option("--left", left_path)->required();
  greatest_cmd->add_option("--right", right_path)->required();
  add_common(greatest_cmd, /*solver=*/true);

  // hm
  std::size_t max_depth = 3, max_vectors = 20000;
  auto* hm_cmd = app.add_subcommand(
      "hm", "Compare the bisimulation solver against logical distance");
  hm_cmd->add_option("--left", left_path)->required();
  hm_cmd->add_option("--right", right_path)->required();
  hm_cmd->add_option("--max-depth", max_depth);
  hm_cmd->add_option("--max-vectors", max_vectors);
  add_common(hm_cmd, /*solver=*/true);

  // invariance
  std::string fragment_text;
  bool override_gating = false;
  auto* inv_cmd = app.add_subcommand(
      "invariance", "Check formula invariance under a bisimulation");
  inv_cmd->add_option("--left", left_path)->required();
  inv_cmd->add_option("--right", right_path)->required();
  inv_cmd->add_option("--relation", relation_path)->required();
  inv_cmd->add_option("--formula", formula_text)->required();
  inv_cmd->add_option("--fragment", fragment_text,
                      "Excluded constructors: comma list of union,implies,test");
  inv_cmd->add_flag("--override-gating", override_gating,
                    "Skip the lattice-side gating checks (for demonstrations)");
  add_common(inv_cmd);

  // zigzag
  auto* zig_cmd = app.add_subcommand(
      "zigzag", "Check the program zigzag conditions under a bisimulation");
  zig_cmd->add_option("--left", left_path)->required();
  zig_cmd->add_option("--right", right_path)->required();
  zig_cmd->add_option("--relation", relation_path)->required();
  zig_cmd->add_option("--program", program_text)->required();
  zig_cmd->add_option("--fragment", fragment_text);
  zig_cmd->add_flag("--override-gating", override_gating);
  add_common(zig_cmd);

  // automata-bisim
  auto* abisim_cmd = app.add_subcommand(
      "automata-bisim",
      "Check (with --relation) or compute the greatest forward bisimulation");
  abisim_cmd->add_option("--left", left_path)->required();
  abisim_cmd->add_option("--right", right_path)->required();
  abisim_cmd->add_option("--relation", relation_path);
  add_common(abisim_cmd, /*solver=*/true);

  // automata-corresp
  auto* acorr_cmd = app.add_subcommand(
      "automata-corresp",
      "Cross-check a forward bisimulation against its Kripke counterpart");
  acorr_cmd->add_option("--left", left_path)->required();
  acorr_cmd->add_option("--right", right_path)->required();
  acorr_cmd->add_option("--relation", relation_path)->required();
  add_common(acorr_cmd);

  // lattice-laws
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  auto* laws_cmd =
      app.add_subcommand("lattice-laws", "Run the residuated-lattice law suite");
  laws_cmd->add_option("--samples", samples);
  laws_cmd->add_option("--seed", seed);
  add_common(laws_cmd);

  // suite
  std::string manifest_path;
  auto* suite_cmd =
      app.add_subcommand("suite", "Run every job in a manifest file");
  suite_cmd->add_option("--manifest", manifest_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval_cmd->parsed()) {
      KripkeModel m = load_model_cli(model_path, lattice_opt);
      if (formula_text.empty() == program_text.empty())
        throw ValidationError("eval needs exactly one of --formula/--program");
      Evaluator ev(m);
      if (!program_text.empty()) {
        FuzzyRelation r = ev.eval(*parse_program(program_text, m.lattice()));
        write_output(output_path, r.to_json(), out);
        return kExitOk;
      }
      FuzzySet v = ev.eval(*parse_formula(formula_text, m.lattice()));
      if (!at_state.empty()) {
        out << format_value(*m.lattice(), v.at(at_state), decimals) << "\n";
      } else {
        nlohmann::json doc;
        for (std::size_t i = 0; i < v.size(); ++i)
          doc[v.domain()[i]] = format_value(*m.lattice(), v.at(i), decimals);
        write_output(output_path, doc, out);
      }
      return kExitOk;
    }

    if (check_cmd->parsed()) {
      KripkeModel l = load_model_cli(left_path, lattice_opt);
      KripkeModel r = load_model_cli(right_path, lattice_opt);
      FuzzyRelation z =
          FuzzyRelation::from_json(l.lattice(), read_json_file(relation_path));
      BisimReport rep = relational ? check_relational(l, r, z)
                                   : check_bisimulation(l, r, z);
      write_output(output_path, rep.to_json(), out);
      return rep.holds ? kExitOk : kExitViolated;
    }

    if (greatest_cmd->parsed()) {
      KripkeModel l = load_model_cli(left_path, lattice_opt);
      KripkeModel r = load_model_cli(right_path, lattice_opt);
      SolverResult res =
          greatest_bisimulation(l, r, make_config(mode, tolerance, max_iterations));
      write_trace(trace_path, res.trace);
      nlohmann::json doc;
      doc["relation"] = res.relation.to_json();
      doc["iterations"] = res.iterations;
      doc["converged"] = res.converged;
      doc["exact"] = res.exact;
      write_output(output_path, doc, out);
      return res.converged ? kExitOk : kExitNoConvergence;
    }

    if (hm_cmd->parsed()) {
      KripkeModel l = load_model_cli(left_path, lattice_opt);
      KripkeModel r = load_model_cli(right_path, lattice_opt);
      EnumerationBudget budget;
      budget.max_depth = max_depth;
      budget.max_vectors = max_vectors;
      HmReport rep =
          hm_check(l, r, budget, make_config(mode, tolerance, max_iterations));
      write_output(output_path, rep.to_json(), out);
      if (!rep.solver_converged) return kExitNoConvergence;
      return rep.sound ? kExitOk : kExitViolated;
    }

    if (inv_cmd->parsed()) {
      KripkeModel l = load_model_cli(left_path, lattice_opt);
      KripkeModel r = load_model_cli(right_path, lattice_opt);
      FuzzyRelation z =
          FuzzyRelation::from_json(l.lattice(), read_json_file(relation_path));
      FragmentSpec phi = FragmentSpec::parse(fragment_text);
      InvarianceReport rep =
          invariance_check(l, r, z, *parse_formula(formula_text, l.lattice()),
                           phi, override_gating);
      write_output(output_path, rep.to_json(), out);
      return rep.holds ? kExitOk : kExitViolated;
    }

    if (zig_cmd->parsed()) {
      KripkeModel l = load_model_cli(left_path, lattice_opt);
      KripkeModel r = load_model_cli(right_path, lattice_opt);
      FuzzyRelation z =
          FuzzyRelation::from_json(l.lattice(), read_json_file(relation_path));
      FragmentSpec phi = FragmentSpec::parse(fragment_text);
      BisimReport rep = program_zigzag_check(
          l, r, z, *parse_program(program_text, l.lattice()), phi,
          override_gating);
      write_output(output_path, rep.to_json(), out);
      return rep.holds ? kExitOk : kExitViolated;
    }

    if (abisim_cmd->parsed()) {
      FuzzyAutomaton a = load_automaton_cli(left_path, lattice_opt);
      FuzzyAutomaton b = load_automaton_cli(right_path, lattice_opt);
      if (!relation_path.empty()) {
        FuzzyRelation z = FuzzyRelation::from_json(
            a.lattice(), read_json_file(relation_path));
        BisimReport rep = check_forward_bisimulation(a, b, z);
        write_output(output_path, rep.to_json(), out);
        return rep.holds ? kExitOk : kExitViolated;
      }
      ForwardSolverResult res = greatest_forward_bisimulation(
          a, b, make_config(mode, tolerance, max_iterations));
      write_trace(trace_path, res.core.trace);
      nlohmann::json doc;
      doc["relation"] = res.core.relation.to_json();
      doc["iterations"] = res.core.iterations;
      doc["converged"] = res.core.converged;
      doc["initial_ok"] = res.initial_ok;
      doc["initial_report"] = res.initial_report.to_json();
      write_output(output_path, doc, out);
      if (!res.core.converged) return kExitNoConvergence;
      return res.initial_ok ? kExitOk : kExitViolated;
    }

    if (acorr_cmd->parsed()) {
      FuzzyAutomaton a = load_automaton_cli(left_path, lattice_opt);
      FuzzyAutomaton b = load_automaton_cli(right_path, lattice_opt);
      FuzzyRelation z =
          FuzzyRelation::from_json(a.lattice(), read_json_file(relation_path));
      CorrespondenceReport rep = correspondence_check(a, b, z);
      write_output(output_path, rep.to_json(), out);
      return (rep.direction1_ok && rep.direction2_ok) ? kExitOk
                                                      : kExitViolated;
    }

    if (laws_cmd->parsed()) {
      if (lattice_opt.empty())
        throw ValidationError("lattice-laws requires --lattice");
      LawSuiteReport rep =
          run_law_suite(resolve_lattice(lattice_opt), samples, seed);
      write_output(output_path, rep.to_json(), out);
      return rep.passed() ? kExitOk : kExitViolated;
    }

    if (suite_cmd->parsed()) return run_suite(manifest_path, out, err);

    err << "no command selected\n";
    return kExitUsage;
  } catch (const GatingError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

namespace {

int run_suite(const std::string& manifest_path, std::ostream& out,
              std::ostream& err) {
  nlohmann::json manifest = read_json_file(manifest_path);
  if (!manifest.is_object() || !manifest.contains("jobs"))
    throw ValidationError("manifest needs a 'jobs' array");

  nlohmann::json report;
  auto jobs = nlohmann::json::array();
  bool any_usage = false, any_noconv = false, any_fail = false;
  for (const auto& job : manifest.at("jobs")) {
    std::string name = job.value("name", "");
    std::vector<std::string> jargs;
    for (const auto& a : job.at("args")) jargs.push_back(a.get<std::string>());
    int expect = job.value("expect_exit", 0);

    std::ostringstream job_out, job_err;
    int code = run_cli(jargs, job_out, job_err);
    bool ok = code == expect;
    if (ok && job.contains("expect_output")) {
      std::string got = job_out.str();
      while (!got.empty() && (got.back() == '\n' || got.back() == '\r'))
        got.pop_back();
      ok = got == job.at("expect_output").get<std::string>();
    }
    if (!ok) {
      any_fail = true;
      if (code == kExitUsage) any_usage = true;
      if (code == kExitNoConvergence) any_noconv = true;
    }
    nlohmann::json j;
    j["name"] = name;
    j["exit"] = code;
    j["expected_exit"] = expect;
    j["ok"] = ok;
    if (!job_err.str().empty()) j["stderr"] = job_err.str();
    jobs.push_back(std::move(j));
  }
  report["jobs"] = std::move(jobs);
  report["passed"] = !any_fail;
  out << report.dump(2) << "\n";
  (void)err;
  if (!any_fail) return kExitOk;
  if (any_usage) return kExitUsage;
  if (any_noconv) return kExitNoConvergence;
  return kExitViolated;
}

}  // namespace

}  // namespace fuzzbis
