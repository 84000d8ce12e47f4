#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuzzbis/cli.hpp"
#include "helpers.hpp"

using namespace fuzzbis;

namespace {

const std::string kData = FUZZBIS_DATA_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

}  // namespace

TEST_CASE("eval prints single values, full maps and decimals") {
  CliRun r = run({"eval", "--model", data("ex22.json"), "--formula", "<r>p",
                  "--at", "u"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "7/10\n");

  r = run({"eval", "--model", data("ex22.json"), "--formula", "<r>p", "--at",
           "u", "--decimal", "3"});
  CHECK(r.out == "0.700\n");

  r = run({"eval", "--model", data("ex22.json"), "--formula", "p"});
  CHECK(r.code == kExitOk);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["v"] == "1/2");

  r = run({"eval", "--model", data("ex22.json"), "--program", "r*"});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).contains("entries"));
}

TEST_CASE("eval rejects bad invocations with the usage exit code") {
  CHECK(run({"eval", "--model", data("ex22.json")}).code == kExitUsage);
  CHECK(run({"eval", "--model", data("ex22.json"), "--formula", "p",
             "--program", "r"})
            .code == kExitUsage);
  CHECK(run({"eval", "--model", data("nope.json"), "--formula", "p"}).code ==
        kExitUsage);
  CHECK(run({"eval", "--model", data("ex22.json"), "--formula", "p /\\"})
            .code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("the lattice flag overrides the document's lattice") {
  CliRun g = run({"eval", "--model", data("ex22.json"), "--formula", "[r]p",
                  "--at", "u", "--lattice", "lukasiewicz"});
  CHECK(g.out == "9/10\n");
  CliRun p = run({"eval", "--model", data("ex22.json"), "--formula", "[r]p",
                  "--at", "u", "--lattice", "product"});
  CHECK(p.out == "5/6\n");
}

TEST_CASE("the environment lattice is only a fallback") {
  // a model without a lattice of its own
  auto doc = nlohmann::json::parse(std::ifstream(data("ex22.json")));
  doc.erase("lattice");
  std::string path = (std::filesystem::temp_directory_path() /
                      "fuzzbis_cli_nolat.json").string();
  std::ofstream(path) << doc.dump();

  unsetenv("FUZZBIS_LATTICE");
  CHECK(run({"eval", "--model", path, "--formula", "p", "--at", "u"}).code ==
        kExitUsage);
  setenv("FUZZBIS_LATTICE", "lukasiewicz", 1);
  CliRun r = run({"eval", "--model", path, "--formula", "~p", "--at", "u"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "1/10\n");
  // the document's own lattice still wins over the environment
  CliRun r2 = run({"eval", "--model", data("ex22.json"), "--formula", "~p",
                   "--at", "u"});
  CHECK(r2.out == "0\n");  // godel negation
  unsetenv("FUZZBIS_LATTICE");
}

TEST_CASE("bisim-check distinguishes holding and violated relations") {
  // the 9/10 relation is the greatest bisimulation under the bounded-sum
  // t-norm but overshoots under the product t-norm
  CliRun ok = run({"bisim-check", "--left", data("remark45_m.json"), "--right",
                   data("remark45_mp.json"), "--relation",
                   data("remark45_z_luk.json"), "--lattice", "lukasiewicz"});
  CHECK(ok.code == kExitOk);
  CHECK(nlohmann::json::parse(ok.out)["holds"] == true);

  CliRun bad = run({"bisim-check", "--left", data("remark45_m.json"),
                    "--right", data("remark45_mp.json"), "--relation",
                    data("remark45_z_luk.json"), "--lattice", "product"});
  CHECK(bad.code == kExitViolated);
  CHECK(nlohmann::json::parse(bad.out)["holds"] == false);

  CliRun rel = run({"bisim-check", "--left", data("remark45_m.json"),
                    "--right", data("remark45_mp.json"), "--relation",
                    data("remark45_z_luk.json"), "--lattice", "lukasiewicz",
                    "--relational"});
  CHECK(rel.code == kExitOk);
}

TEST_CASE("bisim-greatest reports the relation, trace and convergence") {
  std::string trace = (std::filesystem::temp_directory_path() /
                       "fuzzbis_cli_trace.csv").string();
  CliRun r = run({"bisim-greatest", "--left", data("ex33_m.json"), "--right",
                  data("ex33_mp.json"), "--lattice", "product", "--trace",
                  trace});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("5/8") != std::string::npos);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["converged"] == true);
  std::ifstream tf(trace);
  std::string header;
  std::getline(tf, header);
  CHECK(header == "iteration,delta");

  CliRun capped = run({"bisim-greatest", "--left", data("ex33_m.json"),
                       "--right", data("ex33_mp.json"), "--lattice", "product",
                       "--mode", "approximate", "--max-iterations", "1"});
  CHECK(capped.code == kExitNoConvergence);

  // a model over the (non-linear) diamond lattice makes the solver refuse
  nlohmann::json dm;
  dm["states"] = {"x"};
  dm["props"]["p"] = {{"x", "a"}};
  dm["actions"]["r"] = nlohmann::json::array();
  std::string dpath = (std::filesystem::temp_directory_path() /
                       "fuzzbis_cli_diamond_model.json").string();
  std::ofstream(dpath) << dm.dump();
  CliRun refused = run({"bisim-greatest", "--left", dpath, "--right", dpath,
                        "--lattice", data("lattice_diamond.json")});
  CHECK(refused.code == kExitUsage);
  CHECK(refused.err.find("refused") != std::string::npos);
  CHECK(refused.err.find("linear") != std::string::npos);
}

TEST_CASE("invariance gating refusal names the failed condition") {
  std::vector<std::string> base{
      "invariance", "--left", data("remark45_m.json"), "--right",
      data("remark45_mp.json"), "--relation", data("remark45_z_luk.json"),
      "--formula", "p -> q"};
  CliRun refused = run(base);
  CHECK(refused.code == kExitUsage);
  CHECK(refused.err.find("heyting") != std::string::npos);

  base.push_back("--override-gating");
  CliRun shown = run(base);
  CHECK(shown.code == kExitViolated);
  auto doc = nlohmann::json::parse(shown.out);
  CHECK(doc["holds"] == false);
}

TEST_CASE("lattice-laws needs a lattice and reports its run") {
  CHECK(run({"lattice-laws"}).code == kExitUsage);
  CliRun r = run({"lattice-laws", "--lattice", "godel", "--samples", "200"});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["passed"] == true);
  CliRun d = run({"lattice-laws", "--lattice", data("lattice_diamond.json")});
  CHECK(d.code == kExitOk);
  CHECK(nlohmann::json::parse(d.out)["exhaustive"] == true);
}

TEST_CASE("reports can be redirected to a file") {
  std::string path = (std::filesystem::temp_directory_path() /
                      "fuzzbis_cli_out.json").string();
  CliRun r = run({"eval", "--model", data("ex22.json"), "--formula", "p",
                  "--output", path});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  auto doc = nlohmann::json::parse(std::ifstream(path));
  CHECK(doc["u"] == "9/10");
}

TEST_CASE("the bundled manifest runs clean end to end") {
  auto previous = std::filesystem::current_path();
  std::filesystem::current_path(kData);
  CliRun r = run({"suite", "--manifest", "manifest.json"});
  std::filesystem::current_path(previous);
  REQUIRE(r.code == kExitOk);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["jobs"].size() == 20);
  for (const auto& job : doc["jobs"]) {
    CAPTURE(job["name"].get<std::string>());
    CHECK(job["ok"] == true);
  }
}

TEST_CASE("a broken manifest path is a usage error") {
  CHECK(run({"suite", "--manifest", data("missing_manifest.json")}).code ==
        kExitUsage);
  CHECK(run({"suite"}).code == kExitUsage);
}
