#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "psc/psccli/run.hpp"

using namespace psc;

namespace {

std::string source_dir() {
  const char* s = std::getenv("PSC_SOURCE_DIR");
  return s ? s : PSC_SOURCE_DIR;
}

std::string fixture(const std::string& name) { return source_dir() + "/fixtures/" + name; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"({
  "name": "circle",
  "coordinates": ["x", "y"],
  "parameters": ["s"],
  "assumptions": ["s > 0"],
  "generators": [["-y", "x"]],
  "point": {"x": "1", "y": "0"}
})";

const char* psc_binary() {
  const char* bin = std::getenv("PSC_BINARY");
  return bin ? bin : PSC_BINARY;
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(psc_binary()) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Problem, LoadsHomogeneous) {
  const ProblemSpec s = load_problem(fixture("homogeneous.json"));
  EXPECT_EQ(s.generators.size(), 5u);
  EXPECT_EQ(s.reduced_fields.size(), 4u);
  EXPECT_NE(std::find(s.parameters.begin(), s.parameters.end(), "s"), s.parameters.end());
  EXPECT_TRUE(s.chi.has_value());
  EXPECT_EQ(s.lagrangian, LagrangianKind::EinsteinHilbert);
}

TEST(Problem, LoadsPlaneWaveAtoms) {
  const ProblemSpec s = load_problem(fixture("planewave.json"));
  ASSERT_TRUE(s.point.has_value());
  std::vector<std::string> atoms;
  for (const auto& [k, v] : s.point->atoms) atoms.push_back(v.name());
  std::sort(atoms.begin(), atoms.end());
  EXPECT_EQ(atoms, (std::vector<std::string>{"P0", "P0p", "Q0", "Q0p"}));
  EXPECT_EQ(s.reduced_fields, (std::vector<std::string>{"a", "b"}));
}

TEST(Problem, UnknownKeyNamesKeyAndPosition) {
  std::string text = read(fixture("homogeneous.json"));
  text.replace(text.find("\"generators\""), 12, "\"generaotrs\"");
  try {
    parse_problem(text, "bad.json");
    FAIL();
  } catch (const ProblemError& e) {
    EXPECT_NE(std::string(e.what()).find("generaotrs"), std::string::npos);
    EXPECT_EQ(e.pointer(), "/generaotrs");
    EXPECT_GT(e.line(), 1u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(Problem, RejectsTwoQuotientCoordinates) {
  std::string text = read(fixture("spherical.json"));
  const std::string from = "\"quotient_coordinates\": [\"r\"]";
  text.replace(text.find(from), from.size(), "\"quotient_coordinates\": [\"r\", \"t\"]");
  try {
    parse_problem(text, "q.json");
    FAIL();
  } catch (const ProblemError& e) {
    EXPECT_EQ(e.pointer(), "/quotient_coordinates");
  }
}

TEST(Problem, ExpressionErrorsCarryPositions) {
  std::string text = kSmall;
  text.replace(text.find("\"-y\""), 4, "\"-y +\"");
  try {
    parse_problem(text, "t.json");
    FAIL();
  } catch (const ProblemError& e) {
    EXPECT_EQ(e.pointer(), "/generators/0/0");
    EXPECT_EQ(e.line(), 6u);
  }
  std::string unresolved = kSmall;
  unresolved.replace(unresolved.find("\"-y\""), 4, "\"-w\"");
  try {
    parse_problem(unresolved, "t.json");
    FAIL();
  } catch (const ProblemError& e) {
    EXPECT_NE(std::string(e.what()).find("unresolved symbol 'w'"), std::string::npos);
  }
  EXPECT_THROW(parse_problem("{\"name\": ", "t.json"), ProblemError);
}

TEST(Problem, SetSubstitutesAndChecksAssumptions) {
  EXPECT_NO_THROW(parse_problem(kSmall, "t.json", {{"s", "2"}}));
  EXPECT_THROW(parse_problem(kSmall, "t.json", {{"s", "-1"}}), ProblemError);
  EXPECT_THROW(parse_problem(kSmall, "t.json", {{"t", "1"}}), ProblemError);
  const ProblemSpec s = parse_problem(kSmall, "t.json", {{"s", "3"}});
  EXPECT_EQ(s.substitutions.size(), 1u);
}

TEST(Problem, JsonPositions) {
  const auto pos = json_positions("{\n  \"a\": [1, {\"b\": \"x\"}]\n}");
  EXPECT_EQ(pos.at("/a"), 4u);
  EXPECT_TRUE(pos.count("/a/1/b"));
}

TEST(Run, HomogeneousVerdicts) {
  RunOptions o;
  EXPECT_EQ(run("check-psc", load_problem(fixture("homogeneous.json"), {{"s", "1"}}), o)["verdict"],
            "condition (i) fails: H^4(G,G_x) = 0");
  const auto r0 = run("check-psc", load_problem(fixture("homogeneous.json"), {{"s", "0"}}), o);
  EXPECT_EQ(r0["verdict"], "PSC holds (local test)");
  EXPECT_TRUE(r0["discrepancies"]["agrees"].get<bool>());
  const auto generic = run("cohomology", load_problem(fixture("homogeneous.json")), o);
  EXPECT_EQ(generic["condition1"]["dimension"], 0);
  EXPECT_EQ(generic["condition1"]["degenerate_cases"][0]["when"], "s = 0");
  EXPECT_EQ(generic["condition1"]["degenerate_cases"][0]["dimension"], 1);
  EXPECT_TRUE(generic["verdict"].is_null());
}

TEST(Run, PlaneWaveVerdict) {
  const auto r = run("check-psc", load_problem(fixture("planewave.json")));
  EXPECT_EQ(r["verdict"], "condition (ii) fails: intersection dimension 1");
  EXPECT_EQ(r["condition2"]["intersection"][0], "∂v⊗∂v");
  EXPECT_TRUE(r["condition1"]["pass"].get<bool>());
  EXPECT_EQ(r["reduced_lagrangian"]["density"], "0");
}

TEST(Run, SphericalAndBianchi) {
  EXPECT_EQ(run("check-psc", load_problem(fixture("spherical.json")))["verdict"], "PSC holds (local test)");
  EXPECT_EQ(run("check-psc", load_problem(fixture("bianchi_v.json")))["verdict"], "condition (i) fails: H^3(G,G_x) = 0");
  EXPECT_EQ(run("check-psc", load_problem(fixture("bianchi_ix.json")))["verdict"], "PSC holds (local test)");
}

TEST(Run, DegreeOverride) {
  RunOptions o;
  o.degree = 3;
  const auto r = run("cohomology", load_problem(fixture("homogeneous.json")), o);
  EXPECT_EQ(r["condition1"]["degree"], 3);
}

TEST(Run, MissingInputsAreProblemErrors) {
  const ProblemSpec s = parse_problem(kSmall, "t.json");
  EXPECT_THROW(run("reduce", s), ProblemError);
  EXPECT_THROW(run("nonsense", s), ProblemError);
  EXPECT_NO_THROW(run("cohomology", s));
}

TEST(Report, DeterministicAndRoundTrips) {
  const ProblemSpec s = load_problem(fixture("homogeneous.json"), {{"s", "1"}});
  const std::string a = run("check-psc", s).dump(2), b = run("check-psc", s).dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(nlohmann::ordered_json::parse(a).dump(2), a);
  const auto r = run("check-psc", s);
  for (const char* key : {"verdict", "condition1", "condition2", "reduced_lagrangian", "el_equations", "reduced_equations",
                          "discrepancies", "timings", "version"})
    EXPECT_TRUE(r.contains(key)) << key;
  EXPECT_FALSE(r["timings"]["recorded"].get<bool>());
  const std::string text = render_text(r);
  EXPECT_NE(text.find("verdict: condition (i) fails: H^4(G,G_x) = 0"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("check-psc " + fixture("planewave.json")), 0);
  EXPECT_EQ(run_cli("check-psc " + fixture("homogeneous.json") + " --set s=1 --format json"), 0);
  EXPECT_EQ(run_cli("check-psc /nonexistent.json"), 2);
  EXPECT_EQ(run_cli("frobnicate " + fixture("planewave.json")), 2);
  EXPECT_EQ(run_cli("check-psc " + fixture("homogeneous.json") + " --set nope=1"), 2);
  EXPECT_EQ(run_cli("check-psc " + fixture("homogeneous.json") + " --format xml"), 2);
  EXPECT_EQ(run_cli("reduce " + fixture("bianchi_v.json")), 2);
}
