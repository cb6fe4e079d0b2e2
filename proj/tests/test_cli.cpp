#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nilgeom/cli.hpp"
#include "nilgeom/complexgeom.hpp"
#include "nilgeom/errors.hpp"

using namespace nilgeom;
using namespace nilgeom::cli;
using coeffield::Coefficient;
using exterior::Form;
using exterior::wedge;

namespace {

const char* kReducedModel = R"(# reduced complex equations, diagonal metric
params: s2
assume: s2 != 0

coframe complex: w1 w2 w3

d w2 = w1^w3 + w1^~w3
d w3 = i*(w1^~w2) - i*(w2^~w1)

F = (i/2)*(w1^~w1) + (i*s2/2)*(w2^~w2) + (i/2)*(w3^~w3)
)";

const char* kFamilyOneModel = R"(params: r s lm mu tau
assume: r != 0
assume: s != 0
coframe real: e1 e2 e3 e4 e5 e6
d e3 = (2*s/r)*e1^e5
d e4 = (2*s/r)*e2^e5
d e6 = (2/(r*s))*e1^e3 + (2/(r*s))*e2^e4
J e1 = -e2
J e2 = e1
J e3 = -e4
J e4 = e3
J e5 = -e6
J e6 = e5
F = e1^e2 + e3^e4 + e5^e6
)";

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "nilgeom_cli_test";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream out(path);
  out << text;
  return path;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("model parsing accepts the documented grammar") {
  ModelFile m = parse_model(kReducedModel);
  REQUIRE(m.coframe);
  CHECK(!m.coframe->is_real());
  CHECK(m.params == std::vector<std::string>{"s2"});
  CHECK(m.assumptions == std::vector<std::string>{"s2"});
  REQUIRE(m.equations.has_value());
  REQUIRE(m.F.has_value());

  auto w = m.coframe;
  auto t = m.table;
  const Coefficient i = Coefficient::i(t);
  auto g = [&](std::size_t k) { return Form::generator(w, k); };
  // d w2 = w^{13} + w^{13'}; d w3 = i (w^{12'} - w^{21'}).
  CHECK(m.equations->d_generator(1) == wedge(g(0), g(2)) + wedge(g(0), g(5)));
  CHECK(m.equations->d_generator(2) == (wedge(g(0), g(4)) - wedge(g(1), g(3))).scaled(i));
  // Conjugate differentials are induced: d w1' = conj(d w1) = 0.
  CHECK(m.equations->d_generator(3).is_zero());
}

TEST_CASE("term order and sign variants parse to the same form") {
  ModelFile a = parse_model("coframe complex: w1 w2 w3\nd w2 = w1^w3 + w1^~w3\n");
  ModelFile b = parse_model("coframe complex: w1 w2 w3\nd w2 = w1^~w3 + w1^w3\n");
  ModelFile c = parse_model("coframe complex: w1 w2 w3\nd w2 = -(~w3^w1) - w3^w1\n");
  CHECK(structures_equal(a, b));
  CHECK(structures_equal(a, c));
}

TEST_CASE("parse errors carry position information") {
  CHECK_THROWS_AS(parse_model(""), ParseError&);
  CHECK_THROWS_AS(parse_model("coframe real: e1 e1 e2 e3 e4 e5\n"), DuplicateGenerator&);
  try {
    parse_model("coframe real: e1 e2 e3 e4 e5 e6\nd e1 = x^e2\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(contains(e.what(), "unknown identifier 'x'"));
  }
  try {
    parse_model("coframe real: e1 e2 e3 e4 e5 e6\nd e1 = e2 ^^ e3\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(contains(e.what(), "line 2"));
  }
  // J must square to minus the identity.
  CHECK_THROWS_AS(parse_model("coframe real: e1 e2 e3 e4 e5 e6\n"
                              "J e1 = e2\nJ e2 = e1\nJ e3 = -e4\nJ e4 = e3\nJ e5 = -e6\nJ e6 = e5\n"),
                  ParseError&);
  // Rules files and model rule lines must target a declared parameter.
  CHECK_THROWS_AS(parse_model("coframe real: e1 e2 e3 e4 e5 e6\nrule: t**2 -> 1\n"),
                  Error&);
}

TEST_CASE("printing and reparsing is the identity on structures") {
  for (const char* text : {kReducedModel, kFamilyOneModel}) {
    ModelFile m = parse_model(text);
    std::string printed = m.str();
    ModelFile again = parse_model(printed);
    CHECK(structures_equal(m, again));
    CHECK(again.str() == printed);
  }
}

TEST_CASE("run_command: checks on the built-in families") {
  auto r = run_command({"check", "jacobi", "--family", "I"});
  CHECK(r.status == 0);
  CHECK(contains(r.text, "jacobi: pass"));

  r = run_command({"check", "instanton", "--connection", "chern", "--family", "II"});
  CHECK(r.status == 1);
  CHECK(contains(r.text, "instanton: fail"));

  r = run_command({"check", "su3", "--connection", "chern", "--family", "II", "--sign", "-"});
  CHECK(r.status == 0);
  CHECK(contains(r.text, "su3: pass"));

  r = run_command({"check", "su3", "--connection", "levi-civita", "--family", "I"});
  CHECK(r.status == 1);

  r = run_command({"classify", "--family", "II"});
  CHECK(r.status == 0);
  CHECK(contains(r.text, "non-nilpotent"));
}

TEST_CASE("run_command: computed objects print canonically") {
  auto r = run_command({"compute", "p1", "--connection", "chern", "--family", "I"});
  CHECK(r.status == 0);
  CHECK(r.text == "(-2/(r**4*pi2))*e1^e2^e3^e4 + (-2/(r**4*pi2))*e1^e2^e5^e6\n");

  r = run_command({"compute", "dT", "--family", "I"});
  CHECK(r.status == 0);
  CHECK(r.text == "(-8/(r**2*s**2))*e1^e2^e3^e4 + (-8*s**2/r**2)*e1^e2^e5^e6\n");

  r = run_command({"compute", "lee", "--family", "II"});
  CHECK(r.status == 0);
  CHECK(r.text == "0\n");

  // Deterministic output: repeated runs agree byte for byte.
  auto r2 = run_command({"compute", "curvature", "--connection", "chern", "--family", "II"});
  auto r3 = run_command({"compute", "curvature", "--connection", "chern", "--family", "II"});
  CHECK(r2.status == 0);
  CHECK(r2.text == r3.text);
}

TEST_CASE("run_command: anomaly solving with a rules file") {
  auto rules = write_temp("family1.rules", "rule: tau**2 -> (s**4-1)/(9*r**2*s**2)\n");

  auto r = run_command({"solve", "anomaly", "--family", "I"});
  CHECK(r.status == 1);
  CHECK(contains(r.text, "not proportional"));

  r = run_command({"solve", "anomaly", "--family", "I", "--rules", rules.string()});
  CHECK(r.status == 0);
  CHECK(contains(r.text, "anomaly: ok"));
  CHECK(contains(r.text, "M = 4*r**2*s**2*pi2"));
  CHECK(contains(r.text, "alpha' = 2*r**2*s**2"));

  r = run_command({"solve", "anomaly", "--family", "I", "--rules", rules.string(),
                   "--verify-numeric"});
  CHECK(r.status == 0);
  CHECK(contains(r.text, "numeric check"));
}

TEST_CASE("run_command: model files from disk") {
  auto model = write_temp("family1.model", kFamilyOneModel);
  auto rules = write_temp("family1.rules", "rule: tau**2 -> (s**4-1)/(9*r**2*s**2)\n");

  auto r = run_command({"check", "jacobi", model.string()});
  CHECK(r.status == 0);

  r = run_command({"check", "balanced", model.string(), "--verify-numeric"});
  CHECK(r.status == 0);
  CHECK(contains(r.text, "balanced: pass"));

  r = run_command({"report", "strominger", "--rules", rules.string(), "--set", "r=1", "--set",
                   "s=2", model.string()});
  CHECK(r.status == 0);
  CHECK(contains(r.text, "overall: pass"));
  CHECK(contains(r.text, "alpha' at r=1, s=2 = 8 (positive)"));
}

TEST_CASE("run_command: usage and input errors exit with status 2") {
  CHECK(run_command({}).status == 2);
  CHECK(run_command({"frobnicate"}).status == 2);
  CHECK(run_command({"check"}).status == 2);
  CHECK(run_command({"check", "jacobi"}).status == 2);  // no model, no --family
  CHECK(run_command({"check", "jacobi", "--family", "III"}).status == 2);
  CHECK(run_command({"check", "jacobi", "/nonexistent/path.model"}).status == 2);
  CHECK(run_command({"check", "jacobi", "--family", "I", "--set", "bogus=1"}).status == 2);
  CHECK(run_command({"check", "jacobi", "--family", "I", "--set", "r"}).status == 2);
  CHECK(run_command({"check", "integrable", "--family", "I"}).status == 2);  // real coframe

  auto bad = write_temp("bad.model", "coframe real: e1 e2 e3 e4 e5 e6\nd e1 = e2 +\n");
  auto r = run_command({"check", "jacobi", bad.string()});
  CHECK(r.status == 2);
  CHECK(contains(r.text, "line 2"));

  auto help = run_command({"--help"});
  CHECK(help.status == 0);
  CHECK(contains(help.text, "nilgeom"));
}
