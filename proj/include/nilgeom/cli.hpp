#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilgeom/anomaly.hpp"
#include "nilgeom/connections.hpp"

namespace nilgeom::cli {

using coeffield::Assignment;
using coeffield::Coefficient;
using coeffield::ParamTablePtr;
using coeffield::RuleSet;
using exterior::CoframePtr;
using exterior::Form;
using exterior::JAction;
using liealg::StructureEquations;

// In-memory image of a model file. The line grammar is:
//   params: <name> ...
//   assume: <name> != 0
//   rule: <name>**2 -> <coefficient expression>
//   coframe real: <six names>        |  coframe complex: <three names>
//   d <generator> = <form expression>
//   J <generator> = <degree-1 form expression>     (real coframes)
//   F = <degree-2 form expression>
//   sigma <i> <j> = <degree-1 form expression>     (upper triangle, 1-based)
// `#` starts a comment; `^` is the wedge, `**` the coefficient power, `~w` the
// conjugate of generator w, and `i` the imaginary unit. `params:` lines must
// come first; `d`, `J`, `F` and `sigma` lines need the coframe declared.
struct ModelFile {
  ParamTablePtr table;
  std::vector<std::string> params;
  std::vector<std::string> assumptions;
  std::vector<std::pair<std::string, Coefficient>> rule_lines;
  CoframePtr coframe;
  std::optional<StructureEquations> equations;  // present once a coframe is declared
  std::optional<JAction> J;
  std::optional<Form> F;
  std::optional<connections::Connection> sigma;

  RuleSet rules() const;  // rebuilt from rule_lines
  std::string str() const;  // canonical serialization; parse(str()) round-trips
};

// Throws ParseError (with line/column), DuplicateGenerator, or
// UnknownParameter.
ModelFile parse_model(const std::string& text);

// Component-wise structural equality through canonical serialization.
bool structures_equal(const ModelFile& a, const ModelFile& b);

// Parses a single form expression against an existing model's table and
// coframe (used by tests and the tools built on the library).
Form parse_form(const std::string& text, const ParamTablePtr& table, const CoframePtr& coframe);

struct CommandResult {
  int status = 0;  // 0 pass, 1 check failed, 2 usage/parse/math error
  std::string text;
};

// Dispatches `argv` (without the program name) to the library:
//   check jacobi|integrable|balanced|instanton|su3   [model]
//   classify                                         [model]
//   compute torsion|connection|curvature|p1|dT|lee   [model]
//   solve anomaly                                    [model]
//   report strominger                                [model]
//   reproduce paper
// with flags --sign +|-, --family I|II, --set name=p/q, --rules FILE,
// --connection chern|bismut|levi-civita|A, --verify-numeric.
CommandResult run_command(const std::vector<std::string>& argv);

}  // namespace nilgeom::cli
