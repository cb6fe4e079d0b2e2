#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "nilgeom/acceptance.hpp"
#include "nilgeom/cli.hpp"
#include "nilgeom/errors.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact symbolic exterior calculus on six-dimensional nilpotent Lie algebras.";

  py::register_exception<nilgeom::Error>(m, "NilgeomError");

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        auto r = nilgeom::cli::run_command(args);
        return py::make_tuple(r.status, r.text);
      },
      py::arg("args"),
      "Run a command with the same surface as the nilgeom binary.\n"
      "Returns (status, text): status 0 = pass, 1 = a check failed, 2 = usage\n"
      "or input error.");

  m.def(
      "canonical_model",
      [](const std::string& text) { return nilgeom::cli::parse_model(text).str(); },
      py::arg("text"),
      "Parse a model file and return its canonical printed form. Raises\n"
      "NilgeomError on invalid input.");

  m.def(
      "models_equal",
      [](const std::string& a, const std::string& b) {
        return nilgeom::cli::structures_equal(nilgeom::cli::parse_model(a),
                                              nilgeom::cli::parse_model(b));
      },
      py::arg("a"), py::arg("b"),
      "True when two model files define the same structure after\n"
      "canonicalization.");

  m.def(
      "acceptance_report",
      [] { return nilgeom::acceptance::render(nilgeom::acceptance::run_all()); },
      "Run the built-in verification suite and return its ledger text.");

  m.def(
      "acceptance_ok", [] { return nilgeom::acceptance::all_pass(nilgeom::acceptance::run_all()); },
      "Run the built-in verification suite and return True when every "
      "criterion passes.");
}
