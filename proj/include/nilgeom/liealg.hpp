#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilgeom/errors.hpp"
#include "nilgeom/exterior.hpp"

namespace nilgeom::liealg {

using coeffield::Coefficient;
using coeffield::ParamTablePtr;
using coeffield::RuleSet;
using exterior::CoframePtr;
using exterior::Form;
using exterior::JAction;

// Structure equations of a Lie algebra presented on the coframe side: one
// degree-2 differential per declared generator (six for a real coframe, three
// for a complex one; conjugate-generator differentials are the conjugates of
// the stored ones).
class StructureEquations {
 public:
  StructureEquations(CoframePtr cf, std::vector<Form> diffs);

  const CoframePtr& coframe() const { return cf_; }
  std::size_t stored_count() const { return diffs_.size(); }

  // Differential of generator i (0-based over all six slots). For a complex
  // coframe, slots 3..5 return the conjugates of the stored differentials.
  Form d_generator(std::size_t i) const;

  // The unique antiderivation extending the generator differentials:
  // d(a^b) = da^b + (-1)^{|a|} a^db, and d = 0 on scalars.
  Form d(const Form& a) const;

  StructureEquations apply_rules(const RuleSet& rules) const;

  bool operator==(const StructureEquations& o) const;

  // One "d <gen> = <form>" line per declared generator.
  std::string str() const;

 private:
  CoframePtr cf_;
  std::vector<Form> diffs_;
};

struct JacobiReport {
  bool pass = false;
  // (generator name, d(d generator)) for every declared generator.
  std::vector<std::pair<std::string, Form>> entries;
  std::string str() const;
};

JacobiReport check_jacobi(const StructureEquations& s, const RuleSet* rules = nullptr);

// Invertible change of coframe: new^i = sum_j m[i][j] old^j. Size six for a
// real coframe; size three (acting on the declared generators, with the
// conjugate block implied) for a complex one.
class CoframeTransformation {
 public:
  CoframeTransformation(ParamTablePtr table, std::vector<std::vector<Coefficient>> m);

  std::size_t size() const { return m_.size(); }
  const Coefficient& at(std::size_t i, std::size_t j) const { return m_[i][j]; }
  const ParamTablePtr& table() const { return table_; }

  static CoframeTransformation identity(ParamTablePtr table, std::size_t n);

  // Matrix product: (a*b) applies b first, then a.
  friend CoframeTransformation operator*(const CoframeTransformation& a,
                                         const CoframeTransformation& b);

 private:
  ParamTablePtr table_;
  std::vector<std::vector<Coefficient>> m_;
};

struct TransformResult {
  StructureEquations equations;
  std::optional<Form> F;
};

// Rewrites the structure equations (and optionally a form) in the coframe
// defined by m. Throws SingularTransformation when m is not invertible.
TransformResult transform_coframe(const StructureEquations& s, const CoframeTransformation& m,
                                  const std::optional<Form>& F = std::nullopt,
                                  const RuleSet* rules = nullptr);

// True iff every generator differential agrees as a canonical form. Throws
// CoframeMismatch when the coframes differ.
bool structures_equal(const StructureEquations& a, const StructureEquations& b);

struct RealifyResult {
  StructureEquations real_equations;
  JAction J;
};

// Converts complex structure equations to real ones through the identification
// map[k] = (the real-coframe expression equal to generator k), together with
// the induced almost-complex action on the real coframe. Throws SingularMap
// when the identification is not invertible.
RealifyResult realify(const StructureEquations& s, CoframePtr real_coframe,
                      const std::vector<Form>& map, const RuleSet* rules = nullptr);

// The default identification: generator k = e^{2k-1} + i e^{2k}.
RealifyResult realify_default(const StructureEquations& s, CoframePtr real_coframe,
                              const RuleSet* rules = nullptr);

// Bracket of frame vectors read off the structure constants: the k-component
// of [X_i, X_j] is -d e^k(X_i, X_j). Real coframes only.
std::array<Coefficient, 6> bracket(const StructureEquations& s, std::size_t i, std::size_t j);

// Exact inverse of a square Coefficient matrix by Gaussian elimination; rules
// (when given) are applied after every arithmetic step so that relations like
// sq2**2 -> 2 participate in pivot detection. `as_map` selects which
// singularity error is thrown.
std::vector<std::vector<Coefficient>> invert_matrix(
    const std::vector<std::vector<Coefficient>>& m, const RuleSet* rules = nullptr,
    bool as_map = false);

}  // namespace nilgeom::liealg
