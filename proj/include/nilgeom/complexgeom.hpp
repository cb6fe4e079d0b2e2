#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nilgeom/liealg.hpp"

namespace nilgeom::complexgeom {

using coeffield::Assignment;
using coeffield::Coefficient;
using coeffield::ParamTablePtr;
using coeffield::Rational;
using coeffield::RuleSet;
using exterior::CoframePtr;
using exterior::Form;
using exterior::JAction;
using liealg::StructureEquations;

// A Hermitian metric on a complex coframe, stored through the coefficients of
// its fundamental form:
//   2F = i(r2 w^{11'} + s2 w^{22'} + t2 w^{33'}) + u w^{12'} - u' w^{21'}
//        + v w^{23'} - v' w^{32'} + z w^{13'} - z' w^{31'}
// where a prime marks a conjugate generator. The complex parameters u, v, z
// are kept as (real part, imaginary part) pairs so that conjugation stays
// exact when they carry symbolic parameters.
struct HermitianData {
  CoframePtr coframe;
  Coefficient r2, s2, t2;
  Coefficient u_re, u_im, v_re, v_im, z_re, z_im;

  Coefficient u() const;
  Coefficient v() const;
  Coefficient z() const;
  Form F() const;

  static HermitianData diagonal(CoframePtr cf, Coefficient r2, Coefficient s2, Coefficient t2);
};

enum class Family { I, II };

// An adapted orthonormal model: real structure equations, the adapted J,
// F = e^{12} + e^{34} + e^{56}, and Psi = (e^1+ie^2)^(e^3+ie^4)^(e^5+ie^6).
struct SU3Model {
  StructureEquations equations;
  JAction J;
  Form F;
  Form Psi;
  Family family;
  int sign;  // +1 or -1
  std::vector<std::pair<std::string, Coefficient>> params;
  std::vector<std::pair<std::string, Coefficient>> derived;
};

struct IntegrabilityReport {
  bool pass = false;
  // (generator name, nonzero (0,2)-component)
  std::vector<std::pair<std::string, Form>> offending;
  std::string str() const;
};

struct BalancedReport {
  bool pass = false;
  Form f_wedge_df;
  std::string str() const;
};

struct PositivityEntry {
  std::string name;
  Rational lhs, rhs;  // inequality lhs > rhs
  bool ok = false;
};

struct PositivityReport {
  bool pass = false;
  std::vector<PositivityEntry> entries;
  std::string str() const;
};

// Ascending series adapted to J. terms[l] is a basis (rows of coordinates in
// the frame) of the l+1-st term; the chain is strictly increasing and ends at
// the first stabilized term. generic_rank_warning marks rank decisions taken
// generically because symbolic parameters were present.
struct SubspaceChain {
  std::vector<std::vector<std::array<Coefficient, 6>>> terms;
  std::size_t stabilized_dim = 0;
  bool generic_rank_warning = false;
};

enum class Nilpotency { nilpotent, non_nilpotent };

IntegrabilityReport check_integrable(const StructureEquations& s);

SubspaceChain ascending_series(const StructureEquations& s, const JAction& J);

Nilpotency classify_complex_structure(const StructureEquations& s, const JAction& J);

PositivityReport check_positivity(const HermitianData& h, const Assignment& a);

BalancedReport check_balanced(const StructureEquations& s, const HermitianData& h,
                              const RuleSet* rules = nullptr);

// Balanced test for an adapted real model: F ^ dF must vanish.
BalancedReport check_balanced(const SU3Model& m, const RuleSet* rules = nullptr);

// Lee form -1/2 J((-*d*)F) in the adapted orthonormal coframe.
Form lee_form(const SU3Model& m);

// Torsion 3-form T = J dF.
Form torsion_3form(const SU3Model& m);

SU3Model adapted_family_I(const ParamTablePtr& t, const Coefficient& r, const Coefficient& s,
                          int sign);

SU3Model adapted_family_II(const ParamTablePtr& t, const Coefficient& r, const Coefficient& p,
                           const Coefficient& q, int sign);

}  // namespace nilgeom::complexgeom
