#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nilgeom/connections.hpp"

namespace nilgeom::anomaly {

using coeffield::Assignment;
using coeffield::Coefficient;
using coeffield::Rational;
using coeffield::RuleSet;
using complexgeom::SU3Model;
using connections::Connection;
using exterior::Form;

enum class AnomalyStatus { ok, not_proportional, zero_difference };

// Result of matching dT against M * (p1(nabla) - p1(A)).
struct AnomalySolution {
  AnomalyStatus status = AnomalyStatus::not_proportional;
  Coefficient M;            // candidate multiplier (exact)
  Coefficient alpha_prime;  // M / (2 pi2)
  bool alpha_pi2_free = false;
  Form residual;  // dT - M * (p1(nabla) - p1(A)) after rule application
  std::string str() const;
};

// Solve dT = M * (p1_nabla - p1_a): M is taken from the first nonzero basis
// component of the rule-reduced difference and verified on every component.
AnomalySolution solve_anomaly(const Form& dT, const Form& p1_nabla, const Form& p1_a,
                              const RuleSet& rules);

struct AlphaSample {
  std::string description;
  Rational value{};
  bool positive = false;
};

struct StromingerReport {
  bool bismut_su3 = false;  // (a) necessary condition: Bismut curvature in su(3)
  bool balanced = false;    // (b) Lee form vanishes / metric balanced
  Form lee;
  bool instanton = false;  // (c) supplied A is an su(3)-instanton
  std::vector<std::string> instanton_failures;
  AnomalySolution anomaly;  // (d) with nabla = chern(m)
  std::vector<AlphaSample> alpha_samples;
  bool alpha_positive = false;
  bool pass = false;
  std::string str() const;
};

StromingerReport strominger_report(const SU3Model& m, const Connection& A, const RuleSet& rules,
                                   const std::vector<Assignment>& samples);

}  // namespace nilgeom::anomaly
