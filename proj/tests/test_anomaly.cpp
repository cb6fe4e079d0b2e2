#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilgeom/anomaly.hpp"

using namespace nilgeom;
using namespace nilgeom::anomaly;
using coeffield::Assignment;
using coeffield::Coefficient;
using coeffield::ParamTablePtr;
using coeffield::Rational;
using coeffield::RuleSet;
using coeffield::make_table;
using complexgeom::SU3Model;
using complexgeom::adapted_family_I;
using complexgeom::adapted_family_II;
using complexgeom::torsion_3form;
using connections::Connection;
using connections::chern;
using connections::curvature;
using connections::instanton_family;
using connections::pontrjagin_trace;
using exterior::Form;

namespace {

struct Fix {
  ParamTablePtr t;
  Coefficient one, two, r, s, p, q, lm, mu, tau;
  Fix()
      : t(make_table({"r", "s", "p", "q", "lm", "mu", "tau"})),
        one(Coefficient::integer(t, 1)),
        two(Coefficient::integer(t, 2)),
        r(Coefficient::param(t, "r")),
        s(Coefficient::param(t, "s")),
        p(Coefficient::param(t, "p")),
        q(Coefficient::param(t, "q")),
        lm(Coefficient::param(t, "lm")),
        mu(Coefficient::param(t, "mu")),
        tau(Coefficient::param(t, "tau")) {}
  Coefficient pi2() const { return Coefficient::param(t, "pi2"); }
  Coefficient num(long n) const { return Coefficient::integer(t, n); }

  // tau^2 -> (s^4 - 1)/(9 r^2 s^2)
  RuleSet family_I_rule() const {
    RuleSet rules;
    rules.add("tau", (s * s * s * s - one) / (num(9) * r * r * s * s));
    return rules;
  }
  // q^2 -> 1/(4 p^2), i.e. p^2 q^2 = 1/4
  RuleSet family_II_rule() const {
    RuleSet rules;
    rules.add("q", one / (num(4) * p * p));
    return rules;
  }
};

struct Pieces {
  Form dT, p1_nabla, p1_a, trace_nabla, trace_a;
};

Pieces pieces(const SU3Model& m, const Connection& A) {
  Pieces out{m.equations.d(torsion_3form(m)), Form::zero(m.F.coframe()),
             Form::zero(m.F.coframe()), Form::zero(m.F.coframe()), Form::zero(m.F.coframe())};
  auto pc = pontrjagin_trace(curvature(chern(m), m.equations));
  auto pa = pontrjagin_trace(curvature(A, m.equations));
  out.p1_nabla = pc.p1;
  out.trace_nabla = pc.trace;
  out.p1_a = pa.p1;
  out.trace_a = pa.trace;
  return out;
}

}  // namespace

TEST_CASE("anomaly multiplier for the first family") {
  Fix f;
  RuleSet rules = f.family_I_rule();
  for (int sign : {+1, -1}) {
    auto m = adapted_family_I(f.t, f.r, f.s, sign);
    auto A = instanton_family(m.F.coframe(), f.lm, f.mu, f.tau);
    auto pz = pieces(m, A);
    auto sol = solve_anomaly(pz.dT, pz.p1_nabla, pz.p1_a, rules);
    CHECK(sol.status == AnomalyStatus::ok);
    CHECK(sol.M == f.num(4) * f.pi2() * f.r * f.r * f.s * f.s);
    CHECK(sol.alpha_prime == f.two * f.r * f.r * f.s * f.s);
    CHECK(sol.alpha_pi2_free);
    CHECK(sol.residual.is_zero());
    CHECK(sol.alpha_prime.str() == "2*r**2*s**2");

    // both normalizations agree: M (p1 - p1A) = (alpha'/4)(tr - trA)
    Form lhs = (pz.p1_nabla - pz.p1_a).scaled(sol.M).apply_rules(rules);
    Form rhs = (pz.trace_nabla - pz.trace_a)
                   .scaled(sol.alpha_prime / f.num(4))
                   .apply_rules(rules);
    CHECK(lhs == rhs);
    CHECK(lhs == pz.dT.apply_rules(rules));
  }
}

TEST_CASE("the first family constraint on tau is forced") {
  Fix f;
  auto m = adapted_family_I(f.t, f.r, f.s, +1);
  auto A = instanton_family(m.F.coframe(), f.lm, f.mu, f.tau);
  auto pz = pieces(m, A);
  // With u standing for tau^2, the e^{1234} component of
  // dT = M (p1 - p1A) reads -8/(r^2 s^2) = -8 s^2/r^2 + 72 u once
  // M = 4 pi2 r^2 s^2 is fixed by the e^{1256} component.
  const std::uint8_t m1256 = 0b110011, m1234 = 0b001111;
  Coefficient M = pz.dT.coefficient(m1256) / (pz.p1_nabla.coefficient(m1256));
  CHECK(M == f.num(4) * f.pi2() * f.r * f.r * f.s * f.s);
  // p1A(e^{1234}) = -18 tau^2 / (pi2 r^2 s^2): strip the tau^2 factor
  Coefficient slope = -(f.num(18) / (f.pi2() * f.r * f.r * f.s * f.s));
  CHECK(pz.p1_a.coefficient(m1234) == slope * f.tau * f.tau);
  // solve dT_1234 = M * (p1_1234 - slope * u) for u
  Coefficient u =
      (pz.dT.coefficient(m1234) - M * pz.p1_nabla.coefficient(m1234)) / (-(M * slope));
  Coefficient expected = (f.s * f.s * f.s * f.s - f.one) / (f.num(9) * f.r * f.r * f.s * f.s);
  CHECK(u == expected);
  // and a rule built from the derived value solves the anomaly
  RuleSet rules;
  rules.add("tau", u);
  auto sol = solve_anomaly(pz.dT, pz.p1_nabla, pz.p1_a, rules);
  CHECK(sol.status == AnomalyStatus::ok);
}

TEST_CASE("anomaly multiplier for the second family with a flat instanton") {
  Fix f;
  RuleSet rules = f.family_II_rule();
  auto m = adapted_family_II(f.t, f.r, f.p, f.q, +1);
  auto A = instanton_family(m.F.coframe(), f.lm, f.mu, f.num(0));
  auto pz = pieces(m, A);
  CHECK(pz.p1_a.is_zero());
  CHECK(pz.trace_a.is_zero());
  auto sol = solve_anomaly(pz.dT, pz.p1_nabla, pz.p1_a, rules);
  CHECK(sol.status == AnomalyStatus::ok);
  CHECK(sol.M == f.num(4) * f.pi2() * f.r * f.r);
  CHECK(sol.alpha_prime == f.two * f.r * f.r);
  CHECK(sol.residual.is_zero());
}

TEST_CASE("generic second-family parameters are not proportional") {
  Fix f;
  RuleSet rules;  // no constraint
  auto m = adapted_family_II(f.t, f.r, f.p, f.q, +1);
  auto A = instanton_family(m.F.coframe(), f.lm, f.mu, f.num(0));
  auto pz = pieces(m, A);
  auto sol = solve_anomaly(pz.dT, pz.p1_nabla, pz.p1_a, rules);
  CHECK(sol.status == AnomalyStatus::not_proportional);
  CHECK_FALSE(sol.residual.is_zero());
  CHECK(sol.str().substr(0, 25) == "anomaly: not proportional");
}

TEST_CASE("zero difference of Pontrjagin forms is reported") {
  Fix f;
  RuleSet rules;
  auto m = adapted_family_I(f.t, f.r, f.s, +1);
  auto pz = pieces(m, instanton_family(m.F.coframe(), f.lm, f.mu, f.tau));
  auto sol = solve_anomaly(pz.dT, pz.p1_nabla, pz.p1_nabla, rules);
  CHECK(sol.status == AnomalyStatus::zero_difference);
  CHECK(sol.residual == pz.dT);
  // dT = 0 with zero difference: trivially solved
  auto triv =
      solve_anomaly(Form::zero(m.F.coframe()), pz.p1_nabla, pz.p1_nabla, rules);
  CHECK(triv.status == AnomalyStatus::ok);
  CHECK(triv.M.is_zero());
}

TEST_CASE("torsion trace bookkeeping and closedness") {
  Fix f;
  auto mI = adapted_family_I(f.t, f.r, f.s, +1);
  auto mII = adapted_family_II(f.t, f.r, f.p, f.q, +1);
  // d(dT) = 0
  for (const SU3Model* m : {&mI, &mII}) {
    Form dT = m->equations.d(torsion_3form(*m));
    CHECK(m->equations.d(dT).is_zero());
  }
  // tr(Omega^A ^ Omega^A) vanishes exactly when tau does
  auto tr_with = [&](const Coefficient& tv) {
    auto A = instanton_family(mI.F.coframe(), f.lm, f.mu, tv);
    return pontrjagin_trace(curvature(A, mI.equations)).trace;
  };
  CHECK_FALSE(tr_with(f.tau).is_zero());
  CHECK(tr_with(f.num(0)).is_zero());
}

TEST_CASE("full report for the first family solution") {
  Fix f;
  RuleSet rules = f.family_I_rule();
  auto m = adapted_family_I(f.t, f.r, f.s, +1);
  auto A = instanton_family(m.F.coframe(), f.lm, f.mu, f.tau);
  Assignment sample(f.t);
  sample.set("r", Rational(1));
  sample.set("s", Rational(2));
  auto rep = strominger_report(m, A, rules, {sample});
  CHECK(rep.bismut_su3);
  CHECK(rep.balanced);
  CHECK(rep.lee.is_zero());
  CHECK(rep.instanton);
  CHECK(rep.instanton_failures.empty());
  CHECK(rep.anomaly.status == AnomalyStatus::ok);
  CHECK(rep.anomaly.alpha_prime == f.two * f.r * f.r * f.s * f.s);
  REQUIRE(rep.alpha_samples.size() == 1);
  CHECK(rep.alpha_samples[0].value == Rational(8));
  CHECK(rep.alpha_samples[0].positive);
  CHECK(rep.alpha_positive);
  CHECK(rep.pass);
  std::string text = rep.str();
  CHECK(text.find("(a) Bismut curvature in su(3): pass") != std::string::npos);
  CHECK(text.find("(b) balanced, Lee form zero: pass") != std::string::npos);
  CHECK(text.find("(c) su(3)-instanton: pass") != std::string::npos);
  CHECK(text.find("(d) anomaly: ok") != std::string::npos);
  CHECK(text.find("alpha' at r=1, s=2 = 8 (positive)") != std::string::npos);
  CHECK(text.find("overall: pass") != std::string::npos);
}

TEST_CASE("full report for the second family solution") {
  Fix f;
  RuleSet rules = f.family_II_rule();
  auto m = adapted_family_II(f.t, f.r, f.p, f.q, +1);
  auto A = instanton_family(m.F.coframe(), f.lm, f.mu, f.num(0));
  Assignment sample(f.t);
  sample.set("r", Rational(3));
  auto rep = strominger_report(m, A, rules, {sample});
  CHECK(rep.pass);
  CHECK(rep.anomaly.alpha_prime == f.two * f.r * f.r);
  REQUIRE(rep.alpha_samples.size() == 1);
  CHECK(rep.alpha_samples[0].value == Rational(18));

  // a degenerate sample value is flagged as not positive
  Assignment zero_sample(f.t);
  zero_sample.set("r", Rational(0));
  auto rep2 = strominger_report(m, A, rules, {zero_sample});
  CHECK_FALSE(rep2.alpha_positive);
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.str().find("(not positive)") != std::string::npos);
}

TEST_CASE("the Chern connection is rejected as candidate instanton") {
  Fix f;
  RuleSet rules = f.family_I_rule();
  auto m = adapted_family_I(f.t, f.r, f.s, +1);
  auto rep = strominger_report(m, chern(m), rules, {});
  CHECK(rep.bismut_su3);
  CHECK(rep.balanced);
  CHECK_FALSE(rep.instanton);
  CHECK_FALSE(rep.instanton_failures.empty());
  // with nabla = A = chern the difference of Pontrjagin forms vanishes
  CHECK(rep.anomaly.status == AnomalyStatus::zero_difference);
  CHECK_FALSE(rep.pass);
  CHECK(rep.str().find("(c) su(3)-instanton: fail") != std::string::npos);
}
