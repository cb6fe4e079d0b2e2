#include "nilgeom/anomaly.hpp"

#include <sstream>

namespace nilgeom::anomaly {

namespace {

const char* status_name(AnomalyStatus s) {
  switch (s) {
    case AnomalyStatus::ok:
      return "ok";
    case AnomalyStatus::not_proportional:
      return "not proportional";
    case AnomalyStatus::zero_difference:
      return "zero difference";
  }
  return "?";
}

}  // namespace

std::string AnomalySolution::str() const {
  std::ostringstream os;
  os << "anomaly: " << status_name(status);
  if (status == AnomalyStatus::ok) {
    os << "\n  M = " << M.str() << "\n  alpha' = " << alpha_prime.str();
  } else {
    os << "\n  residual = " << residual.str();
    if (status == AnomalyStatus::not_proportional && !alpha_pi2_free && residual.is_zero())
      os << "\n  alpha' = " << alpha_prime.str() << " is not pi2-free";
  }
  return os.str();
}

AnomalySolution solve_anomaly(const Form& dT, const Form& p1_nabla, const Form& p1_a,
                              const RuleSet& rules) {
  auto t = dT.coframe()->table();
  const Coefficient zero = Coefficient::integer(t, 0);
  Form dTr = dT.apply_rules(rules);
  Form diff = (p1_nabla - p1_a).apply_rules(rules);

  AnomalySolution out;
  out.M = zero;
  out.alpha_prime = zero;
  out.residual = dTr;

  if (diff.is_zero()) {
    if (dTr.is_zero()) {
      // 0 = M * 0 for any M; report the trivial solution
      out.status = AnomalyStatus::ok;
      out.alpha_pi2_free = true;
      return out;
    }
    out.status = AnomalyStatus::zero_difference;
    return out;
  }

  const auto& [mask0, c0] = *diff.terms().begin();
  out.M = (dTr.coefficient(mask0) / c0).apply_rules(rules);
  const Coefficient two_pi2 =
      Coefficient::integer(t, 2) * Coefficient::param(t, "pi2");
  out.alpha_prime = (out.M / two_pi2).apply_rules(rules);
  out.alpha_pi2_free = !out.alpha_prime.contains_var(t->index("pi2"));
  out.residual = (dTr - diff.scaled(out.M)).apply_rules(rules);
  out.status = out.residual.is_zero() && out.alpha_pi2_free ? AnomalyStatus::ok
                                                            : AnomalyStatus::not_proportional;
  return out;
}

std::string StromingerReport::str() const {
  auto verdict = [](bool b) { return b ? "pass" : "fail"; };
  std::ostringstream os;
  os << "(a) Bismut curvature in su(3): " << verdict(bismut_su3) << "\n";
  os << "(b) balanced, Lee form zero: " << verdict(balanced);
  if (!balanced) os << "\n    Lee form = " << lee.str();
  os << "\n(c) su(3)-instanton: " << verdict(instanton);
  for (const auto& f : instanton_failures) os << "\n    violated: " << f;
  os << "\n(d) " << anomaly.str();
  for (const auto& s : alpha_samples)
    os << "\nalpha' at " << s.description << " = " << s.value.get_str() << " ("
       << (s.positive ? "positive" : "not positive") << ")";
  os << "\noverall: " << verdict(pass);
  return os.str();
}

StromingerReport strominger_report(const SU3Model& m, const Connection& A, const RuleSet& rules,
                                   const std::vector<Assignment>& samples) {
  StromingerReport rep;

  // (a) necessary holonomy condition at the curvature level
  auto bismut_curv = connections::curvature(connections::bismut(m), m.equations);
  rep.bismut_su3 = connections::su3_curvature_check(bismut_curv).pass;

  // (b) balanced metric / vanishing Lee form
  auto bal = complexgeom::check_balanced(m, &rules);
  rep.lee = complexgeom::lee_form(m).apply_rules(rules);
  rep.balanced = bal.pass && rep.lee.is_zero();

  // (c) the supplied connection is an su(3)-instanton
  auto conn_rep = connections::su3_connection_check(A);
  auto curv_A = connections::curvature(A, m.equations);
  auto inst_rep = connections::instanton_check(curv_A, m.J);
  rep.instanton = conn_rep.pass && inst_rep.pass;
  rep.instanton_failures = conn_rep.failed;
  rep.instanton_failures.insert(rep.instanton_failures.end(), inst_rep.failed.begin(),
                                inst_rep.failed.end());

  // (d) anomaly cancellation with nabla = chern(m)
  Form dT = m.equations.d(complexgeom::torsion_3form(m));
  auto chern_curv = connections::curvature(connections::chern(m), m.equations);
  Form p1_chern = connections::pontrjagin_trace(chern_curv).p1;
  Form p1_A = connections::pontrjagin_trace(curv_A).p1;
  rep.anomaly = solve_anomaly(dT, p1_chern, p1_A, rules);

  rep.alpha_positive = true;
  if (rep.anomaly.status == AnomalyStatus::ok) {
    for (const auto& a : samples) {
      AlphaSample s;
      s.description = a.str();
      try {
        coeffield::GQ v = rep.anomaly.alpha_prime.eval_at(a);
        s.value = v.re;
        s.positive = v.is_real() && v.re > 0;
      } catch (const Error& e) {
        s.description += " (not evaluable: " + std::string(e.what()) + ")";
        s.positive = false;
      }
      rep.alpha_positive = rep.alpha_positive && s.positive;
      rep.alpha_samples.push_back(std::move(s));
    }
  }

  rep.pass = rep.bismut_su3 && rep.balanced && rep.instanton &&
             rep.anomaly.status == AnomalyStatus::ok && rep.alpha_positive;
  return rep;
}

}  // namespace nilgeom::anomaly
