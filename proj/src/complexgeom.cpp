#include "nilgeom/complexgeom.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace nilgeom::complexgeom {

namespace {

Form reduce(const Form& f, const RuleSet* rules) {
  return rules ? f.apply_rules(*rules) : f;
}

Form cwedge(const CoframePtr& c, std::size_t a, std::size_t b) {
  return wedge(Form::generator(c, a), Form::generator(c, b));
}

using exterior::wedge;

}  // namespace

Coefficient HermitianData::u() const { return u_re + Coefficient::i(coframe->table()) * u_im; }
Coefficient HermitianData::v() const { return v_re + Coefficient::i(coframe->table()) * v_im; }
Coefficient HermitianData::z() const { return z_re + Coefficient::i(coframe->table()) * z_im; }

Form HermitianData::F() const {
  auto t = coframe->table();
  const Coefficient i = Coefficient::i(t);
  const Coefficient half = Coefficient::rational(t, Rational(1, 2));
  auto ubar = u_re - i * u_im, vbar = v_re - i * v_im, zbar = z_re - i * z_im;
  Form two_f = cwedge(coframe, 0, 3).scaled(i * r2) + cwedge(coframe, 1, 4).scaled(i * s2) +
               cwedge(coframe, 2, 5).scaled(i * t2) + cwedge(coframe, 0, 4).scaled(u()) -
               cwedge(coframe, 1, 3).scaled(ubar) + cwedge(coframe, 1, 5).scaled(v()) -
               cwedge(coframe, 2, 4).scaled(vbar) + cwedge(coframe, 0, 5).scaled(z()) -
               cwedge(coframe, 2, 3).scaled(zbar);
  return two_f.scaled(half);
}

HermitianData HermitianData::diagonal(CoframePtr cf, Coefficient r2, Coefficient s2,
                                      Coefficient t2) {
  auto t = cf->table();
  const Coefficient zero = Coefficient::integer(t, 0);
  return HermitianData{std::move(cf), std::move(r2), std::move(s2), std::move(t2),
                       zero, zero, zero, zero, zero, zero};
}

IntegrabilityReport check_integrable(const StructureEquations& s) {
  if (s.coframe()->is_real())
    throw ComplexCoframe("integrability is checked on complex structure equations");
  IntegrabilityReport rep;
  rep.pass = true;
  for (std::size_t j = 0; j < s.stored_count(); ++j) {
    Form part = s.d_generator(j).bidegree_part(0, 2);
    if (!part.is_zero()) {
      rep.pass = false;
      rep.offending.emplace_back(s.coframe()->generator_name(j), std::move(part));
    }
  }
  return rep;
}

std::string IntegrabilityReport::str() const {
  std::ostringstream os;
  os << (pass ? "integrable: pass" : "integrable: fail");
  for (const auto& [name, form] : offending)
    os << "\n  (0,2) part of d " << name << " = " << form.str();
  return os.str();
}

namespace {

// Basis of the null space {x : rows * x = 0} of a matrix with six columns.
std::vector<std::array<Coefficient, 6>> kernel6(
    std::vector<std::array<Coefficient, 6>> rows, const ParamTablePtr& t) {
  const Coefficient zero = Coefficient::integer(t, 0);
  const Coefficient one = Coefficient::integer(t, 1);
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < 6 && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const Coefficient p = rows[rank][col];
    for (int j = 0; j < 6; ++j) rows[rank][j] = rows[rank][j] / p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const Coefficient f = rows[r][col];
      for (int j = 0; j < 6; ++j) rows[r][j] = rows[r][j] - f * rows[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<std::array<Coefficient, 6>> basis;
  for (int col = 0; col < 6; ++col) {
    if (std::find(pivot_col.begin(), pivot_col.end(), col) != pivot_col.end()) continue;
    std::array<Coefficient, 6> x;
    x.fill(zero);
    x[static_cast<std::size_t>(col)] = one;
    for (std::size_t r = 0; r < rank; ++r)
      x[static_cast<std::size_t>(pivot_col[r])] = -rows[r][static_cast<std::size_t>(col)];
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace

SubspaceChain ascending_series(const StructureEquations& s, const JAction& J) {
  if (!s.coframe()->is_real()) throw ComplexCoframe("the ascending series uses the real frame");
  auto t = s.coframe()->table();
  const Coefficient zero = Coefficient::integer(t, 0);

  SubspaceChain chain;
  // brackets c[i][j] and the J frame action, with a parameter scan for the
  // generic-rank warning
  std::array<std::array<std::array<Coefficient, 6>, 6>, 6> c;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      c[i][j] = liealg::bracket(s, i, j);
      for (const auto& e : c[i][j])
        if (!e.is_constant()) chain.generic_rank_warning = true;
    }
  std::array<std::array<Coefficient, 6>, 6> jv;
  for (std::size_t i = 0; i < 6; ++i) {
    jv[i] = J.vector_image(i);
    for (const auto& e : jv[i])
      if (!e.is_constant()) chain.generic_rank_warning = true;
  }

  auto next_term = [&](const std::vector<std::array<Coefficient, 6>>& prev) {
    auto ann = kernel6(prev, t);  // functionals vanishing on the previous term
    std::vector<std::array<Coefficient, 6>> cond;
    for (std::size_t j = 0; j < 6; ++j) {
      for (const auto& phi : ann) {
        std::array<Coefficient, 6> r1, r2;
        r1.fill(zero);
        r2.fill(zero);
        for (std::size_t i = 0; i < 6; ++i) {
          for (std::size_t k = 0; k < 6; ++k) {
            r1[i] = r1[i] + phi[k] * c[i][j][k];
            Coefficient acc = zero;
            for (std::size_t m = 0; m < 6; ++m) acc = acc + jv[i][m] * c[m][j][k];
            r2[i] = r2[i] + phi[k] * acc;
          }
        }
        cond.push_back(std::move(r1));
        cond.push_back(std::move(r2));
      }
    }
    return kernel6(std::move(cond), t);
  };

  std::vector<std::array<Coefficient, 6>> prev;
  bool first = true;
  while (true) {
    auto next = next_term(prev);
    if (!first && next.size() == prev.size()) break;
    chain.terms.push_back(next);
    prev = std::move(next);
    first = false;
    if (prev.size() == 6) break;
  }
  chain.stabilized_dim = prev.size();
  return chain;
}

Nilpotency classify_complex_structure(const StructureEquations& s, const JAction& J) {
  return ascending_series(s, J).stabilized_dim == 6 ? Nilpotency::nilpotent
                                                    : Nilpotency::non_nilpotent;
}

PositivityReport check_positivity(const HermitianData& h, const Assignment& a) {
  using coeffield::GQ;
  auto real_eval = [&](const Coefficient& c) {
    GQ g = c.eval_at(a);
    assert(g.is_real());
    return g.re;
  };
  const Rational R2 = real_eval(h.r2), S2 = real_eval(h.s2), T2 = real_eval(h.t2);
  const GQ u(real_eval(h.u_re), real_eval(h.u_im));
  const GQ v(real_eval(h.v_re), real_eval(h.v_im));
  const GQ z(real_eval(h.z_re), real_eval(h.z_im));
  const Rational U2 = (u * u.conj()).re, V2 = (v * v.conj()).re, Z2 = (z * z.conj()).re;
  const GQ cross = GQ(0, 1) * u.conj() * v.conj() * z;

  PositivityReport rep;
  auto add = [&](std::string name, Rational lhs, Rational rhs) {
    rep.entries.push_back({std::move(name), lhs, rhs, lhs > rhs});
  };
  add("r^2 s^2 > |u|^2", R2 * S2, U2);
  add("s^2 t^2 > |v|^2", S2 * T2, V2);
  add("r^2 t^2 > |z|^2", R2 * T2, Z2);
  add("r^2 s^2 t^2 + 2 Re(i u~ v~ z) > t^2|u|^2 + r^2|v|^2 + s^2|z|^2",
      R2 * S2 * T2 + 2 * cross.re, T2 * U2 + R2 * V2 + S2 * Z2);
  rep.pass = true;
  for (const auto& e : rep.entries) rep.pass = rep.pass && e.ok;
  return rep;
}

std::string PositivityReport::str() const {
  std::ostringstream os;
  os << (pass ? "positivity: pass" : "positivity: fail");
  for (const auto& e : entries)
    os << "\n  " << e.name << ": " << e.lhs.get_str() << " > " << e.rhs.get_str() << " is "
       << (e.ok ? "true" : "false");
  return os.str();
}

BalancedReport check_balanced(const StructureEquations& s, const HermitianData& h,
                              const RuleSet* rules) {
  Form F = h.F();
  BalancedReport rep;
  rep.f_wedge_df = reduce(wedge(F, s.d(F)), rules);
  rep.pass = rep.f_wedge_df.is_zero();
  return rep;
}

BalancedReport check_balanced(const SU3Model& m, const RuleSet* rules) {
  BalancedReport rep;
  rep.f_wedge_df = reduce(wedge(m.F, m.equations.d(m.F)), rules);
  rep.pass = rep.f_wedge_df.is_zero();
  return rep;
}

std::string BalancedReport::str() const {
  std::ostringstream os;
  os << (pass ? "balanced: pass" : "balanced: fail");
  if (!pass) os << "\n  F^dF = " << f_wedge_df.str();
  return os.str();
}

Form lee_form(const SU3Model& m) {
  auto t = m.F.coframe()->table();
  Form delta_F = -exterior::hodge_star(m.equations.d(exterior::hodge_star(m.F)));
  return exterior::apply_J(delta_F, m.J).scaled(Coefficient::rational(t, Rational(-1, 2)));
}

Form torsion_3form(const SU3Model& m) { return exterior::apply_J(m.equations.d(m.F), m.J); }

namespace {

SU3Model finish_model(const CoframePtr& e, StructureEquations eqs, Family family, int sign,
                      std::vector<std::pair<std::string, Coefficient>> params,
                      std::vector<std::pair<std::string, Coefficient>> derived) {
  auto t = e->table();
  const Coefficient one = Coefficient::integer(t, 1);
  const Coefficient i = Coefficient::i(t);
  auto g = [&](int k) { return Form::generator(e, static_cast<std::size_t>(k - 1)); };
  Form F = Form::term(e, {1, 2}, one) + Form::term(e, {3, 4}, one) + Form::term(e, {5, 6}, one);
  Form Psi = wedge(wedge(g(1) + g(2).scaled(i), g(3) + g(4).scaled(i)), g(5) + g(6).scaled(i));
  return SU3Model{std::move(eqs), JAction::adapted(e),  std::move(F), std::move(Psi),
                  family,         sign,                 std::move(params), std::move(derived)};
}

}  // namespace

SU3Model adapted_family_I(const ParamTablePtr& t, const Coefficient& r, const Coefficient& s,
                          int sign) {
  if (r.is_zero() || s.is_zero())
    throw DegenerateParameters("family I requires r and s nonzero");
  auto e = exterior::Coframe::make_real(t, {"e1", "e2", "e3", "e4", "e5", "e6"});
  const Coefficient two = Coefficient::integer(t, 2);
  auto term = [&](std::initializer_list<int> idx, const Coefficient& c) {
    return Form::term(e, idx, c);
  };
  auto d6 = (term({1, 3}, two / (r * s)) + term({2, 4}, two / (r * s)));
  if (sign < 0) d6 = -d6;
  StructureEquations eqs(
      e, {Form::zero(e), Form::zero(e), term({1, 5}, two * s / r), term({2, 5}, two * s / r),
          Form::zero(e), d6});
  return finish_model(e, std::move(eqs), Family::I, sign, {{"r", r}, {"s", s}}, {});
}

SU3Model adapted_family_II(const ParamTablePtr& t, const Coefficient& r, const Coefficient& p,
                           const Coefficient& q, int sign) {
  if (r.is_zero() || p.is_zero() || q.is_zero() || (p * p - q * q).is_zero())
    throw DegenerateParameters("family II requires r, p, q nonzero and p^2 != q^2");
  auto e = exterior::Coframe::make_real(t, {"e1", "e2", "e3", "e4", "e5", "e6"});
  const Coefficient one = Coefficient::integer(t, 1);
  const Coefficient four = Coefficient::integer(t, 4);
  const Coefficient k = one / (r * (p * p - q * q));
  const Coefficient sg = sign > 0 ? one : -one;
  auto term = [&](std::initializer_list<int> idx, const Coefficient& c) {
    return Form::term(e, idx, c);
  };
  auto pair13 = term({1, 3}, one) + term({2, 4}, one);
  auto pair16 = term({1, 6}, one) - term({2, 5}, one);
  Form d3 = (pair13.scaled(-sg) + pair16.scaled(sg * q / p) -
             term({1, 4}, four * p * p * q * q) - term({1, 5}, four * p * p * p * q))
                .scaled(k);
  Form d4 = (-term({2, 4}, four * p * p * q * q) - term({2, 5}, four * p * p * p * q)).scaled(k);
  Form d5 = (term({2, 4}, four * p * q * q * q) + term({2, 5}, four * p * p * q * q)).scaled(k);
  Form d6 = (pair13.scaled(-sg * p / q) + pair16.scaled(sg) -
             term({1, 4}, four * p * q * q * q) - term({1, 5}, four * p * p * q * q))
                .scaled(k);
  StructureEquations eqs(e, {Form::zero(e), Form::zero(e), std::move(d3), std::move(d4),
                             std::move(d5), std::move(d6)});
  const Coefficient s2 = p * p + q * q;
  const Coefficient t2 = s2 / (four * p * p * q * q);
  return finish_model(e, std::move(eqs), Family::II, sign, {{"r", r}, {"p", p}, {"q", q}},
                      {{"s2", s2}, {"t2", t2}});
}

}  // namespace nilgeom::complexgeom
