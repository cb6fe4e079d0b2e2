#include "nilgeom/connections.hpp"

#include <sstream>

namespace nilgeom::connections {

namespace {

using exterior::evaluate_on_frame;
using exterior::wedge;

std::array<std::array<Form, 6>, 6> zero_matrix(const CoframePtr& c) {
  std::array<std::array<Form, 6>, 6> m{
      {{Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c),
        Form::zero(c)},
       {Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c),
        Form::zero(c)},
       {Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c),
        Form::zero(c)},
       {Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c),
        Form::zero(c)},
       {Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c),
        Form::zero(c)},
       {Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c), Form::zero(c),
        Form::zero(c)}}};
  return m;
}

std::string matrix_str(const std::array<std::array<Form, 6>, 6>& m, const char* name) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      if (!first) os << "\n";
      first = false;
      os << name << " " << (i + 1) << " " << (j + 1) << " = " << m[i][j].str();
    }
  return os.str();
}

}  // namespace

std::string Connection::str() const { return matrix_str(sigma, "sigma"); }

std::string CurvatureMatrix::str() const { return matrix_str(omega, "Omega"); }

std::string RelationReport::str() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail");
  for (const auto& f : failed) os << "\n  violated: " << f;
  return os.str();
}

Connection levi_civita(const StructureEquations& s) {
  const CoframePtr& c = s.coframe();
  if (!c->is_real()) throw ComplexCoframe("connections need a real coframe");
  auto t = c->table();
  const Coefficient half = Coefficient::rational(t, coeffield::Rational(1, 2));

  // a[k][i][j] = de^{k+1}(e_{i+1}, e_{j+1})
  std::array<std::array<std::array<Coefficient, 6>, 6>, 6> a;
  for (std::size_t k = 0; k < 6; ++k) {
    Form dk = s.d_generator(k);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) a[k][i][j] = evaluate_on_frame(dk, {i, j});
  }

  Connection out{c, ConnectionKind::levi_civita, zero_matrix(c), std::nullopt};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t k = 0; k < 6; ++k) {
        Coefficient v = half * (a[i][j][k] - a[k][i][j] + a[j][k][i]);
        if (!v.is_zero()) out.sigma[i][j].add_term(static_cast<std::uint8_t>(1u << k), v);
      }
  return out;
}

Connection chern(const SU3Model& m) {
  Connection g = levi_civita(m.equations);
  const CoframePtr& c = g.coframe;
  auto t = c->table();
  const Coefficient half = Coefficient::rational(t, coeffield::Rational(1, 2));
  Form dF = m.equations.d(m.F);

  auto C = zero_matrix(c);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t k = 0; k < 6; ++k) {
        // C^i_j(e_k) = dF(J e_k, e_i, e_j)
        auto jek = m.J.vector_image(k);
        Coefficient v = Coefficient::integer(t, 0);
        for (std::size_t w = 0; w < 6; ++w)
          if (!jek[w].is_zero()) v = v + jek[w] * evaluate_on_frame(dF, {w, i, j});
        if (!v.is_zero()) C[i][j].add_term(static_cast<std::uint8_t>(1u << k), v);
      }

  Connection out{c, ConnectionKind::chern, zero_matrix(c), C};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) out.sigma[i][j] = g.sigma[i][j] - C[i][j].scaled(half);
  return out;
}

Connection bismut(const SU3Model& m) {
  Connection g = levi_civita(m.equations);
  const CoframePtr& c = g.coframe;
  auto t = c->table();
  const Coefficient half = Coefficient::rational(t, coeffield::Rational(1, 2));
  Form T = complexgeom::torsion_3form(m);

  Connection out{c, ConnectionKind::bismut, zero_matrix(c), std::nullopt};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      out.sigma[i][j] = g.sigma[i][j];
      for (std::size_t k = 0; k < 6; ++k) {
        Coefficient v = half * evaluate_on_frame(T, {k, j, i});
        if (!v.is_zero()) out.sigma[i][j].add_term(static_cast<std::uint8_t>(1u << k), v);
      }
    }
  return out;
}

CurvatureMatrix curvature(const Connection& c, const StructureEquations& s) {
  if (!(*c.coframe == *s.coframe()))
    throw CoframeMismatch("connection over a different coframe");
  CurvatureMatrix out{c.coframe, zero_matrix(c.coframe)};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      Form om = s.d(c.sigma[i][j]);
      for (std::size_t k = 0; k < 6; ++k) om = om + wedge(c.sigma[i][k], c.sigma[k][j]);
      out.omega[i][j] = std::move(om);
    }
  return out;
}

namespace {

void require(RelationReport& rep, bool ok, const std::string& label) {
  if (!ok) rep.failed.push_back(label);
}

}  // namespace

RelationReport su3_connection_check(const Connection& c) {
  const auto& s = c.sigma;
  RelationReport rep;
  require(rep, s[0][2] == s[1][3], "sigma 1 3 = sigma 2 4");
  require(rep, s[0][3] == -s[1][2], "sigma 1 4 = -sigma 2 3");
  require(rep, s[0][4] == s[1][5], "sigma 1 5 = sigma 2 6");
  require(rep, s[0][5] == -s[1][4], "sigma 1 6 = -sigma 2 5");
  require(rep, s[2][4] == s[3][5], "sigma 3 5 = sigma 4 6");
  require(rep, s[2][5] == -s[3][4], "sigma 3 6 = -sigma 4 5");
  require(rep, (s[0][1] + s[2][3] + s[4][5]).is_zero(), "sigma 1 2 + sigma 3 4 + sigma 5 6 = 0");
  rep.pass = rep.failed.empty();
  return rep;
}

RelationReport su3_curvature_check(const CurvatureMatrix& omega) {
  const auto& o = omega.omega;
  RelationReport rep;
  require(rep, o[0][2] == o[1][3], "Omega 1 3 = Omega 2 4");
  require(rep, o[0][3] == -o[1][2], "Omega 1 4 = -Omega 2 3");
  require(rep, o[0][4] == o[1][5], "Omega 1 5 = Omega 2 6");
  require(rep, o[0][5] == -o[1][4], "Omega 1 6 = -Omega 2 5");
  require(rep, o[2][4] == o[3][5], "Omega 3 5 = Omega 4 6");
  require(rep, o[2][5] == -o[3][4], "Omega 3 6 = -Omega 4 5");
  require(rep, (o[0][1] + o[2][3] + o[4][5]).is_zero(),
          "Omega 1 2 + Omega 3 4 + Omega 5 6 = 0");
  rep.pass = rep.failed.empty();
  return rep;
}

RelationReport instanton_check(const CurvatureMatrix& omega, const JAction& J) {
  RelationReport rep;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const Form& om = omega.omega[i][j];
      if (om.is_zero()) continue;
      Coefficient tr = evaluate_on_frame(om, {0, 1}) + evaluate_on_frame(om, {2, 3}) +
                       evaluate_on_frame(om, {4, 5});
      std::string id = std::to_string(i + 1) + " " + std::to_string(j + 1);
      require(rep, tr.is_zero(),
              "Omega " + id + " (e1,e2) + (e3,e4) + (e5,e6) = 0");
      require(rep, exterior::apply_J(om, J) == om, "Omega " + id + " (Je_k,Je_l) = (e_k,e_l)");
    }
  rep.pass = rep.failed.empty();
  return rep;
}

Connection instanton_family(const CoframePtr& coframe, const Coefficient& lambda,
                            const Coefficient& mu, const Coefficient& tau) {
  if (!coframe->is_real()) throw ComplexCoframe("connections need a real coframe");
  Form base = Form::generator(coframe, 0).scaled(lambda) +
              Form::generator(coframe, 1).scaled(mu) + Form::generator(coframe, 5).scaled(tau);
  Connection out{coframe, ConnectionKind::custom, zero_matrix(coframe), std::nullopt};
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      Form v = base;
      if ((i == 1 && j == 2) || (i == 1 && j == 4) || (i == 3 && j == 4)) v = -base;
      if (i == 4 && j == 5) v = -(base + base);
      out.sigma[i][j] = v;
      out.sigma[j][i] = -v;
    }
  return out;
}

PontrjaginResult pontrjagin_trace(const CurvatureMatrix& omega) {
  auto t = omega.coframe->table();
  Form trace = Form::zero(omega.coframe);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      trace = trace + wedge(omega.omega[i][j], omega.omega[i][j]);
  const Coefficient denom =
      Coefficient::integer(t, 8) * Coefficient::param(t, "pi2");
  return PontrjaginResult{trace, trace.scaled(Coefficient::integer(t, 1) / denom)};
}

}  // namespace nilgeom::connections
