#include "nilgeom/liealg.hpp"

#include <bit>
#include <cassert>
#include <sstream>

namespace nilgeom::liealg {

namespace {

Coefficient reduce(const Coefficient& c, const RuleSet* rules) {
  return rules ? c.apply_rules(*rules) : c;
}

Form reduce(const Form& f, const RuleSet* rules) {
  return rules ? f.apply_rules(*rules) : f;
}

bool coefficient_is_real(const Coefficient& c, const RuleSet* rules) {
  return reduce(c - c.conj(), rules).is_zero();
}

}  // namespace

StructureEquations::StructureEquations(CoframePtr cf, std::vector<Form> diffs)
    : cf_(std::move(cf)), diffs_(std::move(diffs)) {
  const std::size_t want = cf_->is_real() ? 6 : 3;
  if (diffs_.size() != want)
    throw CoframeMismatch("expected " + std::to_string(want) +
                          " generator differentials, got " + std::to_string(diffs_.size()));
  for (const auto& f : diffs_) {
    if (!(*f.coframe() == *cf_))
      throw CoframeMismatch("generator differential on a different coframe");
    if (!f.is_zero() && (!f.is_homogeneous() || f.degree() != 2))
      throw DegreeMismatch("generator differential must be a 2-form");
  }
}

Form StructureEquations::d_generator(std::size_t i) const {
  if (cf_->is_real()) return diffs_.at(i);
  if (i < 3) return diffs_[i];
  return diffs_.at(i - 3).conj();
}

Form StructureEquations::d(const Form& a) const {
  if (!(*a.coframe() == *cf_)) throw CoframeMismatch("form is not over this coframe");
  Form out(cf_);
  for (const auto& [mask, c] : a.terms()) {
    int pos = 0;  // 1-based position of the generator inside the ascending word
    for (int bit = 0; bit < 6; ++bit) {
      if (!(mask & (1u << bit))) continue;
      ++pos;
      Form rest(cf_);
      rest.add_term(static_cast<std::uint8_t>(mask & ~(1u << bit)),
                    Coefficient::integer(cf_->table(), (pos % 2 == 1) ? 1 : -1));
      out = out + wedge(d_generator(static_cast<std::size_t>(bit)), rest).scaled(c);
    }
  }
  return out;
}

StructureEquations StructureEquations::apply_rules(const RuleSet& rules) const {
  std::vector<Form> out;
  out.reserve(diffs_.size());
  for (const auto& f : diffs_) out.push_back(f.apply_rules(rules));
  return StructureEquations(cf_, std::move(out));
}

bool StructureEquations::operator==(const StructureEquations& o) const {
  if (!(*cf_ == *o.cf_)) return false;
  return diffs_ == o.diffs_;
}

std::string StructureEquations::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < diffs_.size(); ++i) {
    if (i) os << "\n";
    os << "d " << cf_->generator_name(i) << " = " << diffs_[i].str();
  }
  return os.str();
}

JacobiReport check_jacobi(const StructureEquations& s, const RuleSet* rules) {
  JacobiReport rep;
  rep.pass = true;
  for (std::size_t i = 0; i < s.stored_count(); ++i) {
    Form dd = reduce(s.d(s.d_generator(i)), rules);
    if (!dd.is_zero()) rep.pass = false;
    rep.entries.emplace_back(s.coframe()->generator_name(i), std::move(dd));
  }
  return rep;
}

std::string JacobiReport::str() const {
  std::ostringstream os;
  os << (pass ? "jacobi: pass" : "jacobi: fail");
  for (const auto& [name, form] : entries)
    os << "\n  d(d " << name << ") = " << form.str();
  return os.str();
}

CoframeTransformation::CoframeTransformation(ParamTablePtr table,
                                             std::vector<std::vector<Coefficient>> m)
    : table_(std::move(table)), m_(std::move(m)) {
  if (m_.size() != 3 && m_.size() != 6)
    throw CoframeMismatch("coframe transformation must be 3x3 or 6x6");
  for (const auto& row : m_)
    if (row.size() != m_.size()) throw CoframeMismatch("coframe transformation must be square");
}

CoframeTransformation CoframeTransformation::identity(ParamTablePtr table, std::size_t n) {
  std::vector<std::vector<Coefficient>> m(
      n, std::vector<Coefficient>(n, Coefficient::integer(table, 0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Coefficient::integer(table, 1);
  return CoframeTransformation(std::move(table), std::move(m));
}

CoframeTransformation operator*(const CoframeTransformation& a, const CoframeTransformation& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw CoframeMismatch("transformation size mismatch in product");
  std::vector<std::vector<Coefficient>> m(
      n, std::vector<Coefficient>(n, Coefficient::integer(a.table_, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m[i][j] = m[i][j] + a.at(i, k) * b.at(k, j);
  return CoframeTransformation(a.table_, std::move(m));
}

std::array<Coefficient, 6> bracket(const StructureEquations& s, std::size_t i, std::size_t j) {
  if (!s.coframe()->is_real()) throw ComplexCoframe("brackets act on the real frame");
  std::array<Coefficient, 6> out;
  for (std::size_t k = 0; k < 6; ++k)
    out[k] = -exterior::evaluate_on_frame(s.d_generator(k), {i, j});
  return out;
}

std::vector<std::vector<Coefficient>> invert_matrix(
    const std::vector<std::vector<Coefficient>>& m, const RuleSet* rules, bool as_map) {
  const std::size_t n = m.size();
  auto table = m.at(0).at(0).table();
  const Coefficient zero = Coefficient::integer(table, 0);
  const Coefficient one = Coefficient::integer(table, 1);
  // augmented [work | inv]
  std::vector<std::vector<Coefficient>> work(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw CoframeMismatch("matrix must be square");
    work[i].reserve(n);
    for (const auto& c : m[i]) work[i].push_back(reduce(c, rules));
    inv[i].assign(n, zero);
    inv[i][i] = one;
  }
  auto fail = [&]() -> void {
    if (as_map) throw SingularMap("identification matrix is singular");
    throw SingularTransformation("coframe transformation is singular");
  };
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && work[piv][col].is_zero()) ++piv;
    if (piv == n) fail();
    std::swap(work[piv], work[col]);
    std::swap(inv[piv], inv[col]);
    const Coefficient p = work[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      work[col][j] = reduce(work[col][j] / p, rules);
      inv[col][j] = reduce(inv[col][j] / p, rules);
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || work[row][col].is_zero()) continue;
      const Coefficient f = work[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        work[row][j] = reduce(work[row][j] - f * work[col][j], rules);
        inv[row][j] = reduce(inv[row][j] - f * inv[col][j], rules);
      }
    }
  }
  return inv;
}

TransformResult transform_coframe(const StructureEquations& s, const CoframeTransformation& m,
                                  const std::optional<Form>& F, const RuleSet* rules) {
  const auto& cf = s.coframe();
  const std::size_t n = cf->is_real() ? 6 : 3;
  if (m.size() != n)
    throw CoframeMismatch("transformation size does not match the coframe kind");
  std::vector<std::vector<Coefficient>> raw(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) raw[i].push_back(m.at(i, j));
  auto inv = invert_matrix(raw, rules, /*as_map=*/false);

  // images of the old generators in terms of the new ones (same coframe object,
  // indices now meaning the transformed generators)
  std::array<Form, 6> images;
  images.fill(Form(cf));
  for (std::size_t j = 0; j < n; ++j) {
    Form img(cf);
    for (std::size_t i = 0; i < n; ++i)
      img = img + Form::generator(cf, i).scaled(inv[j][i]);
    images[j] = img;
  }
  if (!cf->is_real()) {
    for (std::size_t j = 0; j < 3; ++j) {
      Form imgc(cf);
      for (std::size_t i = 0; i < 3; ++i)
        imgc = imgc + Form::generator(cf, i + 3).scaled(inv[j][i].conj());
      images[j + 3] = imgc;
    }
  }

  std::vector<Form> diffs;
  diffs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Form dnew(cf);
    for (std::size_t j = 0; j < n; ++j)
      dnew = dnew + s.d_generator(j).scaled(m.at(i, j));
    diffs.push_back(reduce(substitute(dnew, images), rules));
  }
  TransformResult out{StructureEquations(cf, std::move(diffs)), std::nullopt};
  if (F) out.F = reduce(substitute(*F, images), rules);
  return out;
}

bool structures_equal(const StructureEquations& a, const StructureEquations& b) {
  if (!(*a.coframe() == *b.coframe()))
    throw CoframeMismatch("structures live on different coframes");
  return a == b;
}

RealifyResult realify(const StructureEquations& s, CoframePtr real_coframe,
                      const std::vector<Form>& map, const RuleSet* rules) {
  const auto& cf = s.coframe();
  if (cf->is_real()) throw CoframeMismatch("realify expects complex structure equations");
  if (!real_coframe->is_real()) throw CoframeMismatch("realify target must be a real coframe");
  if (map.size() != 3) throw CoframeMismatch("realify map must give the three generators");
  for (const auto& f : map) {
    if (!(*f.coframe() == *real_coframe))
      throw CoframeMismatch("realify map entry not over the target coframe");
    if (f.is_zero() || !f.is_homogeneous() || f.degree() != 1)
      throw DegreeMismatch("realify map entry must be a 1-form");
  }
  auto table = cf->table();

  // rows 0..2: generator k = sum_j C[k][j] a^j; rows 3..5 the conjugates
  std::vector<std::vector<Coefficient>> C(6, std::vector<Coefficient>());
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t j = 0; j < 6; ++j)
      C[k].push_back(map[k].coefficient(static_cast<std::uint8_t>(1u << j)));
    for (std::size_t j = 0; j < 6; ++j) C[k + 3].push_back(C[k][j].conj());
  }
  auto inv = invert_matrix(C, rules, /*as_map=*/true);

  std::array<Form, 6> images;  // complex generator -> 1-form over the real coframe
  for (std::size_t k = 0; k < 3; ++k) {
    images[k] = map[k];
    images[k + 3] = map[k].conj();
  }

  std::vector<Form> diffs;
  diffs.reserve(6);
  for (std::size_t j = 0; j < 6; ++j) {
    Form da(cf);
    for (std::size_t k = 0; k < 6; ++k)
      da = da + s.d_generator(k).scaled(inv[j][k]);
    Form real_da = reduce(substitute(da, images), rules);
    for (const auto& [mask, c] : real_da.terms()) {
      (void)mask;
      assert(coefficient_is_real(c, rules));
    }
    diffs.push_back(std::move(real_da));
  }

  JAction J;
  J.coframe = real_coframe;
  const Coefficient iunit = Coefficient::i(table);
  for (std::size_t j = 0; j < 6; ++j) {
    Form ja(real_coframe);
    for (std::size_t k = 0; k < 3; ++k)
      ja = ja + images[k].scaled(inv[j][k] * iunit) - images[k + 3].scaled(inv[j][k + 3] * iunit);
    ja = reduce(ja, rules);
    for (std::size_t col = 0; col < 6; ++col) {
      Coefficient c = ja.coefficient(static_cast<std::uint8_t>(1u << col));
      assert(coefficient_is_real(c, rules));
      J.m[j][col] = c;
    }
  }
  // J must square to -Id (checked through the rules when present)
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      Coefficient acc = Coefficient::integer(table, a == b ? 1 : 0);
      for (std::size_t k = 0; k < 6; ++k) acc = acc + J.m[a][k] * J.m[k][b];
      if (!reduce(acc, rules).is_zero())
        throw SingularMap("identification does not induce a complex structure");
    }
  }

  return RealifyResult{StructureEquations(std::move(real_coframe), std::move(diffs)),
                       std::move(J)};
}

RealifyResult realify_default(const StructureEquations& s, CoframePtr real_coframe,
                              const RuleSet* rules) {
  auto table = s.coframe()->table();
  const Coefficient iunit = Coefficient::i(table);
  std::vector<Form> map;
  for (std::size_t k = 0; k < 3; ++k)
    map.push_back(Form::generator(real_coframe, 2 * k) +
                  Form::generator(real_coframe, 2 * k + 1).scaled(iunit));
  return realify(s, std::move(real_coframe), map, rules);
}

}  // namespace nilgeom::liealg
