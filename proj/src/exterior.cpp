#include "nilgeom/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

#include "nilgeom/errors.hpp"

namespace nilgeom::exterior {

namespace detail {

unsigned mask_degree(std::uint8_t mask) { return std::popcount(mask); }

int wedge_sign(std::uint8_t a, std::uint8_t b) {
  if (a & b) return 0;
  // inversions: pairs (i in a, j in b) with i > j
  unsigned inversions = 0;
  for (int j = 0; j < 6; ++j)
    if (b & (1 << j)) inversions += std::popcount(static_cast<unsigned>(a >> (j + 1)));
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<std::size_t> mask_indices(std::uint8_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < 6; ++k)
    if (mask & (1 << k)) out.push_back(k);
  return out;
}

}  // namespace detail

using detail::mask_degree;
using detail::mask_indices;
using detail::wedge_sign;

// ---------------------------------------------------------------------------
// Coframe

Coframe::Coframe(CoframeKind kind, ParamTablePtr table, std::vector<std::string> names)
    : kind_(kind), table_(std::move(table)), names_(std::move(names)) {
  std::size_t expected = kind_ == CoframeKind::real ? 6 : 3;
  if (names_.size() != expected)
    throw ParseError("coframe needs " + std::to_string(expected) + " generators, got " +
                     std::to_string(names_.size()));
  for (std::size_t a = 0; a < names_.size(); ++a) {
    if (names_[a].empty() || names_[a][0] == '~')
      throw ParseError("invalid generator name " + names_[a]);
    for (std::size_t b = a + 1; b < names_.size(); ++b)
      if (names_[a] == names_[b]) throw DuplicateGenerator(names_[a]);
  }
}

CoframePtr Coframe::make_real(ParamTablePtr table, std::vector<std::string> names) {
  return std::make_shared<const Coframe>(CoframeKind::real, std::move(table),
                                         std::move(names));
}

CoframePtr Coframe::make_complex(ParamTablePtr table, std::vector<std::string> names) {
  return std::make_shared<const Coframe>(CoframeKind::complex, std::move(table),
                                         std::move(names));
}

std::string Coframe::generator_name(std::size_t idx) const {
  assert(idx < 6);
  if (kind_ == CoframeKind::real) return names_[idx];
  return idx < 3 ? names_[idx] : "~" + names_[idx - 3];
}

std::size_t Coframe::generator_index(const std::string& name) const {
  for (std::size_t k = 0; k < 6; ++k)
    if (generator_name(k) == name) return k;
  throw UnknownParameter("unknown generator " + name);
}

bool Coframe::has_generator(const std::string& name) const {
  for (std::size_t k = 0; k < 6; ++k)
    if (generator_name(k) == name) return true;
  return false;
}

std::size_t Coframe::conjugate_index(std::size_t idx) const {
  assert(kind_ == CoframeKind::complex);
  return idx < 3 ? idx + 3 : idx - 3;
}

bool Coframe::operator==(const Coframe& o) const {
  return kind_ == o.kind_ && names_ == o.names_ && *table_ == *o.table_;
}

static void require_same_coframe(const Form& a, const Form& b) {
  if (!(*a.coframe() == *b.coframe()))
    throw CoframeMismatch("forms live on different coframes");
}

// ---------------------------------------------------------------------------
// Form

Form Form::scalar(CoframePtr c, Coefficient v) {
  Form f(std::move(c));
  f.add_term(0, v);
  return f;
}

Form Form::generator(CoframePtr c, std::size_t idx) {
  assert(idx < 6);
  Form f(c);
  f.add_term(static_cast<std::uint8_t>(1 << idx),
             Coefficient::integer(c->table(), 1));
  return f;
}

Form Form::term(CoframePtr c, std::initializer_list<int> indices, Coefficient v) {
  Form f(c);
  std::uint8_t mask = 0;
  int sign = 1;
  for (int raw : indices) {
    assert(raw >= 1 && raw <= 6);
    std::uint8_t bit = static_cast<std::uint8_t>(1 << (raw - 1));
    int s = wedge_sign(mask, bit);
    if (s == 0) return f;  // repeated index: zero term
    sign *= s;
    mask |= bit;
  }
  f.add_term(mask, sign == 1 ? v : -v);
  return f;
}

void Form::add_term(std::uint8_t mask, const Coefficient& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(mask);
  if (it == terms_.end()) {
    terms_.emplace(mask, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool Form::is_homogeneous() const {
  if (terms_.empty()) return true;
  unsigned d = mask_degree(terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (mask_degree(m) != d) return false;
  return true;
}

unsigned Form::degree() const {
  if (!is_homogeneous()) throw NonHomogeneous("mixed-degree form");
  return terms_.empty() ? 0 : mask_degree(terms_.begin()->first);
}

Coefficient Form::coefficient(std::uint8_t mask) const {
  auto it = terms_.find(mask);
  if (it != terms_.end()) return it->second;
  return Coefficient::integer(coframe_->table(), 0);
}

Form Form::operator-() const {
  Form r(coframe_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Form Form::operator+(const Form& o) const {
  require_same_coframe(*this, o);
  Form r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::scaled(const Coefficient& c) const {
  Form r(coframe_);
  if (c.is_zero()) return r;
  for (const auto& [m, cc] : terms_) r.add_term(m, cc * c);
  return r;
}

bool Form::operator==(const Form& o) const {
  require_same_coframe(*this, o);
  return terms_ == o.terms_;
}

Form Form::conj() const {
  Form r(coframe_);
  if (coframe_->kind() == CoframeKind::real) {
    for (const auto& [m, c] : terms_) r.add_term(m, c.conj());
    return r;
  }
  // wedge the conjugate generators in the original order and re-sort
  for (const auto& [m, c] : terms_) {
    std::uint8_t mask = 0;
    int sign = 1;
    for (std::size_t idx : mask_indices(m)) {
      std::uint8_t bit = static_cast<std::uint8_t>(1 << coframe_->conjugate_index(idx));
      int s = wedge_sign(mask, bit);
      assert(s != 0);
      sign *= s;
      mask |= bit;
    }
    r.add_term(mask, sign == 1 ? c.conj() : -c.conj());
  }
  return r;
}

Form Form::apply_rules(const RuleSet& rules) const {
  Form r(coframe_);
  for (const auto& [m, c] : terms_) r.add_term(m, c.apply_rules(rules));
  return r;
}

std::map<std::uint8_t, GQ> Form::eval_at(const Assignment& a) const {
  std::map<std::uint8_t, GQ> out;
  for (const auto& [m, c] : terms_) {
    GQ v = c.eval_at(a);
    if (!v.is_zero()) out.emplace(m, v);
  }
  return out;
}

Form Form::bidegree_part(unsigned p, unsigned q) const {
  if (coframe_->kind() != CoframeKind::complex)
    throw CoframeMismatch("bidegree requires a complex coframe");
  Form r(coframe_);
  for (const auto& [m, c] : terms_) {
    unsigned holo = std::popcount(static_cast<unsigned>(m & 0x07));
    unsigned anti = std::popcount(static_cast<unsigned>(m & 0x38));
    if (holo == p && anti == q) r.add_term(m, c);
  }
  return r;
}

// canonical term order for printing: degree, then lexicographic index tuple
static bool print_less(std::uint8_t a, std::uint8_t b) {
  unsigned da = mask_degree(a), db = mask_degree(b);
  if (da != db) return da < db;
  auto ia = mask_indices(a), ib = mask_indices(b);
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

std::string Form::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::uint8_t> masks;
  for (const auto& [m, c] : terms_) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), print_less);
  std::string out;
  for (std::uint8_t m : masks) {
    std::string part;
    const Coefficient& c = terms_.at(m);
    if (m == 0) {
      part = c.str();
    } else {
      std::string gens;
      for (std::size_t idx : mask_indices(m)) {
        if (!gens.empty()) gens += "^";
        gens += coframe_->generator_name(idx);
      }
      part = c.is_one() ? gens : "(" + c.str() + ")*" + gens;
    }
    if (!out.empty()) out += " + ";
    out += part;
  }
  return out;
}

// ---------------------------------------------------------------------------
// wedge and substitution

Form wedge(const Form& a, const Form& b) {
  require_same_coframe(a, b);
  Form r(a.coframe());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      Coefficient c = ca * cb;
      r.add_term(ma | mb, s == 1 ? c : -c);
    }
  return r;
}

Form substitute(const Form& a, const std::array<Form, 6>& images) {
  const CoframePtr& target = images[0].coframe();
  Form r(target);
  for (const auto& [m, c] : a.terms()) {
    Form acc = Form::scalar(target, c);
    for (std::size_t idx : mask_indices(m)) acc = wedge(acc, images[idx]);
    r = r + acc;
  }
  return r;
}

// ---------------------------------------------------------------------------
// JAction

JAction JAction::adapted(CoframePtr c) {
  if (!c->is_real()) throw ComplexCoframe("adapted J lives on a real coframe");
  JAction j;
  j.coframe = c;
  auto zero = Coefficient::integer(c->table(), 0);
  for (auto& row : j.m) row.fill(zero);
  auto one = Coefficient::integer(c->table(), 1);
  // J e^{2k-1} = -e^{2k}, J e^{2k} = e^{2k-1}
  for (int k = 0; k < 3; ++k) {
    j.m[2 * k][2 * k + 1] = -one;
    j.m[2 * k + 1][2 * k] = one;
  }
  return j;
}

Form JAction::covector_image(std::size_t jdx) const {
  Form f(coframe);
  for (std::size_t k = 0; k < 6; ++k)
    f.add_term(static_cast<std::uint8_t>(1 << k), m[jdx][k]);
  return f;
}

std::array<Coefficient, 6> JAction::vector_image(std::size_t k) const {
  std::array<Coefficient, 6> out;
  for (std::size_t i = 0; i < 6; ++i) out[i] = -m[i][k];
  return out;
}

bool JAction::squares_to_minus_id() const {
  auto zero = Coefficient::integer(coframe->table(), 0);
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      Coefficient acc = zero;
      for (std::size_t k = 0; k < 6; ++k) acc = acc + m[a][k] * m[k][b];
      Coefficient want = a == b ? Coefficient::integer(coframe->table(), -1) : zero;
      if (!(acc == want)) return false;
    }
  return true;
}

Form apply_J(const Form& a, const JAction& j) {
  if (!(*a.coframe() == *j.coframe))
    throw CoframeMismatch("form and J live on different coframes");
  if (!a.is_homogeneous()) throw NonHomogeneous("apply_J needs a homogeneous form");
  std::array<Form, 6> images;
  for (std::size_t k = 0; k < 6; ++k) images[k] = j.covector_image(k);
  return substitute(a, images);
}

// ---------------------------------------------------------------------------
// Hodge star

Form hodge_star(const Form& a) {
  if (!a.coframe()->is_real()) throw ComplexCoframe("hodge star needs a real coframe");
  if (!a.is_homogeneous()) throw NonHomogeneous("hodge star needs a homogeneous form");
  Form r(a.coframe());
  for (const auto& [m, c] : a.terms()) {
    std::uint8_t comp = static_cast<std::uint8_t>(~m & 0x3F);
    int s = wedge_sign(m, comp);
    assert(s != 0);
    r.add_term(comp, s == 1 ? c : -c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// frame evaluation

Coefficient evaluate_on_frame(const Form& a, const std::vector<std::size_t>& indices) {
  Coefficient acc = Coefficient::integer(a.coframe()->table(), 0);
  for (const auto& [m, c] : a.terms()) {
    if (mask_degree(m) != indices.size())
      throw DegreeMismatch("term degree differs from argument count");
    auto tuple = mask_indices(m);
    // determinant of the delta matrix: the sign of the assignment argument ->
    // tuple position, zero on any repeat or absence
    std::vector<std::size_t> pos;
    bool vanish = false;
    for (std::size_t arg : indices) {
      auto it = std::find(tuple.begin(), tuple.end(), arg);
      if (it == tuple.end()) {
        vanish = true;
        break;
      }
      pos.push_back(static_cast<std::size_t>(it - tuple.begin()));
    }
    if (vanish) continue;
    // parity of pos (a permutation unless an argument repeats)
    int sign = 1;
    bool repeat = false;
    for (std::size_t x = 0; x < pos.size() && !repeat; ++x)
      for (std::size_t y = x + 1; y < pos.size(); ++y) {
        if (pos[x] == pos[y]) {
          repeat = true;
          break;
        }
        if (pos[x] > pos[y]) sign = -sign;
      }
    if (repeat) continue;
    acc = acc + (sign == 1 ? c : -c);
  }
  return acc;
}

Form eval_form(const Form& a, const coeffield::Assignment& assignment) {
  Form out(a.coframe());
  const auto& table = a.coframe()->table();
  for (const auto& [m, c] : a.terms())
    out.add_term(m, Coefficient::gaussian(table, c.eval_at(assignment)));
  return out;
}

}  // namespace nilgeom::exterior
