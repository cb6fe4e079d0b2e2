#include "nilgeom/coeffield.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace nilgeom::coeffield {

// ---------------------------------------------------------------------------
// GQ

GQ GQ::inverse() const {
  if (is_zero()) throw ZeroDenominator("division by zero Gaussian rational");
  Rational n = re * re + im * im;
  return GQ(re / n, -im / n);
}

static std::string rational_str(const Rational& r) { return r.get_str(); }

std::string GQ::str() const {
  if (im == 0) return rational_str(re);
  std::string imag;
  if (im == 1)
    imag = "i";
  else if (im == -1)
    imag = "-i";
  else
    imag = rational_str(im) + "*i";
  if (re == 0) return imag;
  if (im > 0) return rational_str(re) + "+" + imag;
  return rational_str(re) + imag;  // imag already carries the minus sign
}

// ---------------------------------------------------------------------------
// ParamTable

ParamTable::ParamTable(std::vector<std::string> user_names) : names_(std::move(user_names)) {
  for (const auto& n : names_)
    if (n == "pi2") throw UnknownParameter("pi2 is reserved and implicitly declared");
  for (std::size_t a = 0; a < names_.size(); ++a)
    for (std::size_t b = a + 1; b < names_.size(); ++b)
      if (names_[a] == names_[b]) throw UnknownParameter("duplicate parameter " + names_[a]);
  names_.push_back("pi2");
}

std::size_t ParamTable::index(const std::string& name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return k;
  throw UnknownParameter(name);
}

bool ParamTable::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

ParamTablePtr make_table(std::vector<std::string> user_names) {
  return std::make_shared<const ParamTable>(std::move(user_names));
}

// ---------------------------------------------------------------------------
// Monomials

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = 0, db = 0;
  for (unsigned e : a) da += e;
  for (unsigned e : b) db += e;
  if (da != db) return da < db;
  // first declared parameter most significant: larger exponent earlier = larger
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

static unsigned mono_degree(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(std::size_t nvars, GQ c) {
  Poly p(nvars);
  if (!c.is_zero()) p.terms_.emplace(Monomial(nvars, 0), std::move(c));
  return p;
}

Poly Poly::var(std::size_t nvars, std::size_t idx, unsigned exp) {
  assert(idx < nvars);
  Poly p(nvars);
  Monomial m(nvars, 0);
  m[idx] = exp;
  if (exp == 0) return constant(nvars, GQ(1));
  p.terms_.emplace(std::move(m), GQ(1));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && mono_degree(terms_.begin()->first) == 0);
}

GQ Poly::constant_value() const {
  if (terms_.empty()) return GQ(0);
  assert(is_constant());
  return terms_.begin()->second;
}

const GQ& Poly::leading_coeff() const {
  assert(!terms_.empty());
  return terms_.rbegin()->second;
}

const Monomial& Poly::leading_monomial() const {
  assert(!terms_.empty());
  return terms_.rbegin()->first;
}

unsigned Poly::total_degree() const {
  return terms_.empty() ? 0 : mono_degree(terms_.rbegin()->first);
}

unsigned Poly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
  return d;
}

bool Poly::contains_var(std::size_t var) const {
  for (const auto& [m, c] : terms_)
    if (m[var] > 0) return true;
  return false;
}

void Poly::add_term(const Monomial& m, const GQ& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  assert(nvars_ == o.nvars_);
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  assert(nvars_ == o.nvars_);
  Poly r(nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(nvars_);
      for (std::size_t k = 0; k < nvars_; ++k) m[k] = ma[k] + mb[k];
      r.add_term(m, ca * cb);
    }
  return r;
}

Poly Poly::mul_scalar(const GQ& c) const {
  Poly r(nvars_);
  if (c.is_zero()) return r;
  for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r = constant(nvars_, GQ(1));
  for (unsigned k = 0; k < e; ++k) r = r * *this;
  return r;
}

Poly Poly::conj() const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.conj());
  return r;
}

GQ Poly::eval(const std::vector<Rational>& values) const {
  GQ acc(0);
  for (const auto& [m, c] : terms_) {
    Rational mono(1);
    for (std::size_t k = 0; k < nvars_; ++k)
      for (unsigned e = 0; e < m[k]; ++e) mono *= values[k];
    acc = acc + c * GQ(mono);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Univariate views for the gcd machinery: treat a Poly as a polynomial
// in one chosen variable with Poly coefficients.

static Poly coeff_of(const Poly& p, std::size_t var, unsigned k) {
  Poly r(p.nvars());
  for (const auto& [m, c] : p.terms())
    if (m[var] == k) {
      Monomial m0 = m;
      m0[var] = 0;
      r.add_term(m0, c);
    }
  return r;
}

static Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p.mul_scalar(p.leading_coeff().inverse());
}

// Gaussian-integer gcd, for numeric content removal.
static void gz_divmod(const mpz_class& are, const mpz_class& aim, const mpz_class& bre,
                      const mpz_class& bim, mpz_class& qre, mpz_class& qim) {
  // nearest-integer quotient of (are+i*aim)/(bre+i*bim)
  mpz_class n = bre * bre + bim * bim;
  mpz_class xre = are * bre + aim * bim;
  mpz_class xim = aim * bre - are * bim;
  auto nearest = [&n](const mpz_class& x) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    if (2 * r > n) q += 1;
    return q;
  };
  qre = nearest(xre);
  qim = nearest(xim);
}

static void gz_gcd(mpz_class are, mpz_class aim, mpz_class bre, mpz_class bim,
                   mpz_class& gre, mpz_class& gim) {
  while (!(bre == 0 && bim == 0)) {
    mpz_class qre, qim;
    gz_divmod(are, aim, bre, bim, qre, qim);
    mpz_class rre = are - (qre * bre - qim * bim);
    mpz_class rim = aim - (qre * bim + qim * bre);
    are = bre;
    aim = bim;
    bre = rre;
    bim = rim;
  }
  gre = are;
  gim = aim;
}

// scales to Gaussian-integer coefficients of content 1; keeps gcd chains from
// drowning in coefficient growth
static Poly strip_numeric(const Poly& p) {
  if (p.is_zero()) return p;
  mpz_class lambda = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_lcm(lambda.get_mpz_t(), lambda.get_mpz_t(), c.re.get_den().get_mpz_t());
    mpz_lcm(lambda.get_mpz_t(), lambda.get_mpz_t(), c.im.get_den().get_mpz_t());
  }
  Poly q = lambda == 1 ? p : p.mul_scalar(GQ(Rational(lambda)));
  mpz_class gre = 0, gim = 0;
  for (const auto& [m, c] : q.terms()) {
    mpz_class nre, nim;
    gz_gcd(gre, gim, c.re.get_num(), c.im.get_num(), nre, nim);
    gre = nre;
    gim = nim;
  }
  if (!(gre == 1 && gim == 0) && !(gre == 0 && gim == 0))
    q = q.mul_scalar(GQ(Rational(gre), Rational(gim)).inverse());
  return q;
}

Poly poly_divexact(const Poly& a, const Poly& b) {
  assert(!b.is_zero());
  if (b.is_constant()) return a.mul_scalar(b.constant_value().inverse());
  Poly q(a.nvars()), r = a;
  while (!r.is_zero()) {
    const Monomial& mr = r.leading_monomial();
    const Monomial& mb = b.leading_monomial();
    Monomial t(a.nvars());
    for (std::size_t k = 0; k < a.nvars(); ++k) {
      if (mr[k] < mb[k]) throw std::logic_error("poly_divexact: not divisible");
      t[k] = mr[k] - mb[k];
    }
    GQ c = r.leading_coeff() / b.leading_coeff();
    Poly tp(a.nvars());
    tp.add_term(t, c);
    q = q + tp;
    r = r - b * tp;
  }
  return q;
}

static Poly content_in(const Poly& p, std::size_t var) {
  Poly g(p.nvars());
  for (unsigned k = 0; k <= p.degree_in(var); ++k) {
    Poly ck = coeff_of(p, var, k);
    if (!ck.is_zero()) g = poly_gcd(g, ck);
  }
  return g;
}

// pseudo-remainder of p by q in the chosen variable (up to constant factors;
// numeric content is stripped per step, which a gcd chain tolerates)
static Poly prem(const Poly& p, const Poly& q, std::size_t var) {
  unsigned dq = q.degree_in(var);
  Poly lcq = coeff_of(q, var, dq);
  Poly r = p;
  while (!r.is_zero() && r.degree_in(var) >= dq) {
    unsigned dr = r.degree_in(var);
    Poly lcr = coeff_of(r, var, dr);
    r = strip_numeric(r * lcq - q * lcr * Poly::var(p.nvars(), var, dr - dq));
  }
  return r;
}

// exponent-wise minimum over all terms of both polynomials
static Poly common_monomial(const Poly& a, const Poly& b) {
  Monomial m(a.nvars(), 0);
  bool first = true;
  for (const Poly* p : {&a, &b})
    for (const auto& [mm, c] : p->terms()) {
      for (std::size_t k = 0; k < m.size(); ++k)
        m[k] = first ? mm[k] : std::min(m[k], mm[k]);
      first = false;
    }
  Poly r(a.nvars());
  r.add_term(m, GQ(1));
  return r;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant())
    return Poly::constant(a.nvars(), GQ(1));
  // a monomial argument forces a monomial gcd
  if (a.term_count() == 1 || b.term_count() == 1) return common_monomial(a, b);
  std::size_t var = 0;
  while (a.degree_in(var) == 0 && b.degree_in(var) == 0) ++var;
  if (a.degree_in(var) == 0) return poly_gcd(a, content_in(b, var));
  if (b.degree_in(var) == 0) return poly_gcd(content_in(a, var), b);

  Poly ca = content_in(a, var), cb = content_in(b, var);
  Poly pa = poly_divexact(a, ca), pb = poly_divexact(b, cb);
  Poly cg = poly_gcd(ca, cb);

  Poly p = pa, q = pb;
  if (p.degree_in(var) < q.degree_in(var)) std::swap(p, q);
  Poly g;
  for (;;) {
    Poly r = prem(p, q, var);
    if (r.is_zero()) {
      g = poly_divexact(q, content_in(q, var));
      break;
    }
    if (r.degree_in(var) == 0) {
      g = Poly::constant(a.nvars(), GQ(1));
      break;
    }
    p = q;
    q = strip_numeric(poly_divexact(r, content_in(r, var)));
  }
  return monic(cg * g);
}

// ---------------------------------------------------------------------------
// Printing

static std::string monomial_str(const Monomial& m, const ParamTable& table) {
  std::string out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += table.name(k);
    if (m[k] > 1) out += "**" + std::to_string(m[k]);
  }
  return out;
}

// negative for display purposes: leading minus when printed
static bool display_negative(const GQ& c) {
  return c.re < 0 || (c.re == 0 && c.im < 0);
}

static std::string term_str(const Monomial& m, const GQ& c, const ParamTable& table) {
  std::string mono = monomial_str(m, table);
  if (mono.empty()) return c.str();
  if (c == GQ(1)) return mono;
  if (c == GQ(-1)) return "-" + mono;
  if (c.re != 0 && c.im != 0) return "(" + c.str() + ")*" + mono;
  return c.str() + "*" + mono;
}

std::string Poly::str(const ParamTable& table) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    std::string t = term_str(it->first, it->second, table);
    if (out.empty() || t[0] == '-')
      out += t;
    else
      out += "+" + t;
  }
  return out;
}

// Integer content of a Gaussian-integer-coefficient polynomial, for display
// factoring: the positive integer gcd of all real and imaginary numerators
// (zero when some coefficient is not a Gaussian integer).
static mpz_class display_content(const Poly& p) {
  mpz_class g = 0;
  for (const auto& [m, c] : p.terms()) {
    if (c.re.get_den() != 1 || c.im.get_den() != 1) return 0;
    mpz_class gterm;
    mpz_gcd(gterm.get_mpz_t(), c.re.get_num().get_mpz_t(), c.im.get_num().get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), gterm.get_mpz_t());
  }
  return g;
}

// Renders a polynomial for use inside a fraction: multi-term polynomials are
// printed with their integer content factored out when it is not 1, e.g.
// 8*(s**4-1).  Returns the text plus whether the top level is a sum.
static std::pair<std::string, bool> factored_str(const Poly& p, const ParamTable& table) {
  if (p.term_count() <= 1) return {p.str(table), false};
  mpz_class g = display_content(p);
  bool neg = display_negative(p.leading_coeff());
  if (g <= 1 && !neg) return {p.str(table), true};
  if (g == 0) g = 1;  // non-integer coefficients: factor sign only
  if (neg) g = -g;
  Poly inner = p.mul_scalar(GQ(Rational(1) / Rational(g)));
  if (g == -1) return {"-(" + inner.str(table) + ")", false};
  return {g.get_str() + "*(" + inner.str(table) + ")", false};
}

// number of displayed multiplicative factors in a single-term polynomial
static unsigned single_term_factors(const Poly& p) {
  assert(p.term_count() == 1);
  const auto& [m, c] = *p.terms().begin();
  unsigned n = 0;
  for (unsigned e : m)
    if (e > 0) ++n;
  if (!(c == GQ(1))) ++n;
  return n;
}

std::string Coefficient::str() const {
  const ParamTable& tab = *table_;
  if (num_.is_zero()) return "0";
  bool trivial_den = den_.is_constant() && den_.constant_value() == GQ(1);
  auto [num_text, num_is_sum] = factored_str(num_, tab);
  if (trivial_den) return num_text;
  if (num_is_sum) num_text = "(" + num_text + ")";
  auto [den_text, den_is_sum] = factored_str(den_, tab);
  bool den_parens = den_is_sum || den_.term_count() > 1 || single_term_factors(den_) > 1;
  if (den_parens) den_text = "(" + den_text + ")";
  return num_text + "/" + den_text;
}

// ---------------------------------------------------------------------------
// Coefficient

Coefficient Coefficient::make(ParamTablePtr t, Poly num, Poly den) {
  if (den.is_zero()) throw ZeroDenominator("denominator polynomial is zero");
  Coefficient c;
  c.table_ = std::move(t);
  c.num_ = std::move(num);
  c.den_ = std::move(den);
  c.normalize();
  return c;
}

Coefficient Coefficient::from_poly(ParamTablePtr t, Poly num) {
  std::size_t n = t->size();
  return make(std::move(t), std::move(num), Poly::constant(n, GQ(1)));
}

Coefficient Coefficient::integer(ParamTablePtr t, long v) {
  std::size_t n = t->size();
  return from_poly(std::move(t), Poly::constant(n, GQ(v)));
}

Coefficient Coefficient::rational(ParamTablePtr t, const Rational& v) {
  std::size_t n = t->size();
  return from_poly(std::move(t), Poly::constant(n, GQ(v)));
}

Coefficient Coefficient::gaussian(ParamTablePtr t, const GQ& v) {
  std::size_t n = t->size();
  return from_poly(std::move(t), Poly::constant(n, v));
}

Coefficient Coefficient::i(ParamTablePtr t) { return gaussian(std::move(t), GQ::i()); }

Coefficient Coefficient::param(ParamTablePtr t, const std::string& name) {
  std::size_t idx = t->index(name);
  std::size_t n = t->size();
  return from_poly(std::move(t), Poly::var(n, idx));
}

void Coefficient::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.nvars(), GQ(1));
    return;
  }
  Poly g = poly_gcd(num_, den_);
  if (!(g.is_constant() && g.constant_value() == GQ(1))) {
    num_ = poly_divexact(num_, g);
    den_ = poly_divexact(den_, g);
  }
  // clear rational denominators with one common scalar
  mpz_class lambda = 1;
  auto fold_dens = [&lambda](const Poly& p) {
    for (const auto& [m, c] : p.terms()) {
      mpz_lcm(lambda.get_mpz_t(), lambda.get_mpz_t(), c.re.get_den().get_mpz_t());
      mpz_lcm(lambda.get_mpz_t(), lambda.get_mpz_t(), c.im.get_den().get_mpz_t());
    }
  };
  fold_dens(num_);
  fold_dens(den_);
  if (lambda != 1) {
    GQ s((Rational(lambda)));
    num_ = num_.mul_scalar(s);
    den_ = den_.mul_scalar(s);
  }
  // joint Gaussian-integer content
  mpz_class gre = 0, gim = 0;
  auto fold_content = [&gre, &gim](const Poly& p) {
    for (const auto& [m, c] : p.terms()) {
      mpz_class nre, nim;
      gz_gcd(gre, gim, c.re.get_num(), c.im.get_num(), nre, nim);
      gre = nre;
      gim = nim;
    }
  };
  fold_content(num_);
  fold_content(den_);
  if (!(gre == 1 && gim == 0) && !(gre == 0 && gim == 0)) {
    GQ ginv = GQ(Rational(gre), Rational(gim)).inverse();
    num_ = num_.mul_scalar(ginv);
    den_ = den_.mul_scalar(ginv);
  }
  // rotate by a unit so the denominator's leading coefficient has Re > 0,
  // Im >= 0 (exactly one of the four associates lands there)
  for (int k = 0; k < 4; ++k) {
    const GQ& lc = den_.leading_coeff();
    if (lc.re > 0 && lc.im >= 0) break;
    num_ = num_.mul_scalar(GQ::i());
    den_ = den_.mul_scalar(GQ::i());
  }
  assert(den_.leading_coeff().re > 0 && den_.leading_coeff().im >= 0);
}

bool Coefficient::is_one() const {
  return num_.is_constant() && den_.is_constant() && !num_.is_zero() &&
         num_.constant_value() == den_.constant_value();
}

GQ Coefficient::constant_value() const {
  assert(is_constant());
  if (num_.is_zero()) return GQ(0);
  return num_.constant_value() / den_.constant_value();
}

bool Coefficient::contains_var(std::size_t var) const {
  return num_.contains_var(var) || den_.contains_var(var);
}

Coefficient Coefficient::operator-() const {
  Coefficient r = *this;
  r.num_ = -r.num_;
  return r;
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  assert(table_ && o.table_ && *table_ == *o.table_);
  return make(table_, num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Coefficient Coefficient::operator-(const Coefficient& o) const { return *this + (-o); }

Coefficient Coefficient::operator*(const Coefficient& o) const {
  assert(table_ && o.table_ && *table_ == *o.table_);
  return make(table_, num_ * o.num_, den_ * o.den_);
}

Coefficient Coefficient::operator/(const Coefficient& o) const {
  assert(table_ && o.table_ && *table_ == *o.table_);
  if (o.is_zero()) throw ZeroDenominator("division by zero coefficient");
  return make(table_, num_ * o.den_, den_ * o.num_);
}

Coefficient Coefficient::pow(unsigned e) const {
  Coefficient r = integer(table_, 1);
  for (unsigned k = 0; k < e; ++k) r = r * *this;
  return r;
}

bool Coefficient::operator==(const Coefficient& o) const {
  assert(table_ && o.table_ && *table_ == *o.table_);
  return num_ == o.num_ && den_ == o.den_;
}

Coefficient Coefficient::conj() const { return make(table_, num_.conj(), den_.conj()); }

GQ Coefficient::eval_at(const Assignment& a) const {
  std::vector<Rational> values(table_->size(), Rational(0));
  for (std::size_t k = 0; k < table_->size(); ++k) {
    bool used = num_.contains_var(k) || den_.contains_var(k);
    if (!used) continue;
    auto v = a.get(k);
    if (!v) throw UnassignedParameter(table_->name(k));
    values[k] = *v;
  }
  GQ d = den_.eval(values);
  if (d.is_zero()) throw EvalDivisionByZero("denominator vanishes: " + den_.str(*table_));
  return num_.eval(values) / d;
}

// ---------------------------------------------------------------------------
// RuleSet

bool RuleSet::is_rule_var(std::size_t var) const {
  for (const auto& r : rules_)
    if (r.var == var) return true;
  return false;
}

void RuleSet::add(const std::string& var, const Coefficient& replacement) {
  if (!table_) table_ = replacement.table();
  std::size_t idx = table_->index(var);
  if (is_rule_var(idx)) throw RuleCycle("second rule for parameter " + var);
  if (replacement.contains_var(idx))
    throw RuleCycle("replacement for " + var + " mentions " + var);
  for (const auto& r : rules_) {
    if (replacement.contains_var(r.var))
      throw RuleCycle("replacement for " + var + " mentions rule variable " +
                      table_->name(r.var));
    if (r.replacement.contains_var(idx))
      throw RuleCycle("existing replacement mentions new rule variable " + var);
  }
  rules_.push_back(Rule{idx, replacement});
}

// substitute var^2 -> rep in a polynomial; the result is a rational function
// because rep may have a denominator
static Coefficient subst_squares(const ParamTablePtr& t, const Poly& p, std::size_t var,
                                 const Coefficient& rep) {
  Coefficient acc = Coefficient::integer(t, 0);
  for (const auto& [m, c] : p.terms()) {
    Monomial m0 = m;
    unsigned e = m[var];
    m0[var] = e % 2;
    Poly base(p.nvars());
    base.add_term(m0, c);
    Coefficient term = Coefficient::from_poly(t, base);
    if (e >= 2) term = term * rep.pow(e / 2);
    acc = acc + term;
  }
  return acc;
}

Coefficient Coefficient::apply_rules(const RuleSet& rules) const {
  Coefficient cur = *this;
  for (const auto& rule : rules.rules()) {
    while (cur.num_.degree_in(rule.var) >= 2 || cur.den_.degree_in(rule.var) >= 2) {
      Coefficient cn = subst_squares(cur.table_, cur.num_, rule.var, rule.replacement);
      Coefficient cd = subst_squares(cur.table_, cur.den_, rule.var, rule.replacement);
      cur = cn / cd;
    }
    if (cur.den_.degree_in(rule.var) == 1) {
      // rationalize: den = P + var*Q -> multiply through by P - var*Q, which
      // makes the denominator P^2 - var^2*Q^2; the square is substituted away
      // before normalization so reduction cannot cancel the conjugate factor.
      Poly p0 = coeff_of(cur.den_, rule.var, 0);
      Poly p1 = coeff_of(cur.den_, rule.var, 1);
      Poly conj_den = p0 - p1 * Poly::var(cur.den_.nvars(), rule.var);
      Coefficient cn =
          subst_squares(cur.table_, cur.num_ * conj_den, rule.var, rule.replacement);
      Coefficient cd =
          subst_squares(cur.table_, cur.den_ * conj_den, rule.var, rule.replacement);
      cur = cn / cd;
    }
    assert(cur.den_.degree_in(rule.var) == 0 && cur.num_.degree_in(rule.var) <= 1);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Assignment

void Assignment::set(const std::string& name, const Rational& value) {
  values_[table_->index(name)] = value;
}

std::optional<Rational> Assignment::get(std::size_t var) const {
  auto it = values_.find(var);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Assignment::str() const {
  std::string out;
  for (const auto& [var, value] : values_) {
    if (!out.empty()) out += ", ";
    out += table_->name(var) + "=" + value.get_str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random rational points

std::optional<Rational> rational_sqrt(const Rational& v) {
  if (v < 0) return std::nullopt;
  mpz_class n = v.get_num(), d = v.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  Rational out(sn, sd);
  out.canonicalize();
  return out;
}

std::optional<Assignment> try_sample_on_variety(const ParamTablePtr& table, const RuleSet& rules,
                                                std::mt19937_64& rng) {
  std::uniform_int_distribution<int> digit(1, 9), coin(0, 1);
  Assignment a(table);
  for (std::size_t v = 0; v < table->size(); ++v) {
    if (rules.is_rule_var(v)) continue;
    Rational val(digit(rng), digit(rng));
    val.canonicalize();
    if (coin(rng)) val = -val;
    a.set(table->name(v), val);
  }
  for (const auto& rule : rules.rules()) {
    GQ val;
    try {
      val = rule.replacement.eval_at(a);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (val.im != 0) return std::nullopt;
    auto root = rational_sqrt(val.re);
    if (!root) return std::nullopt;
    a.set(table->name(rule.var), *root);
  }
  return a;
}

}  // namespace nilgeom::coeffield
