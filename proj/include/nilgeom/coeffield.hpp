#pragma once
#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nilgeom/errors.hpp"

// Exact scalar arithmetic: Gaussian rationals Q(i), multivariate polynomials
// over Q(i) in a declared list of real parameters, reduced rational functions
// of those, square-rewrite rules, and evaluation at rational points.
namespace nilgeom::coeffield {

using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Gaussian rationals a + b*i.

struct GQ {
  Rational re, im;

  GQ() : re(0), im(0) {}
  GQ(long r) : re(r), im(0) {}
  GQ(Rational r) : re(std::move(r)), im(0) {}
  GQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GQ i() { return GQ(Rational(0), Rational(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GQ conj() const { return GQ(re, -im); }
  GQ operator-() const { return GQ(-re, -im); }
  GQ operator+(const GQ& o) const { return GQ(re + o.re, im + o.im); }
  GQ operator-(const GQ& o) const { return GQ(re - o.re, im - o.im); }
  GQ operator*(const GQ& o) const {
    return GQ(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  GQ inverse() const;
  GQ operator/(const GQ& o) const { return *this * o.inverse(); }
  bool operator==(const GQ& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GQ& o) const { return !(*this == o); }

  std::string str() const;  // bare: 3, -1/2, i, -2*i, 1+i (no outer parens)
};

// ---------------------------------------------------------------------------
// Parameter table: the declared (ordered) real parameters of a model, with
// the reserved symbol pi2 (standing for pi^2) always present and always last.

class ParamTable {
 public:
  explicit ParamTable(std::vector<std::string> user_names);

  std::size_t size() const { return names_.size(); }
  std::size_t index(const std::string& name) const;  // throws UnknownParameter
  bool has(const std::string& name) const;
  const std::string& name(std::size_t idx) const { return names_.at(idx); }
  std::size_t pi2_index() const { return names_.size() - 1; }
  const std::vector<std::string>& names() const { return names_; }
  bool operator==(const ParamTable& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
};

using ParamTablePtr = std::shared_ptr<const ParamTable>;

ParamTablePtr make_table(std::vector<std::string> user_names);

// ---------------------------------------------------------------------------
// Multivariate polynomials over Q(i), exponent vectors in the table order,
// terms kept in ascending graded-lexicographic order (leading term = last).

using Monomial = std::vector<unsigned>;

// Graded lex: higher total degree wins; ties broken lexicographically with
// the first declared parameter most significant.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
 public:
  Poly() : nvars_(0) {}
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  static Poly constant(std::size_t nvars, GQ c);
  static Poly var(std::size_t nvars, std::size_t idx, unsigned exp = 1);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GQ constant_value() const;  // requires is_constant()
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, GQ, GradedLexLess>& terms() const { return terms_; }
  const GQ& leading_coeff() const;
  const Monomial& leading_monomial() const;
  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;
  bool contains_var(std::size_t var) const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly mul_scalar(const GQ& c) const;
  Poly pow(unsigned e) const;
  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Poly conj() const;
  GQ eval(const std::vector<Rational>& values) const;

  void add_term(const Monomial& m, const GQ& c);  // accumulate, drop zeros

  std::string str(const ParamTable& table) const;

 private:
  std::size_t nvars_;
  std::map<Monomial, GQ, GradedLexLess> terms_;
};

// gcd over Q(i)[params], normalized monic in the leading graded-lex
// coefficient; gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);
// Exact division; the caller guarantees divisibility.
Poly poly_divexact(const Poly& a, const Poly& b);

// ---------------------------------------------------------------------------
// Reduced rational functions num/den.
//
// Canonical pair: num and den coprime with Gaussian-integer coefficients of
// joint content 1, and den's leading graded-lex coefficient rotated by a unit
// of Z[i] into the quarter-plane {Re > 0, Im >= 0}.  This makes structural
// equality of Coefficients coincide with equality of rational functions.

class RuleSet;
class Assignment;

class Coefficient {
 public:
  Coefficient() = default;

  static Coefficient make(ParamTablePtr t, Poly num, Poly den);  // "normalize"
  static Coefficient from_poly(ParamTablePtr t, Poly num);
  static Coefficient integer(ParamTablePtr t, long v);
  static Coefficient rational(ParamTablePtr t, const Rational& v);
  static Coefficient gaussian(ParamTablePtr t, const GQ& v);
  static Coefficient i(ParamTablePtr t);
  static Coefficient param(ParamTablePtr t, const std::string& name);

  const ParamTablePtr& table() const { return table_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  GQ constant_value() const;
  bool contains_var(std::size_t var) const;

  Coefficient operator-() const;
  Coefficient operator+(const Coefficient& o) const;
  Coefficient operator-(const Coefficient& o) const;
  Coefficient operator*(const Coefficient& o) const;
  Coefficient operator/(const Coefficient& o) const;  // throws ZeroDenominator
  Coefficient pow(unsigned e) const;
  bool operator==(const Coefficient& o) const;
  bool operator!=(const Coefficient& o) const { return !(*this == o); }

  Coefficient conj() const;
  Coefficient apply_rules(const RuleSet& rules) const;
  GQ eval_at(const Assignment& a) const;

  std::string str() const;

 private:
  ParamTablePtr table_;
  Poly num_, den_;
  void normalize();
};

// ---------------------------------------------------------------------------
// Rewrite rules var^2 -> replacement, replacement free of every rule
// variable of the set.  Ordered application; the restriction to squares of
// single parameters keeps the system trivially confluent.

class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(ParamTablePtr t) : table_(std::move(t)) {}

  // throws RuleCycle if the replacement mentions any rule variable, or a
  // second rule targets the same variable.
  void add(const std::string& var, const Coefficient& replacement);

  struct Rule {
    std::size_t var;
    Coefficient replacement;
  };
  const std::vector<Rule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  const ParamTablePtr& table() const { return table_; }
  bool is_rule_var(std::size_t var) const;

 private:
  ParamTablePtr table_;
  std::vector<Rule> rules_;
};

// ---------------------------------------------------------------------------
// Rational evaluation points; parameters are real, so values are Rational.

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(ParamTablePtr t) : table_(std::move(t)) {}

  void set(const std::string& name, const Rational& value);
  std::optional<Rational> get(std::size_t var) const;
  const ParamTablePtr& table() const { return table_; }
  std::string str() const;  // "name=value, ..." in table order

 private:
  ParamTablePtr table_;
  std::map<std::size_t, Rational> values_;
};

// Exact rational square root, when the numerator and denominator are both
// perfect squares; the nonnegative root is returned.
std::optional<Rational> rational_sqrt(const Rational& v);

// One attempt at a random rational point on the rule variety: free parameters
// (pi2 included) draw nonzero values n/d with |n|, d <= 9, and each rule
// parameter gets an exact square root of its evaluated replacement. Returns
// nothing when a replacement carries no rational square root at this draw or
// a denominator vanishes; callers retry with fresh randomness.
std::optional<Assignment> try_sample_on_variety(const ParamTablePtr& table, const RuleSet& rules,
                                                std::mt19937_64& rng);

}  // namespace nilgeom::coeffield
