#pragma once
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nilgeom/coeffield.hpp"

// The exterior algebra over a fixed rank-6 coframe: wedge, J-action, Hodge
// star, frame evaluation, canonical printing.
//
// Generators are indexed 0..5.  For a complex coframe the indices mean
// (w1,w2,w3,~w1,~w2,~w3): index k+3 is the conjugate of index k.  A basis
// term is a 6-bit mask; tuples are always kept strictly increasing, wedge
// signs come from inversion counts.
namespace nilgeom::exterior {

using coeffield::Assignment;
using coeffield::Coefficient;
using coeffield::GQ;
using coeffield::ParamTablePtr;
using coeffield::RuleSet;

enum class CoframeKind { real, complex };

class Coframe;
using CoframePtr = std::shared_ptr<const Coframe>;

class Coframe {
 public:
  static CoframePtr make_real(ParamTablePtr table, std::vector<std::string> names);
  static CoframePtr make_complex(ParamTablePtr table, std::vector<std::string> names);

  CoframeKind kind() const { return kind_; }
  bool is_real() const { return kind_ == CoframeKind::real; }
  const ParamTablePtr& table() const { return table_; }
  // display name of generator index 0..5 (conjugates rendered as ~name)
  std::string generator_name(std::size_t idx) const;
  // index of a generator name, accepting ~name for conjugates
  std::size_t generator_index(const std::string& name) const;  // throws UnknownParameter
  bool has_generator(const std::string& name) const;
  std::size_t conjugate_index(std::size_t idx) const;  // complex only
  bool operator==(const Coframe& o) const;

  Coframe(CoframeKind kind, ParamTablePtr table, std::vector<std::string> names);

 private:
  CoframeKind kind_;
  ParamTablePtr table_;
  std::vector<std::string> names_;
};

class Form {
 public:
  Form() = default;
  explicit Form(CoframePtr coframe) : coframe_(std::move(coframe)) {}

  static Form zero(CoframePtr c) { return Form(std::move(c)); }
  static Form scalar(CoframePtr c, Coefficient v);
  static Form generator(CoframePtr c, std::size_t idx);
  static Form term(CoframePtr c, std::initializer_list<int> indices, Coefficient v);

  const CoframePtr& coframe() const { return coframe_; }
  const std::map<std::uint8_t, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous() const;
  // degree of a homogeneous form (0 for the zero form); throws NonHomogeneous
  unsigned degree() const;
  Coefficient coefficient(std::uint8_t mask) const;

  Form operator-() const;
  Form operator+(const Form& o) const;
  Form operator-(const Form& o) const;
  Form scaled(const Coefficient& c) const;
  bool operator==(const Form& o) const;
  bool operator!=(const Form& o) const { return !(*this == o); }

  Form conj() const;
  Form apply_rules(const RuleSet& rules) const;
  // exact numeric image under an assignment: mask -> value
  std::map<std::uint8_t, GQ> eval_at(const Assignment& a) const;

  // complex coframes: the (p,q)-component
  Form bidegree_part(unsigned p, unsigned q) const;

  void add_term(std::uint8_t mask, const Coefficient& c);  // accumulate, drop zeros

  std::string str() const;

 private:
  CoframePtr coframe_;
  std::map<std::uint8_t, Coefficient> terms_;
};

// wedge product; CoframeMismatch unless both live on the same coframe
Form wedge(const Form& a, const Form& b);

// substitute each generator by the corresponding 1-form image (all images on
// one target coframe) and expand wedges; the workhorse behind the J-action
// and coframe transformations
Form substitute(const Form& a, const std::array<Form, 6>& images);

// action of J on the real coframe: row j holds J e^{j+1} as coefficients
struct JAction {
  CoframePtr coframe;
  std::array<std::array<Coefficient, 6>, 6> m;

  static JAction adapted(CoframePtr c);
  Form covector_image(std::size_t j) const;   // J e^{j+1} as a 1-form
  // J e_{k+1} expressed in the frame: component i is e^i(J e_{k+1}) = -m[i][k]
  std::array<Coefficient, 6> vector_image(std::size_t k) const;
  bool squares_to_minus_id() const;
};

// (J a)(X_1,..,X_k) = (-1)^k a(J X_1,..,J X_k); NonHomogeneous on mixed degree
Form apply_J(const Form& a, const JAction& j);

// Hodge star for the orthonormal real coframe, orientation e^{123456} > 0
Form hodge_star(const Form& a);

// evaluation on frame vectors by index (0-based); DegreeMismatch if a term's
// degree differs from the argument count
Coefficient evaluate_on_frame(const Form& a, const std::vector<std::size_t>& indices);

// Evaluates every coefficient of a at the assignment, producing a form with
// constant (Gaussian rational) coefficients over the same coframe.
Form eval_form(const Form& a, const coeffield::Assignment& assignment);

namespace detail {
unsigned mask_degree(std::uint8_t mask);
int wedge_sign(std::uint8_t a, std::uint8_t b);  // 0 if masks overlap
std::vector<std::size_t> mask_indices(std::uint8_t mask);
}  // namespace detail

}  // namespace nilgeom::exterior
