#include "nilgeom/cli.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nilgeom/acceptance.hpp"
#include "nilgeom/errors.hpp"

namespace nilgeom::cli {

using coeffield::GQ;
using coeffield::Rational;
using coeffield::make_table;
using complexgeom::SU3Model;
using connections::Connection;
using connections::CurvatureMatrix;
using exterior::Coframe;

namespace {

// ---------------------------------------------------------------------------
// Expression tokenizer

struct Token {
  enum Kind { number, name, conj_name, lparen, rparen, plus, minus, star, slash, wedge, power, end };
  Kind kind;
  std::string text;
  std::size_t col = 0;  // 1-based
};

[[noreturn]] void parse_fail(std::size_t line, std::size_t col, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(const std::string& s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::number, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Token::name, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (c == '~') {
      std::size_t j = i + 1;
      if (j >= s.size() || !ident_start(s[j])) parse_fail(line, col, "'~' must precede a generator name");
      std::size_t k = j;
      while (k < s.size() && ident_char(s[k])) ++k;
      out.push_back({Token::conj_name, s.substr(j, k - j), col});
      i = k;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Token::lparen, "(", col}); break;
      case ')': out.push_back({Token::rparen, ")", col}); break;
      case '+': out.push_back({Token::plus, "+", col}); break;
      case '-': out.push_back({Token::minus, "-", col}); break;
      case '/': out.push_back({Token::slash, "/", col}); break;
      case '^': out.push_back({Token::wedge, "^", col}); break;
      case '*':
        if (i + 1 < s.size() && s[i + 1] == '*') {
          out.push_back({Token::power, "**", col});
          ++i;
        } else {
          out.push_back({Token::star, "*", col});
        }
        break;
      default:
        parse_fail(line, col, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Token::end, "", s.size() + 1});
  return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent form expressions
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('-'|'+') unary | wedge
//   wedge  := pow ('^' pow)*
//   pow    := primary ('**' NUMBER)?
//   primary:= NUMBER | 'i' | NAME | '~'NAME | '(' expr ')'

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, ParamTablePtr table, CoframePtr coframe, std::size_t line)
      : toks_(std::move(toks)), table_(std::move(table)), coframe_(std::move(coframe)), line_(line) {}

  Form parse() {
    Form f = expr();
    if (peek().kind != Token::end) parse_fail(line_, peek().col, "unexpected trailing input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  Form scalar(const Coefficient& c) const { return Form::scalar(coframe_, c); }

  std::optional<Coefficient> as_scalar(const Form& f) const {
    if (f.is_zero()) return Coefficient::integer(table_, 0);
    const auto& ts = f.terms();
    if (ts.size() == 1 && ts.begin()->first == 0) return ts.begin()->second;
    return std::nullopt;
  }

  Form expr() {
    Form a = term();
    while (peek().kind == Token::plus || peek().kind == Token::minus) {
      bool add = take().kind == Token::plus;
      Form b = term();
      a = add ? a + b : a - b;
    }
    return a;
  }

  Form term() {
    Form a = unary();
    while (peek().kind == Token::star || peek().kind == Token::slash) {
      Token op = take();
      Form b = unary();
      if (op.kind == Token::star) {
        a = exterior::wedge(a, b);
      } else {
        auto c = as_scalar(b);
        if (!c) parse_fail(line_, op.col, "division needs a coefficient divisor");
        if (c->is_zero()) parse_fail(line_, op.col, "division by zero");
        a = a.scaled(Coefficient::integer(table_, 1) / *c);
      }
    }
    return a;
  }

  Form unary() {
    if (peek().kind == Token::minus) {
      Token op = take();
      (void)op;
      return -unary();
    }
    if (peek().kind == Token::plus) {
      take();
      return unary();
    }
    return wedge_level();
  }

  Form wedge_level() {
    Form a = pow();
    while (peek().kind == Token::wedge) {
      take();
      a = exterior::wedge(a, pow());
    }
    return a;
  }

  Form pow() {
    Form a = primary();
    if (peek().kind == Token::power) {
      Token op = take();
      if (peek().kind != Token::number) parse_fail(line_, peek().col, "'**' needs an integer exponent");
      long e = std::stol(take().text);
      auto base = as_scalar(a);
      if (!base) parse_fail(line_, op.col, "'**' applies to coefficients, not forms");
      Coefficient r = Coefficient::integer(table_, 1);
      for (long k = 0; k < e; ++k) r = r * *base;
      a = scalar(r);
    }
    return a;
  }

  Form primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::number: {
        Token tok = take();
        return scalar(Coefficient::rational(table_, Rational(tok.text)));
      }
      case Token::name: {
        Token tok = take();
        if (coframe_ && coframe_->has_generator(tok.text))
          return Form::generator(coframe_, coframe_->generator_index(tok.text));
        if (tok.text == "i") return scalar(Coefficient::i(table_));
        if (table_->has(tok.text)) return scalar(Coefficient::param(table_, tok.text));
        parse_fail(line_, tok.col, "unknown identifier '" + tok.text + "'");
      }
      case Token::conj_name: {
        Token tok = take();
        std::string full = "~" + tok.text;
        if (coframe_ && coframe_->has_generator(full))
          return Form::generator(coframe_, coframe_->generator_index(full));
        parse_fail(line_, tok.col, "unknown conjugate generator '~" + tok.text + "'");
      }
      case Token::lparen: {
        take();
        Form f = expr();
        if (peek().kind != Token::rparen) parse_fail(line_, peek().col, "expected ')'");
        take();
        return f;
      }
      default:
        parse_fail(line_, t.col, "expected a number, name, or '('");
    }
  }

  std::vector<Token> toks_;
  ParamTablePtr table_;
  CoframePtr coframe_;  // may be null (coefficient-only context)
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

Form parse_expr(const std::string& text, const ParamTablePtr& table, const CoframePtr& coframe,
                std::size_t line) {
  return ExprParser(tokenize(text, line), table, coframe, line).parse();
}

// Coefficient-only expressions (rule replacements) are parsed against a
// throwaway coframe so that the same evaluator applies.
Coefficient parse_coefficient(const std::string& text, const ParamTablePtr& table, std::size_t line) {
  CoframePtr dummy = Coframe::make_real(table, {"_g1", "_g2", "_g3", "_g4", "_g5", "_g6"});
  Form f = parse_expr(text, table, dummy, line);
  if (f.is_zero()) return Coefficient::integer(table, 0);
  const auto& ts = f.terms();
  if (ts.size() == 1 && ts.begin()->first == 0) return ts.begin()->second;
  throw ParseError("line " + std::to_string(line) + ": expected a coefficient, found a form");
}

// ---------------------------------------------------------------------------
// Line utilities

std::string strip_comment_and_trim(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || !ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

bool degree_ok(const Form& f, unsigned degree) {
  if (f.is_zero()) return true;
  if (!f.is_homogeneous()) return false;
  return f.degree() == degree;
}

}  // namespace

// ---------------------------------------------------------------------------
// Model files

RuleSet ModelFile::rules() const {
  RuleSet rs(table);
  for (const auto& [name, coef] : rule_lines) rs.add(name, coef);
  return rs;
}

std::string ModelFile::str() const {
  std::ostringstream os;
  if (!params.empty()) {
    os << "params:";
    for (const auto& n : params) os << " " << n;
    os << "\n";
  }
  for (const auto& a : assumptions) os << "assume: " << a << " != 0\n";
  for (const auto& [name, coef] : rule_lines) os << "rule: " << name << "**2 -> " << coef.str() << "\n";
  if (coframe) {
    std::size_t declared = coframe->is_real() ? 6 : 3;
    os << "coframe " << (coframe->is_real() ? "real:" : "complex:");
    for (std::size_t i = 0; i < declared; ++i) os << " " << coframe->generator_name(i);
    os << "\n";
    for (std::size_t i = 0; i < declared; ++i) {
      Form d = equations->d_generator(i);
      if (!d.is_zero()) os << "d " << coframe->generator_name(i) << " = " << d.str() << "\n";
    }
  }
  if (J) {
    for (std::size_t j = 0; j < 6; ++j)
      os << "J " << coframe->generator_name(j) << " = " << J->covector_image(j).str() << "\n";
  }
  if (F) os << "F = " << F->str() << "\n";
  if (sigma) {
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        os << "sigma " << i + 1 << " " << j + 1 << " = " << sigma->sigma[i][j].str() << "\n";
  }
  return os.str();
}

bool structures_equal(const ModelFile& a, const ModelFile& b) { return a.str() == b.str(); }

Form parse_form(const std::string& text, const ParamTablePtr& table, const CoframePtr& coframe) {
  return parse_expr(text, table, coframe, 1);
}

ModelFile parse_model(const std::string& text) {
  ModelFile m;
  std::vector<std::string> params;
  bool table_built = false;
  std::vector<Form> diffs;
  std::vector<bool> diff_set;
  std::array<std::optional<Form>, 6> jrows;
  bool any_j = false;
  std::array<std::array<std::optional<Form>, 6>, 6> sig;
  bool any_sig = false;
  std::optional<Form> fform;

  auto need_table = [&] {
    if (!table_built) {
      m.table = make_table(params);
      table_built = true;
    }
  };
  std::size_t declared = 0;

  std::istringstream in(text);
  std::string raw;
  std::size_t ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    std::string line = strip_comment_and_trim(raw);
    if (line.empty()) continue;
    auto perr = [&](const std::string& msg) -> void {
      throw ParseError("line " + std::to_string(ln) + ": " + msg);
    };

    if (starts_with(line, "params:")) {
      if (table_built) perr("params: lines must precede rules and the coframe");
      for (const auto& n : split_ws(line.substr(7))) {
        if (!valid_identifier(n)) perr("bad parameter name '" + n + "'");
        if (n == "i") perr("'i' is reserved for the imaginary unit");
        if (std::find(params.begin(), params.end(), n) != params.end())
          perr("duplicate parameter '" + n + "'");
        params.push_back(n);
      }
      continue;
    }
    if (starts_with(line, "assume:")) {
      need_table();
      auto w = split_ws(line.substr(7));
      if (w.size() != 3 || w[1] != "!=" || w[2] != "0") perr("assume lines read: assume: <name> != 0");
      if (std::find(params.begin(), params.end(), w[0]) == params.end())
        throw UnknownParameter("line " + std::to_string(ln) + ": assume references undeclared parameter '" + w[0] + "'");
      if (std::find(m.assumptions.begin(), m.assumptions.end(), w[0]) != m.assumptions.end())
        perr("duplicate assumption for '" + w[0] + "'");
      m.assumptions.push_back(w[0]);
      continue;
    }
    if (starts_with(line, "rule:")) {
      need_table();
      std::size_t arrow = line.find("->");
      if (arrow == std::string::npos) perr("rule lines read: rule: <name>**2 -> <coefficient>");
      std::string lhs = line.substr(5, arrow - 5);
      auto toks = tokenize(lhs, ln);
      if (toks.size() != 4 || toks[0].kind != Token::name || toks[1].kind != Token::power ||
          toks[2].kind != Token::number || toks[2].text != "2")
        perr("the rule left side must be <name>**2");
      const std::string& var = toks[0].text;
      if (std::find(params.begin(), params.end(), var) == params.end())
        throw UnknownParameter("line " + std::to_string(ln) + ": rule targets undeclared parameter '" + var + "'");
      Coefficient repl = parse_coefficient(line.substr(arrow + 2), m.table, ln);
      for (const auto& [n, c] : m.rule_lines)
        if (n == var) perr("duplicate rule for '" + var + "'");
      m.rule_lines.emplace_back(var, repl);
      continue;
    }
    if (starts_with(line, "coframe")) {
      need_table();
      if (m.coframe) perr("duplicate coframe declaration");
      auto w = split_ws(line.substr(7));
      if (w.empty() || (w[0] != "real:" && w[0] != "complex:"))
        perr("coframe lines read: coframe real: ... or coframe complex: ...");
      bool real = w[0] == "real:";
      std::vector<std::string> names(w.begin() + 1, w.end());
      if (names.empty()) perr("empty coframe declaration");
      for (const auto& n : names) {
        if (!valid_identifier(n)) perr("bad generator name '" + n + "'");
        if (n == "i") perr("'i' is reserved for the imaginary unit");
      }
      for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b)
          if (names[a] == names[b])
            throw DuplicateGenerator("line " + std::to_string(ln) + ": generator '" + names[a] + "' declared twice");
      if (real && names.size() != 6) perr("a real coframe needs six generators");
      if (!real && names.size() != 3) perr("a complex coframe needs three generators");
      m.coframe = real ? Coframe::make_real(m.table, names) : Coframe::make_complex(m.table, names);
      declared = real ? 6 : 3;
      diffs.assign(declared, Form::zero(m.coframe));
      diff_set.assign(declared, false);
      continue;
    }

    std::size_t eq_pos = line.find('=');
    std::string head_text = eq_pos == std::string::npos ? line : line.substr(0, eq_pos);
    auto head = split_ws(head_text);
    std::string body = eq_pos == std::string::npos ? "" : line.substr(eq_pos + 1);

    if (!head.empty() && head[0] == "d") {
      if (!m.coframe) perr("declare the coframe before d lines");
      if (head.size() != 2 || eq_pos == std::string::npos) perr("d lines read: d <generator> = <2-form>");
      if (head[1][0] == '~') perr("differentials of conjugate generators are implied by conjugation");
      if (!m.coframe->has_generator(head[1]))
        throw UnknownParameter("line " + std::to_string(ln) + ": unknown generator '" + head[1] + "'");
      std::size_t idx = m.coframe->generator_index(head[1]);
      if (idx >= declared) perr("give differentials of the declared generators only");
      if (diff_set[idx]) perr("duplicate differential for '" + head[1] + "'");
      Form f = parse_expr(body, m.table, m.coframe, ln);
      if (!degree_ok(f, 2)) perr("a generator differential must be a 2-form");
      diffs[idx] = f;
      diff_set[idx] = true;
      continue;
    }
    if (!head.empty() && head[0] == "J") {
      if (!m.coframe || !m.coframe->is_real()) perr("J lines need a real coframe");
      if (head.size() != 2 || eq_pos == std::string::npos) perr("J lines read: J <generator> = <1-form>");
      if (!m.coframe->has_generator(head[1]))
        throw UnknownParameter("line " + std::to_string(ln) + ": unknown generator '" + head[1] + "'");
      std::size_t idx = m.coframe->generator_index(head[1]);
      if (jrows[idx]) perr("duplicate J line for '" + head[1] + "'");
      Form f = parse_expr(body, m.table, m.coframe, ln);
      if (!degree_ok(f, 1)) perr("J images must be 1-forms");
      jrows[idx] = f;
      any_j = true;
      continue;
    }
    if (!head.empty() && head[0] == "F") {
      if (!m.coframe) perr("declare the coframe before the F line");
      if (head.size() != 1 || eq_pos == std::string::npos) perr("F lines read: F = <2-form>");
      if (fform) perr("duplicate F line");
      Form f = parse_expr(body, m.table, m.coframe, ln);
      if (!degree_ok(f, 2)) perr("F must be a 2-form");
      fform = f;
      continue;
    }
    if (!head.empty() && head[0] == "sigma") {
      if (!m.coframe || !m.coframe->is_real()) perr("sigma lines need a real coframe");
      if (head.size() != 3 || eq_pos == std::string::npos) perr("sigma lines read: sigma <i> <j> = <1-form>");
      long i = 0, j = 0;
      try {
        i = std::stol(head[1]);
        j = std::stol(head[2]);
      } catch (const std::exception&) {
        perr("sigma indices must be integers");
      }
      if (i < 1 || i > 6 || j < 1 || j > 6 || i >= j) perr("sigma indices must satisfy 1 <= i < j <= 6");
      if (sig[i - 1][j - 1]) perr("duplicate sigma entry " + head[1] + " " + head[2]);
      Form f = parse_expr(body, m.table, m.coframe, ln);
      if (!degree_ok(f, 1)) perr("sigma entries are 1-forms");
      sig[i - 1][j - 1] = f;
      any_sig = true;
      continue;
    }
    perr("unrecognized line '" + head_text + "'");
  }

  need_table();
  m.params = params;
  if (!m.coframe) throw ParseError("model file declares no coframe");
  m.equations = StructureEquations(m.coframe, diffs);
  if (any_j) {
    std::array<std::array<Coefficient, 6>, 6> jm;
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b) jm[a][b] = Coefficient::integer(m.table, 0);
    for (std::size_t a = 0; a < 6; ++a) {
      if (!jrows[a])
        throw ParseError("J must be given for every generator (missing '" +
                         m.coframe->generator_name(a) + "')");
      for (const auto& [mask, c] : jrows[a]->terms())
        for (std::size_t b = 0; b < 6; ++b)
          if (mask == (1u << b)) jm[a][b] = c;
    }
    JAction J{m.coframe, jm};
    if (!J.squares_to_minus_id()) throw ParseError("the declared J does not square to -1");
    m.J = J;
  }
  if (fform) m.F = fform;
  if (any_sig) {
    Connection c;
    c.coframe = m.coframe;
    c.kind = connections::ConnectionKind::custom;
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b) c.sigma[a][b] = Form::zero(m.coframe);
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = a + 1; b < 6; ++b)
        if (sig[a][b]) {
          c.sigma[a][b] = *sig[a][b];
          c.sigma[b][a] = -*sig[a][b];
        }
    m.sigma = c;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Command dispatch

namespace {

struct Options {
  std::string sign = "+";
  std::string family;
  std::vector<std::string> sets;
  std::string rules_file;
  std::string connection;
  bool verify_numeric = false;
  std::string model_path;
  std::string what;
};

struct Work {
  ModelFile model;
  std::optional<SU3Model> builtin;
  RuleSet rules;
  std::map<std::string, Rational> sets;  // --set values, table order via map
};

const StructureEquations& equations_of(const Work& w) {
  if (!w.model.equations) throw Error("the model declares no coframe");
  return *w.model.equations;
}

SU3Model synth_model(const Work& w) {
  if (w.builtin) return *w.builtin;
  const ModelFile& m = w.model;
  if (!m.coframe || !m.coframe->is_real() || !m.equations || !m.J || !m.F)
    throw Error("this command needs a real-coframe model with d, J, and F lines");
  auto gen = [&](std::size_t k) { return Form::generator(m.coframe, k); };
  Form iu = Form::scalar(m.coframe, Coefficient::i(m.table));
  auto cplx = [&](std::size_t a, std::size_t b) {
    return gen(a) + exterior::wedge(iu, gen(b));
  };
  Form psi = exterior::wedge(cplx(0, 1), exterior::wedge(cplx(2, 3), cplx(4, 5)));
  return SU3Model{*m.equations, *m.J, *m.F, psi, complexgeom::Family::I, +1, {}, {}};
}

Coefficient a_parameter(const Work& w, const std::string& name) {
  auto it = w.sets.find(name);
  if (it != w.sets.end()) return Coefficient::rational(w.model.table, it->second);
  if (w.model.table->has(name) && name != "pi2") return Coefficient::param(w.model.table, name);
  throw Error("connection A needs parameter '" + name + "': declare it or pass --set " + name + "=<value>");
}

Connection reduce_connection(Connection c, const RuleSet& rules) {
  if (rules.empty()) return c;
  for (auto& row : c.sigma)
    for (auto& f : row) f = f.apply_rules(rules);
  if (c.torsion_one_forms)
    for (auto& row : *c.torsion_one_forms)
      for (auto& f : row) f = f.apply_rules(rules);
  return c;
}

CurvatureMatrix reduce_curvature(CurvatureMatrix m, const RuleSet& rules) {
  if (rules.empty()) return m;
  for (auto& row : m.omega)
    for (auto& f : row) f = f.apply_rules(rules);
  return m;
}

// name: "chern" | "bismut" | "levi-civita" | "A" | "" (model default)
Connection resolve_connection(const Work& w, const Options& o, bool gauge_side) {
  std::string name = o.connection;
  if (name.empty()) {
    if (w.model.sigma) return *w.model.sigma;
    name = gauge_side ? "A" : "chern";
  }
  if (name == "levi-civita") return connections::levi_civita(equations_of(w));
  if (name == "A") {
    if (!w.model.coframe || !w.model.coframe->is_real())
      throw Error("connection A needs a real coframe");
    return connections::instanton_family(w.model.coframe, a_parameter(w, "lm"), a_parameter(w, "mu"),
                                         a_parameter(w, "tau"));
  }
  SU3Model m = synth_model(w);
  return name == "chern" ? connections::chern(m) : connections::bismut(m);
}

std::vector<std::pair<std::string, Coefficient>> parse_rule_file(const std::string& text,
                                                                 const ParamTablePtr& table,
                                                                 const std::vector<std::string>& params) {
  std::vector<std::pair<std::string, Coefficient>> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    std::string line = strip_comment_and_trim(raw);
    if (line.empty()) continue;
    if (!starts_with(line, "rule:"))
      throw ParseError("line " + std::to_string(ln) + ": a rules file holds rule: lines only");
    std::size_t arrow = line.find("->");
    if (arrow == std::string::npos)
      throw ParseError("line " + std::to_string(ln) + ": rule lines read: rule: <name>**2 -> <coefficient>");
    auto toks = tokenize(line.substr(5, arrow - 5), ln);
    if (toks.size() != 4 || toks[0].kind != Token::name || toks[1].kind != Token::power ||
        toks[2].kind != Token::number || toks[2].text != "2")
      throw ParseError("line " + std::to_string(ln) + ": the rule left side must be <name>**2");
    if (std::find(params.begin(), params.end(), toks[0].text) == params.end())
      throw UnknownParameter("line " + std::to_string(ln) + ": rule targets undeclared parameter '" +
                             toks[0].text + "'");
    out.emplace_back(toks[0].text, parse_coefficient(line.substr(arrow + 2), table, ln));
  }
  return out;
}

Work resolve_work(const Options& o) {
  Work w;
  if (!o.model_path.empty()) {
    std::ifstream f(o.model_path);
    if (!f) throw Error("cannot read model file '" + o.model_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    w.model = parse_model(ss.str());
  } else if (!o.family.empty()) {
    int sign = o.sign == "-" ? -1 : +1;
    auto t = make_table({"r", "s", "p", "q", "lm", "mu", "tau"});
    auto P = [&](const char* n) { return Coefficient::param(t, n); };
    SU3Model sm = o.family == "I" ? complexgeom::adapted_family_I(t, P("r"), P("s"), sign)
                                  : complexgeom::adapted_family_II(t, P("r"), P("p"), P("q"), sign);
    w.builtin = sm;
    w.model.table = t;
    w.model.params = {"r", "s", "p", "q", "lm", "mu", "tau"};
    w.model.assumptions = w.model.params;
    w.model.coframe = sm.equations.coframe();
    w.model.equations = sm.equations;
    w.model.J = sm.J;
    w.model.F = sm.F;
  } else {
    throw Error("give a model file or --family I|II");
  }
  w.rules = w.model.rules();
  if (!o.rules_file.empty()) {
    std::ifstream f(o.rules_file);
    if (!f) throw Error("cannot read rules file '" + o.rules_file + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    for (const auto& [n, c] : parse_rule_file(ss.str(), w.model.table, w.model.params)) w.rules.add(n, c);
  }
  for (const auto& s : o.sets) {
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw Error("--set expects name=value, got '" + s + "'");
    std::string name = s.substr(0, eq);
    if (!w.model.table->has(name) || name == "pi2")
      throw UnknownParameter("--set references unknown parameter '" + name + "'");
    Rational v;
    try {
      v = Rational(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error("--set value '" + s.substr(eq + 1) + "' is not a rational number");
    }
    v.canonicalize();
    w.sets[name] = v;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Numeric cross-checks

constexpr std::uint64_t kSeed = 0x6e696c67656f6dULL;  // "nilgeom"

Rational draw_nonzero(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 9), den(1, 9), coin(0, 1);
  Rational v(num(rng), den(rng));
  v.canonicalize();
  if (coin(rng)) v = -v;
  return v;
}

bool model_evaluates(const ModelFile& m, const Assignment& a) {
  auto each_form = [&](const Form& f) {
    for (const auto& [mask, c] : f.terms()) {
      (void)mask;
      (void)c.eval_at(a);
    }
  };
  try {
    if (m.equations) {
      std::size_t declared = m.coframe->is_real() ? 6 : 3;
      for (std::size_t i = 0; i < declared; ++i) each_form(m.equations->d_generator(i));
    }
    if (m.J)
      for (const auto& row : m.J->m)
        for (const auto& c : row) (void)c.eval_at(a);
    if (m.F) each_form(*m.F);
    if (m.sigma)
      for (const auto& row : m.sigma->sigma)
        for (const auto& f : row) each_form(f);
  } catch (const Error&) {
    return false;
  }
  return true;
}

// Draws an assignment for every parameter (pi2 included): free parameters get
// nonzero random rationals, rule parameters get an exact rational square root
// of the evaluated replacement when one exists.
std::optional<Assignment> sample_point(const ModelFile& m, const RuleSet& rules, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto a = coeffield::try_sample_on_variety(m.table, rules, rng);
    if (!a) continue;
    if (!model_evaluates(m, *a)) continue;
    return a;
  }
  return std::nullopt;
}

using exterior::eval_form;

ModelFile eval_model(const ModelFile& m, const Assignment& a) {
  ModelFile out;
  out.table = m.table;
  out.params = m.params;
  out.assumptions = m.assumptions;
  out.coframe = m.coframe;
  if (m.equations) {
    std::size_t declared = m.coframe->is_real() ? 6 : 3;
    std::vector<Form> nd;
    for (std::size_t i = 0; i < declared; ++i) nd.push_back(eval_form(m.equations->d_generator(i), a));
    out.equations = StructureEquations(m.coframe, nd);
  }
  if (m.J) {
    JAction nj = *m.J;
    for (auto& row : nj.m)
      for (auto& c : row) c = Coefficient::gaussian(m.table, c.eval_at(a));
    out.J = nj;
  }
  if (m.F) out.F = eval_form(*m.F, a);
  if (m.sigma) {
    Connection nc = *m.sigma;
    for (auto& row : nc.sigma)
      for (auto& f : row) f = eval_form(f, a);
    nc.torsion_one_forms.reset();
    out.sigma = nc;
  }
  return out;
}

// Re-runs `recheck` on three numeric instances of the model. Points are drawn
// on the rule variety (rule parameters receive exact square roots), so the
// numeric instances satisfy the same identities the symbolic pass certified.
void append_numeric_check(const Work& w, const std::function<bool(const Work&)>& recheck,
                          std::string& text, int& status) {
  std::mt19937_64 rng(kSeed);
  std::vector<Assignment> samples;
  for (int k = 0; k < 3; ++k) {
    auto a = sample_point(w.model, w.rules, rng);
    if (!a) {
      text += "numeric check: no rational sample point found; skipped\n";
      return;
    }
    samples.push_back(*a);
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    Work nw;
    nw.model = eval_model(w.model, samples[k]);
    nw.rules = RuleSet(w.model.table);
    for (const auto& p : w.model.params) {
      auto v = samples[k].get(w.model.table->index(p));
      if (v) nw.sets[p] = *v;
    }
    bool ok = false;
    try {
      ok = recheck(nw);
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      text += "numeric check at sample " + std::to_string(k + 1) + " (" + samples[k].str() + "): FAIL\n";
      status = 1;
      return;
    }
  }
  text += "numeric check at 3 random assignments: pass\n";
}

// Evaluates lhs and rhs at three random free assignments and compares exactly.
bool forms_agree_numerically(const Form& lhs, const Form& rhs, const ParamTablePtr& table,
                             std::string& note) {
  std::mt19937_64 rng(kSeed);
  int good = 0;
  for (int attempt = 0; attempt < 60 && good < 3; ++attempt) {
    Assignment a(table);
    for (std::size_t v = 0; v < table->size(); ++v) a.set(table->name(v), draw_nonzero(rng));
    try {
      if (eval_form(lhs, a) != eval_form(rhs, a)) {
        note = "numeric check at sample " + std::to_string(good + 1) + " (" + a.str() + "): FAIL";
        return false;
      }
      ++good;
    } catch (const Error&) {
      continue;  // degenerate point for some denominator; redraw
    }
  }
  if (good < 3) {
    note = "numeric check: insufficient nondegenerate samples; skipped";
    return true;
  }
  note = "numeric check at 3 random assignments: pass";
  return true;
}

// ---------------------------------------------------------------------------
// Individual commands

CommandResult cmd_check(const Work& w, const Options& o) {
  const std::string& what = o.what;
  if (what == "jacobi") {
    auto rep = liealg::check_jacobi(equations_of(w), w.rules.empty() ? nullptr : &w.rules);
    CommandResult r{rep.pass ? 0 : 1, rep.str() + "\n"};
    if (o.verify_numeric && rep.pass)
      append_numeric_check(
          w, [](const Work& nw) { return liealg::check_jacobi(equations_of(nw)).pass; }, r.text,
          r.status);
    return r;
  }
  if (what == "integrable") {
    if (!w.model.coframe || w.model.coframe->is_real())
      throw Error("check integrable needs a complex-coframe model");
    auto rep = complexgeom::check_integrable(equations_of(w));
    CommandResult r{rep.pass ? 0 : 1, rep.str() + "\n"};
    if (o.verify_numeric && rep.pass)
      append_numeric_check(
          w, [](const Work& nw) { return complexgeom::check_integrable(equations_of(nw)).pass; },
          r.text, r.status);
    return r;
  }
  if (what == "balanced") {
    if (!w.model.F) throw Error("check balanced needs an F line");
    auto balanced = [](const Work& ww) {
      Form fdf = exterior::wedge(*ww.model.F, equations_of(ww).d(*ww.model.F));
      if (!ww.rules.empty()) fdf = fdf.apply_rules(ww.rules);
      return fdf;
    };
    Form fdf = balanced(w);
    complexgeom::BalancedReport rep;
    rep.f_wedge_df = fdf;
    rep.pass = fdf.is_zero();
    CommandResult r{rep.pass ? 0 : 1, rep.str() + "\n"};
    if (o.verify_numeric && rep.pass)
      append_numeric_check(
          w, [&balanced](const Work& nw) { return balanced(nw).is_zero(); }, r.text, r.status);
    return r;
  }
  if (what == "su3") {
    auto rep = connections::su3_connection_check(
        reduce_connection(resolve_connection(w, o, false), w.rules));
    CommandResult r{rep.pass ? 0 : 1, "su3: " + rep.str() + "\n"};
    if (o.verify_numeric && rep.pass)
      append_numeric_check(
          w,
          [&o](const Work& nw) {
            return connections::su3_connection_check(resolve_connection(nw, o, false)).pass;
          },
          r.text, r.status);
    return r;
  }
  if (what == "instanton") {
    if (!w.model.J) throw Error("check instanton needs the almost-complex structure J");
    auto omega = reduce_curvature(
        connections::curvature(reduce_connection(resolve_connection(w, o, false), w.rules),
                               equations_of(w)),
        w.rules);
    auto rep = connections::instanton_check(omega, *w.model.J);
    CommandResult r{rep.pass ? 0 : 1, "instanton: " + rep.str() + "\n"};
    if (o.verify_numeric && rep.pass)
      append_numeric_check(
          w,
          [&o](const Work& nw) {
            auto om = connections::curvature(resolve_connection(nw, o, false), equations_of(nw));
            return connections::instanton_check(om, *nw.model.J).pass;
          },
          r.text, r.status);
    return r;
  }
  throw Error("unknown check '" + what + "'");
}

CommandResult cmd_classify(const Work& w) {
  liealg::StructureEquations s = equations_of(w);
  std::optional<exterior::JAction> J = w.model.J;
  if (w.model.coframe && !w.model.coframe->is_real()) {
    // Complex coframe: realify with the canonical identification; J is the
    // induced action of multiplication by i.
    auto e = exterior::Coframe::make_real(w.model.table, {"e1", "e2", "e3", "e4", "e5", "e6"});
    auto res = liealg::realify_default(s, e, w.rules.empty() ? nullptr : &w.rules);
    s = res.real_equations;
    J = res.J;
  }
  if (!J) throw Error("classify needs the almost-complex structure J");
  auto chain = complexgeom::ascending_series(s, *J);
  auto kind = complexgeom::classify_complex_structure(s, *J);
  std::ostringstream os;
  os << "ascending series dimensions:";
  for (const auto& term : chain.terms) os << " " << term.size();
  os << "\n";
  if (chain.generic_rank_warning)
    os << "note: ranks were decided generically (symbolic parameters present)\n";
  os << "classification: "
     << (kind == complexgeom::Nilpotency::nilpotent ? "nilpotent" : "non-nilpotent") << "\n";
  return {0, os.str()};
}

CommandResult cmd_compute(const Work& w, const Options& o) {
  const std::string& what = o.what;
  auto reduced = [&](Form f) {
    if (!w.rules.empty()) f = f.apply_rules(w.rules);
    return f;
  };
  if (what == "torsion")
    return {0, reduced(complexgeom::torsion_3form(synth_model(w))).str() + "\n"};
  if (what == "dT")
    return {0,
            reduced(equations_of(w).d(complexgeom::torsion_3form(synth_model(w)))).str() + "\n"};
  if (what == "lee") return {0, reduced(complexgeom::lee_form(synth_model(w))).str() + "\n"};
  if (what == "connection")
    return {0, reduce_connection(resolve_connection(w, o, false), w.rules).str() + "\n"};
  if (what == "curvature")
    return {0,
            reduce_curvature(connections::curvature(
                                 reduce_connection(resolve_connection(w, o, false), w.rules),
                                 equations_of(w)),
                             w.rules)
                    .str() +
                "\n"};
  if (what == "p1") {
    auto omega = connections::curvature(resolve_connection(w, o, false), equations_of(w));
    return {0, reduced(connections::pontrjagin_trace(omega).p1).str() + "\n"};
  }
  throw Error("unknown compute target '" + what + "'");
}

CommandResult cmd_solve_anomaly(const Work& w, const Options& o) {
  SU3Model m = synth_model(w);
  Form dT = equations_of(w).d(complexgeom::torsion_3form(m));
  // The curvature side defaults to the Chern connection; a custom sigma block
  // in the model file feeds the gauge side, never this one.
  Connection nabla = o.connection.empty() ? connections::chern(m) : resolve_connection(w, o, false);
  Connection gauge = w.model.sigma && o.connection.empty()
                         ? *w.model.sigma
                         : connections::instanton_family(w.model.coframe, a_parameter(w, "lm"),
                                                         a_parameter(w, "mu"), a_parameter(w, "tau"));
  Form p1_nabla = connections::pontrjagin_trace(connections::curvature(nabla, equations_of(w))).p1;
  Form p1_gauge = connections::pontrjagin_trace(connections::curvature(gauge, equations_of(w))).p1;
  auto sol = anomaly::solve_anomaly(dT, p1_nabla, p1_gauge, w.rules);
  CommandResult r{sol.status == anomaly::AnomalyStatus::ok ? 0 : 1, sol.str() + "\n"};
  if (o.verify_numeric && sol.status == anomaly::AnomalyStatus::ok) {
    Form lhs = dT.apply_rules(w.rules);
    Form rhs = (p1_nabla - p1_gauge).apply_rules(w.rules).scaled(sol.M).apply_rules(w.rules);
    std::string note;
    if (!forms_agree_numerically(lhs, rhs, w.model.table, note)) r.status = 1;
    r.text += note + "\n";
  }
  return r;
}

CommandResult cmd_report_strominger(const Work& w, const Options& o) {
  SU3Model m = synth_model(w);
  Connection gauge = resolve_connection(w, o, true);
  std::vector<Assignment> samples;
  if (!w.sets.empty()) {
    Assignment a(w.model.table);
    for (const auto& [n, v] : w.sets) a.set(n, v);
    samples.push_back(a);
  }
  auto rep = anomaly::strominger_report(m, gauge, w.rules, samples);
  return {rep.pass ? 0 : 1, rep.str() + "\n"};
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
  Options o;
  std::string cmd;
  CLI::App app{"exact exterior calculus on six-dimensional nilpotent Lie algebras", "nilgeom"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* s, bool with_model) {
    if (with_model) s->add_option("model", o.model_path, "model file (omit to use --family)");
    s->add_option("--sign", o.sign, "structure-equation sign of the built-in model")
        ->check(CLI::IsMember({"+", "-"}));
    s->add_option("--family", o.family, "built-in model family")->check(CLI::IsMember({"I", "II"}));
    // Each --set consumes exactly one value, so a trailing positional model
    // path is not swallowed by the repeatable option.
    s->add_option("--set", o.sets, "parameter value name=p/q (repeatable)")
        ->allow_extra_args(false);
    s->add_option("--rules", o.rules_file, "file of rule: lines");
    s->add_option("--connection", o.connection, "connection to use")
        ->check(CLI::IsMember({"chern", "bismut", "levi-civita", "A"}));
    s->add_flag("--verify-numeric", o.verify_numeric,
                "re-verify passing identities at 3 random rational assignments");
  };
  auto* c_check = app.add_subcommand("check", "verify a property of a model");
  c_check->add_option("what", o.what, "property to check")
      ->required()
      ->check(CLI::IsMember({"jacobi", "integrable", "balanced", "instanton", "su3"}));
  common(c_check, true);
  c_check->callback([&] { cmd = "check"; });
  auto* c_classify =
      app.add_subcommand("classify", "ascending series and nilpotency of the complex structure");
  common(c_classify, true);
  c_classify->callback([&] { cmd = "classify"; });
  auto* c_compute = app.add_subcommand("compute", "print a derived geometric object");
  c_compute->add_option("what", o.what, "object to compute")
      ->required()
      ->check(CLI::IsMember({"torsion", "connection", "curvature", "p1", "dT", "lee"}));
  common(c_compute, true);
  c_compute->callback([&] { cmd = "compute"; });
  auto* c_solve = app.add_subcommand("solve", "solve the anomaly cancellation condition");
  c_solve->add_option("what", o.what, "equation to solve")->required()->check(CLI::IsMember({"anomaly"}));
  common(c_solve, true);
  c_solve->callback([&] { cmd = "solve"; });
  auto* c_report = app.add_subcommand("report", "full supersymmetry report");
  c_report->add_option("what", o.what, "report to produce")
      ->required()
      ->check(CLI::IsMember({"strominger"}));
  common(c_report, true);
  c_report->callback([&] { cmd = "report"; });
  auto* c_repro = app.add_subcommand("reproduce", "run the built-in verification ledger");
  c_repro->add_option("what", o.what, "suite to run")->required()->check(CLI::IsMember({"paper"}));
  c_repro->callback([&] { cmd = "reproduce"; });

  std::vector<const char*> cargs;
  cargs.push_back("nilgeom");
  for (const auto& a : argv) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    return {0, os.str()};
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    return {2, os.str()};
  }

  try {
    if (cmd == "reproduce") {
      auto results = acceptance::run_all();
      return {acceptance::all_pass(results) ? 0 : 1, acceptance::render(results)};
    }
    Work w = resolve_work(o);
    if (cmd == "check") return cmd_check(w, o);
    if (cmd == "classify") return cmd_classify(w);
    if (cmd == "compute") return cmd_compute(w, o);
    if (cmd == "solve") return cmd_solve_anomaly(w, o);
    if (cmd == "report") return cmd_report_strominger(w, o);
    throw Error("no command selected");
  } catch (const Error& e) {
    return {2, std::string(e.what()) + "\n"};
  }
}

}  // namespace nilgeom::cli
