#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nilgeom/liealg.hpp"

using namespace nilgeom;
using namespace nilgeom::coeffield;
using namespace nilgeom::exterior;
using namespace nilgeom::liealg;

namespace {

Form cw(const CoframePtr& c, int a, int b) {  // wedge of complex generators, 0-based
  return wedge(Form::generator(c, static_cast<std::size_t>(a)),
               Form::generator(c, static_cast<std::size_t>(b)));
}

// dw1 = 0, dw2 = w1^w3 + w1^~w3, dw3 = sign * i (w1^~w2 - w2^~w1)
StructureEquations make_eq3(const CoframePtr& w, int sign) {
  auto t = w->table();
  auto i = Coefficient::i(t);
  auto si = sign > 0 ? i : -i;
  return StructureEquations(
      w, {Form::zero(w), cw(w, 0, 2) + cw(w, 0, 5),
          (cw(w, 0, 4) - cw(w, 1, 3)).scaled(si)});
}

// dw1 = 0, dw2 = w1^w3 + w1^~w3, dw3 = i*eps*w1^~w1 + sign*i (w1^~w2 - w2^~w1)
StructureEquations make_eq2(const CoframePtr& w, int eps, int sign) {
  auto t = w->table();
  auto i = Coefficient::i(t);
  auto si = sign > 0 ? i : -i;
  return StructureEquations(
      w, {Form::zero(w), cw(w, 0, 2) + cw(w, 0, 5),
          cw(w, 0, 3).scaled(i * Coefficient::integer(t, eps)) +
              (cw(w, 0, 4) - cw(w, 1, 3)).scaled(si)});
}

struct RealFix {
  ParamTablePtr t;
  CoframePtr e;
  explicit RealFix(std::vector<std::string> params = {"r", "s"})
      : t(make_table(std::move(params))),
        e(Coframe::make_real(t, {"e1", "e2", "e3", "e4", "e5", "e6"})) {}
  Coefficient c(long v) const { return Coefficient::integer(t, v); }
  Coefficient p(const std::string& n) const { return Coefficient::param(t, n); }
  Form term(std::initializer_list<int> idx) const {
    return Form::term(e, idx, Coefficient::integer(t, 1));
  }
  Form term(std::initializer_list<int> idx, Coefficient v) const {
    return Form::term(e, idx, v);
  }
};

StructureEquations family_I(const RealFix& f, int sign) {
  auto r = f.p("r"), s = f.p("s");
  auto two = f.c(2);
  auto d6 = (f.term({1, 3}) + f.term({2, 4})).scaled(two / (r * s));
  if (sign < 0) d6 = -d6;
  return StructureEquations(f.e, {Form::zero(f.e), Form::zero(f.e),
                                  f.term({1, 5}, two * s / r), f.term({2, 5}, two * s / r),
                                  Form::zero(f.e), d6});
}

StructureEquations family_II(const RealFix& f, int sign) {
  auto r = f.p("r"), p = f.p("p"), q = f.p("q");
  auto one = f.c(1), four = f.c(4);
  auto k = one / (r * (p * p - q * q));
  auto sg = sign > 0 ? one : -one;
  auto d3 = ((f.term({1, 3}) + f.term({2, 4})).scaled(-sg) +
             (f.term({1, 6}) - f.term({2, 5})).scaled(sg * q / p) -
             f.term({1, 4}, four * p * p * q * q) - f.term({1, 5}, four * p * p * p * q))
                .scaled(k);
  auto d4 = (-f.term({2, 4}, four * p * p * q * q) - f.term({2, 5}, four * p * p * p * q))
                .scaled(k);
  auto d5 = (f.term({2, 4}, four * p * q * q * q) + f.term({2, 5}, four * p * p * q * q))
                .scaled(k);
  auto d6 = ((f.term({1, 3}) + f.term({2, 4})).scaled(-sg * p / q) +
             (f.term({1, 6}) - f.term({2, 5})).scaled(sg) -
             f.term({1, 4}, four * p * q * q * q) - f.term({1, 5}, four * p * p * q * q))
                .scaled(k);
  return StructureEquations(f.e, {Form::zero(f.e), Form::zero(f.e), d3, d4, d5, d6});
}

}  // namespace

TEST_CASE("differential of generators and of F") {
  RealFix f;
  auto s = family_I(f, +1);
  auto r = f.p("r"), sp = f.p("s");
  auto two = f.c(2);

  CHECK(s.d(Form::generator(f.e, 2)) == f.term({1, 5}, two * sp / r));
  CHECK(s.d(f.term({1, 2})) == Form::zero(f.e));

  // numeric instance r=2, s=1: d e3 = e^{15}
  RealFix g(std::vector<std::string>{});
  auto sg = StructureEquations(
      g.e, {Form::zero(g.e), Form::zero(g.e), g.term({1, 5}), g.term({2, 5}),
            Form::zero(g.e),
            (g.term({1, 3}) + g.term({2, 4})).scaled(g.c(1))});
  CHECK(sg.d(Form::generator(g.e, 2)) == g.term({1, 5}));

  auto F = f.term({1, 2}) + f.term({3, 4}) + f.term({5, 6});
  auto dF = f.term({1, 4, 5}, -two * sp / r) + f.term({2, 3, 5}, two * sp / r) -
            (f.term({1, 3, 5}) + f.term({2, 4, 5})).scaled(two / (r * sp));
  CHECK(s.d(F) == dF);

  auto sminus = family_I(f, -1);
  auto dFminus = f.term({1, 4, 5}, -two * sp / r) + f.term({2, 3, 5}, two * sp / r) +
                 (f.term({1, 3, 5}) + f.term({2, 4, 5})).scaled(two / (r * sp));
  CHECK(sminus.d(F) == dFminus);
}

TEST_CASE("d is an antiderivation and squares to zero on a Lie algebra") {
  RealFix f;
  auto s = family_I(f, +1);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-3, 3), deg(1, 3);
  auto random_homogeneous = [&](unsigned d) {
    Form out(f.e);
    for (int trial = 0; trial < 3; ++trial) {
      std::uint8_t mask = 0;
      while (std::popcount(static_cast<unsigned>(mask)) != static_cast<int>(d))
        mask = static_cast<std::uint8_t>(rng() & 0x3F);
      out.add_term(mask, f.c(coef(rng)));
    }
    return out;
  };
  for (int trial = 0; trial < 15; ++trial) {
    unsigned da = deg(rng), db = deg(rng);
    Form a = random_homogeneous(da), b = random_homogeneous(db);
    Form lhs = s.d(wedge(a, b));
    Form rhs = wedge(s.d(a), b) + (da % 2 == 0 ? wedge(a, s.d(b)) : -wedge(a, s.d(b)));
    CHECK(lhs == rhs);
    CHECK(s.d(s.d(a)).is_zero());
  }
}

TEST_CASE("jacobi reports") {
  RealFix f;
  CHECK(check_jacobi(family_I(f, +1)).pass);
  CHECK(check_jacobi(family_I(f, -1)).pass);

  RealFix h({"r", "p", "q"});
  CHECK(check_jacobi(family_II(h, +1)).pass);
  CHECK(check_jacobi(family_II(h, -1)).pass);

  // d b4 = b13, d b5 = b23, d b6 = b14 + b25
  RealFix b(std::vector<std::string>{});
  auto beta = StructureEquations(
      b.e, {Form::zero(b.e), Form::zero(b.e), Form::zero(b.e), b.term({1, 3}),
            b.term({2, 3}), b.term({1, 4}) + b.term({2, 5})});
  CHECK(check_jacobi(beta).pass);

  // d e3 = e12, d e4 = e34 is not a Lie algebra: d(d e4) = e124
  auto bad = StructureEquations(
      b.e, {Form::zero(b.e), Form::zero(b.e), b.term({1, 2}), b.term({3, 4}),
            Form::zero(b.e), Form::zero(b.e)});
  auto rep = check_jacobi(bad);
  CHECK(!rep.pass);
  CHECK(rep.entries[3].second == b.term({1, 2, 4}));
  CHECK(rep.entries[2].second.is_zero());

  // complex-kind jacobi
  auto tc = make_table({});
  auto w = Coframe::make_complex(tc, {"w1", "w2", "w3"});
  CHECK(check_jacobi(make_eq3(w, +1)).pass);
  CHECK(check_jacobi(make_eq3(w, -1)).pass);
  CHECK(check_jacobi(make_eq2(w, 1, +1)).pass);
}

TEST_CASE("structure equation printing") {
  RealFix f;
  auto s = family_I(f, +1);
  CHECK(s.str() ==
        "d e1 = 0\n"
        "d e2 = 0\n"
        "d e3 = (2*s/r)*e1^e5\n"
        "d e4 = (2*s/r)*e2^e5\n"
        "d e5 = 0\n"
        "d e6 = (2/(r*s))*e1^e3 + (2/(r*s))*e2^e4");
}

TEST_CASE("structures_equal distinguishes signs and epsilon") {
  RealFix f;
  CHECK(structures_equal(family_I(f, +1), family_I(f, +1)));
  CHECK(!structures_equal(family_I(f, +1), family_I(f, -1)));

  auto tc = make_table({});
  auto w = Coframe::make_complex(tc, {"w1", "w2", "w3"});
  CHECK(!structures_equal(make_eq2(w, 0, +1), make_eq2(w, 1, +1)));
  CHECK(structures_equal(make_eq2(w, 0, +1), make_eq3(w, +1)));

  RealFix g({"r", "s"});
  auto other = Coframe::make_real(g.t, {"a1", "a2", "a3", "a4", "a5", "a6"});
  auto zero6 = std::vector<Form>(6, Form::zero(other));
  CHECK_THROWS_AS(structures_equal(family_I(f, +1), StructureEquations(other, zero6)),
                  CoframeMismatch);
}

TEST_CASE("transform_coframe: identity, functoriality") {
  RealFix f;
  auto s = family_I(f, +1);
  auto F = f.term({1, 2}) + f.term({3, 4}) + f.term({5, 6});
  auto id6 = CoframeTransformation::identity(f.t, 6);
  auto tr = transform_coframe(s, id6, F);
  CHECK(structures_equal(tr.equations, s));
  CHECK(*tr.F == F);

  // m1: unit upper-triangular, m2: diagonal with an extra lower entry
  std::vector<std::vector<Coefficient>> a(6, std::vector<Coefficient>(6, f.c(0)));
  std::vector<std::vector<Coefficient>> b(6, std::vector<Coefficient>(6, f.c(0)));
  for (int i = 0; i < 6; ++i) {
    a[i][i] = f.c(1);
    b[i][i] = f.c(i == 1 ? 2 : (i == 4 ? 3 : 1));
  }
  a[0][2] = f.c(2);
  a[1][5] = f.c(-1);
  a[3][4] = f.p("r");
  b[5][0] = f.c(1);
  CoframeTransformation m1(f.t, a), m2(f.t, b);
  auto step = transform_coframe(transform_coframe(s, m1, F).equations, m2,
                                transform_coframe(s, m1, F).F);
  auto direct = transform_coframe(s, m2 * m1, F);
  CHECK(structures_equal(step.equations, direct.equations));
  CHECK(*step.F == *direct.F);

  // singular transformation
  std::vector<std::vector<Coefficient>> sing(6, std::vector<Coefficient>(6, f.c(0)));
  for (int i = 0; i < 5; ++i) sing[i][i] = f.c(1);
  CHECK_THROWS_AS(transform_coframe(s, CoframeTransformation(f.t, sing)),
                  SingularTransformation);
}

TEST_CASE("the symmetry family of the reduced complex equations preserves them") {
  // new1 = (x+iy) w1, new2 = beta(x+iy) w1 + c(x+iy) w2, new3 = c w3,
  // with x^2+y^2 = 1 via the rule y**2 -> 1 - x**2
  auto t = make_table({"beta", "c", "x", "y"});
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  RuleSet rules(t);
  auto x = Coefficient::param(t, "x"), y = Coefficient::param(t, "y");
  auto one = Coefficient::integer(t, 1);
  rules.add("y", one - x * x);
  auto i = Coefficient::i(t);
  auto u = x + i * y;  // unit modulus under the rule
  auto beta = Coefficient::param(t, "beta"), c = Coefficient::param(t, "c");
  auto zero = Coefficient::integer(t, 0);

  for (int sign : {+1, -1}) {
    auto s = make_eq3(w, sign);
    CoframeTransformation m(t, {{u, zero, zero}, {beta * u, c * u, zero}, {zero, zero, c}});
    auto tr = transform_coframe(s, m, std::nullopt, &rules);
    CHECK(structures_equal(tr.equations, s));
  }
}

TEST_CASE("the v=0 balanced metric lands on the diagonal normal form") {
  // starting metric: 2F = i(r^2 w11' + s^2 w22' + t^2 w33') + u w12' - u' w21'
  // with u = i*uu purely imaginary, v = z = 0
  auto t = make_table({"r", "s", "tt", "uu"});
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  auto s = make_eq3(w, +1);
  auto i = Coefficient::i(t);
  auto r = Coefficient::param(t, "r"), sp = Coefficient::param(t, "s"),
       tp = Coefficient::param(t, "tt"), uu = Coefficient::param(t, "uu");
  auto half = Coefficient::rational(t, Rational(1, 2));
  auto zero = Coefficient::integer(t, 0);

  auto F = (cw(w, 0, 3).scaled(r * r) + cw(w, 1, 4).scaled(sp * sp) +
            cw(w, 2, 5).scaled(tp * tp))
               .scaled(i * half) +
           (cw(w, 0, 4) + cw(w, 1, 3)).scaled(i * uu * half);

  // new1 = -w1, new2 = (tt*uu/s^2) w1 + tt w2, new3 = -tt w3
  CoframeTransformation m(
      t, {{-Coefficient::integer(t, 1), zero, zero},
          {tp * uu / (sp * sp), tp, zero},
          {zero, zero, -tp}});
  auto tr = transform_coframe(s, m, F);
  CHECK(structures_equal(tr.equations, s));  // the complex equations are preserved

  auto want = (cw(w, 0, 3).scaled((r * r * sp * sp - uu * uu) / (sp * sp)) +
               cw(w, 1, 4).scaled(sp * sp / (tp * tp)) + cw(w, 2, 5))
                  .scaled(i * half);
  CHECK(*tr.F == want);
}

TEST_CASE("realify of the eps=0 equations yields (0,0,0,12,23,14-35)") {
  auto t = make_table({});
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  auto a = Coframe::make_real(t, {"a1", "a2", "a3", "a4", "a5", "a6"});
  auto i = Coefficient::i(t);
  auto g = [&](int k) { return Form::generator(a, static_cast<std::size_t>(k - 1)); };
  auto half = Coefficient::rational(t, Rational(1, 2));
  auto two = Coefficient::integer(t, 2);

  for (int sign : {+1, -1}) {
    auto s = make_eq3(w, sign);
    // w1 = a1 - i a3, w2 = a4 + i a5, w3 = (1/2) a2 +- 2 i a6
    std::vector<Form> map = {g(1) - g(3).scaled(i), g(4) + g(5).scaled(i),
                             g(2).scaled(half) + g(6).scaled((sign > 0 ? two * i : -(two * i)))};
    auto res = realify(s, a, map);
    auto af = [&](std::initializer_list<int> idx) {
      return Form::term(a, idx, Coefficient::integer(t, 1));
    };
    auto want = StructureEquations(
        a, {Form::zero(a), Form::zero(a), Form::zero(a), af({1, 2}), af({2, 3}),
            af({1, 4}) - af({3, 5})});
    CHECK(structures_equal(res.real_equations, want));
    CHECK(check_jacobi(res.real_equations).pass);
    CHECK(res.J.squares_to_minus_id());
  }

  // J action for the + sign: J a1 = a3, J a2 = -4 a6, J a4 = -a5, J a6 = a2/4
  auto res = realify(make_eq3(w, +1), a,
                     {g(1) - g(3).scaled(i), g(4) + g(5).scaled(i),
                      g(2).scaled(half) + g(6).scaled(two * i)});
  CHECK(apply_J(g(1), res.J) == g(3));
  CHECK(apply_J(g(3), res.J) == -g(1));
  CHECK(apply_J(g(4), res.J) == -g(5));
  CHECK(apply_J(g(2), res.J) == g(6).scaled(-Coefficient::integer(t, 4)));
  CHECK(apply_J(g(6), res.J) == g(2).scaled(Coefficient::rational(t, Rational(1, 4))));
}

TEST_CASE("realify of the eps=1 equations yields (0,0,12,13,23,14+25)") {
  auto t = make_table({"sq2"});
  RuleSet rules(t);
  rules.add("sq2", Coefficient::integer(t, 2));
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  auto a = Coframe::make_real(t, {"a1", "a2", "a3", "a4", "a5", "a6"});
  auto i = Coefficient::i(t);
  auto sq2 = Coefficient::param(t, "sq2");
  auto half = Coefficient::rational(t, Rational(1, 2));
  auto two = Coefficient::integer(t, 2);
  auto g = [&](int k) { return Form::generator(a, static_cast<std::size_t>(k - 1)); };

  for (int sign : {+1, -1}) {
    auto s = make_eq2(w, 1, sign);
    // w1 = (sq2/2)(a1 + i a2), w2 = sq2 (a4 + i a5), w3 = a3 +- 2 i a6
    std::vector<Form> map = {(g(1) + g(2).scaled(i)).scaled(sq2 * half),
                             (g(4) + g(5).scaled(i)).scaled(sq2),
                             g(3) + g(6).scaled((sign > 0 ? two * i : -(two * i)))};
    auto res = realify(s, a, map, &rules);
    auto af = [&](std::initializer_list<int> idx) {
      return Form::term(a, idx, Coefficient::integer(t, 1));
    };
    auto want = StructureEquations(
        a, {Form::zero(a), Form::zero(a), af({1, 2}), af({1, 3}), af({2, 3}),
            af({1, 4}) + af({2, 5})});
    CHECK(structures_equal(res.real_equations, want));
    CHECK(check_jacobi(res.real_equations).pass);
  }
}

TEST_CASE("realify commutes with the differential on generator images") {
  auto t = make_table({});
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  auto a = Coframe::make_real(t, {"a1", "a2", "a3", "a4", "a5", "a6"});
  auto i = Coefficient::i(t);
  auto g = [&](int k) { return Form::generator(a, static_cast<std::size_t>(k - 1)); };
  auto half = Coefficient::rational(t, Rational(1, 2));
  auto two = Coefficient::integer(t, 2);
  auto s = make_eq3(w, +1);
  std::vector<Form> map = {g(1) - g(3).scaled(i), g(4) + g(5).scaled(i),
                           g(2).scaled(half) + g(6).scaled(two * i)};
  auto res = realify(s, a, map);
  std::array<Form, 6> images = {map[0], map[1], map[2],
                                map[0].conj(), map[1].conj(), map[2].conj()};
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(res.real_equations.d(images[k]) == substitute(s.d_generator(k), images));
}

TEST_CASE("realify with the default identification and failure modes") {
  auto t = make_table({});
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  auto e = Coframe::make_real(t, {"e1", "e2", "e3", "e4", "e5", "e6"});
  auto abelian = StructureEquations(w, {Form::zero(w), Form::zero(w), Form::zero(w)});
  auto res = realify_default(abelian, e);
  auto adapted = JAction::adapted(e);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) CHECK(res.J.m[r][c] == adapted.m[r][c]);
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(res.real_equations.d_generator(k).is_zero());

  auto i = Coefficient::i(t);
  auto g = [&](int k) { return Form::generator(e, static_cast<std::size_t>(k - 1)); };
  // w1 and w2 both mapped to a1 + i a2: not invertible
  CHECK_THROWS_AS(
      realify(abelian, e, {g(1) + g(2).scaled(i), g(1) + g(2).scaled(i), g(5) + g(6).scaled(i)}),
      SingularMap);
}

TEST_CASE("matrix inversion applies rules during pivoting") {
  auto t = make_table({"x", "y"});
  RuleSet rules(t);
  auto x = Coefficient::param(t, "x"), y = Coefficient::param(t, "y");
  auto one = Coefficient::integer(t, 1), zero = Coefficient::integer(t, 0);
  rules.add("y", one - x * x);
  // [[x^2+y^2, 0], [0, 1]] reduces to the identity under the rule
  std::vector<std::vector<Coefficient>> m = {{x * x + y * y, zero}, {zero, one}};
  auto inv = invert_matrix(m, &rules);
  CHECK(inv[0][0] == one);
  CHECK(inv[0][1] == zero);
  CHECK(inv[1][1] == one);

  std::vector<std::vector<Coefficient>> sing = {{x, x}, {x, x}};
  CHECK_THROWS_AS(invert_matrix(sing), SingularTransformation);
  CHECK_THROWS_AS(invert_matrix(sing, nullptr, /*as_map=*/true), SingularMap);
}
