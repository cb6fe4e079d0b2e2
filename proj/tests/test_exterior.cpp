#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nilgeom/exterior.hpp"

using namespace nilgeom;
using namespace nilgeom::coeffield;
using namespace nilgeom::exterior;

namespace {

struct Fixture {
  ParamTablePtr t = make_table({"r", "s"});
  CoframePtr e = Coframe::make_real(t, {"e1", "e2", "e3", "e4", "e5", "e6"});
  Coefficient one = Coefficient::integer(t, 1);
  Coefficient c(long v) const { return Coefficient::integer(t, v); }
  Coefficient p(const std::string& n) const { return Coefficient::param(t, n); }
  Form gen(int k) const { return Form::generator(e, static_cast<std::size_t>(k - 1)); }
  Form term(std::initializer_list<int> idx, Coefficient v) const {
    return Form::term(e, idx, v);
  }
  Form term(std::initializer_list<int> idx) const { return Form::term(e, idx, one); }
};

}  // namespace

TEST_CASE("wedge: signs, squares, F wedge F") {
  Fixture f;
  auto e13 = f.term({1, 3});
  auto e24 = f.term({2, 4});
  CHECK(wedge(e13, e24) == f.term({1, 2, 3, 4}, f.c(-1)));

  auto s = e13 + e24;
  CHECK(wedge(s, s) == f.term({1, 2, 3, 4}, f.c(-2)));

  auto F = f.term({1, 2}) + f.term({3, 4}) + f.term({5, 6});
  auto FF = wedge(F, F);
  CHECK(FF == f.term({1, 2, 3, 4}, f.c(2)) + f.term({1, 2, 5, 6}, f.c(2)) +
                  f.term({3, 4, 5, 6}, f.c(2)));

  auto t2 = make_table({"r", "s"});
  auto other = Coframe::make_real(t2, {"a1", "a2", "a3", "a4", "a5", "a6"});
  CHECK_THROWS_AS(wedge(F, Form::generator(other, 0)), CoframeMismatch);
}

TEST_CASE("wedge is graded-commutative and associative on random forms") {
  Fixture f;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(-3, 3), deg(1, 4);
  auto random_homogeneous = [&](unsigned d) {
    Form out(f.e);
    for (int trial = 0; trial < 4; ++trial) {
      std::uint8_t mask = 0;
      while (std::popcount(static_cast<unsigned>(mask)) != static_cast<int>(d))
        mask = static_cast<std::uint8_t>(rng() & 0x3F);
      out.add_term(mask, f.c(coef(rng)));
    }
    return out;
  };
  for (int trial = 0; trial < 25; ++trial) {
    unsigned da = deg(rng), db = deg(rng), dc = deg(rng);
    Form a = random_homogeneous(da), b = random_homogeneous(db), c = random_homogeneous(dc);
    Form ab = wedge(a, b), ba = wedge(b, a);
    CHECK(ab == (da * db % 2 == 0 ? ba : -ba));
    CHECK(wedge(ab, c) == wedge(a, wedge(b, c)));
  }
}

TEST_CASE("adapted J action") {
  Fixture f;
  auto J = JAction::adapted(f.e);
  CHECK(J.squares_to_minus_id());
  CHECK(apply_J(f.gen(1), J) == -f.gen(2));
  CHECK(apply_J(f.gen(2), J) == f.gen(1));

  auto F = f.term({1, 2}) + f.term({3, 4}) + f.term({5, 6});
  CHECK(apply_J(F, J) == F);

  // J twice on a k-form scales by (-1)^k
  auto a = f.term({1, 3, 5}) + f.term({2, 4, 6}, f.c(-2));
  CHECK(apply_J(apply_J(a, J), J) == -a);
  auto b = f.term({1, 3}) + f.term({2, 4}, f.c(-2));
  CHECK(apply_J(apply_J(b, J), J) == b);

  CHECK_THROWS_AS(apply_J(f.gen(1) + f.term({1, 2}), J), NonHomogeneous);
}

TEST_CASE("family-I torsion is J of dF") {
  Fixture f;
  auto r = f.p("r"), s = f.p("s");
  auto two = f.c(2);
  // dF for the (+)-sign family-I equations
  auto dF = f.term({1, 4, 5}, -two * s / r) + f.term({2, 3, 5}, two * s / r) -
            (f.term({1, 3, 5}, two / (r * s)) + f.term({2, 4, 5}, two / (r * s)));
  auto J = JAction::adapted(f.e);
  auto T = apply_J(dF, J);
  auto want = f.term({1, 4, 6}, two * s / r) + f.term({2, 3, 6}, -two * s / r) +
              f.term({1, 3, 6}, two / (r * s)) + f.term({2, 4, 6}, two / (r * s));
  CHECK(T == want);
}

TEST_CASE("hodge star on the oriented orthonormal coframe") {
  Fixture f;
  CHECK(hodge_star(f.term({1, 2})) == f.term({3, 4, 5, 6}));
  CHECK(hodge_star(f.term({1, 3, 5})) == f.term({2, 4, 6}, f.c(-1)));
  CHECK(hodge_star(hodge_star(f.term({1, 3, 5}))) == -f.term({1, 3, 5}));
  CHECK(hodge_star(Form::scalar(f.e, f.one)) == f.term({1, 2, 3, 4, 5, 6}));
  CHECK(hodge_star(f.term({1, 2, 3, 4, 5, 6})) == Form::scalar(f.e, f.one));

  // involution sign (-1)^{k(6-k)} across degrees
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (unsigned d = 0; d <= 6; ++d) {
    Form a(f.e);
    for (int trial = 0; trial < 3; ++trial) {
      std::uint8_t mask = 0;
      while (std::popcount(static_cast<unsigned>(mask)) != static_cast<int>(d))
        mask = static_cast<std::uint8_t>(rng() & 0x3F);
      a.add_term(mask, f.c(coef(rng)));
    }
    int sign = (d * (6 - d)) % 2 == 0 ? 1 : -1;
    CHECK(hodge_star(hodge_star(a)) == (sign == 1 ? a : -a));
  }

  auto tc = make_table({});
  auto w = Coframe::make_complex(tc, {"w1", "w2", "w3"});
  CHECK_THROWS_AS(hodge_star(Form::generator(w, 0)), ComplexCoframe);
}

TEST_CASE("frame evaluation is the determinant pairing") {
  Fixture f;
  auto e12 = f.term({1, 2});
  CHECK(evaluate_on_frame(e12, {0, 1}) == f.one);
  CHECK(evaluate_on_frame(e12, {1, 0}) == f.c(-1));
  CHECK(evaluate_on_frame(f.term({1, 3}) + f.term({2, 4}), {0, 1}) == f.c(0));
  CHECK(evaluate_on_frame(e12, {0, 0}) == f.c(0));
  CHECK_THROWS_AS(evaluate_on_frame(e12, {0, 1, 2}), DegreeMismatch);

  // alternating in adjacent arguments on random 3-forms
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Form a(f.e);
    for (int k = 0; k < 3; ++k) {
      std::uint8_t mask = 0;
      while (std::popcount(static_cast<unsigned>(mask)) != 3)
        mask = static_cast<std::uint8_t>(rng() & 0x3F);
      a.add_term(mask, f.c(coef(rng)));
    }
    std::vector<std::size_t> idx = {rng() % 6, rng() % 6, rng() % 6};
    auto swapped = idx;
    std::swap(swapped[0], swapped[1]);
    CHECK(evaluate_on_frame(a, idx) == -evaluate_on_frame(a, swapped));
  }
}

TEST_CASE("canonical printing") {
  Fixture f;
  auto r = f.p("r"), s = f.p("s");
  auto form = f.term({1, 2, 3, 4}, f.c(-8) / (r.pow(2) * s.pow(2))) +
              f.term({1, 2, 5, 6}, f.c(-8) * s.pow(2) / r.pow(2));
  CHECK(form.str() ==
        "(-8/(r**2*s**2))*e1^e2^e3^e4 + (-8*s**2/r**2)*e1^e2^e5^e6");
  CHECK(Form::zero(f.e).str() == "0");
  CHECK(f.term({1, 2}).str() == "e1^e2");
  CHECK((f.term({2, 3}) + f.gen(1)).str() == "e1 + e2^e3");
  // degree then lexicographic tuple: e1^e4 before e2^e3
  CHECK((f.term({2, 3}) + f.term({1, 4})).str() == "e1^e4 + e2^e3");
  CHECK(Form::scalar(f.e, f.c(3)).str() == "3");
}

TEST_CASE("conjugation on a complex coframe") {
  auto t = make_table({"s"});
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  auto i = Coefficient::i(t);
  auto one = Coefficient::integer(t, 1);

  // conj(w1) = ~w1
  CHECK(Form::generator(w, 0).conj() == Form::generator(w, 3));
  // conj(w1^~w2) = ~w1^w2 = -(w2^~w1)
  auto w1cw2 = wedge(Form::generator(w, 0), Form::generator(w, 4));
  auto w2cw1 = wedge(Form::generator(w, 1), Form::generator(w, 3));
  CHECK(w1cw2.conj() == -w2cw1);
  // i*w1^~w1 is fixed by conjugation (a real (1,1)-form)
  auto f11 = wedge(Form::generator(w, 0), Form::generator(w, 3)).scaled(i);
  CHECK(f11.conj() == f11);
  // involution on a random-ish mixed form
  auto mixed = wedge(Form::generator(w, 0), Form::generator(w, 1)).scaled(i + one) +
               wedge(Form::generator(w, 2), Form::generator(w, 4));
  CHECK(mixed.conj().conj() == mixed);

  // bidegree split
  CHECK(mixed.bidegree_part(2, 0) ==
        wedge(Form::generator(w, 0), Form::generator(w, 1)).scaled(i + one));
  CHECK(mixed.bidegree_part(1, 1) == wedge(Form::generator(w, 2), Form::generator(w, 4)));
  CHECK(mixed.bidegree_part(0, 2).is_zero());
  CHECK(mixed.conj().bidegree_part(0, 2) ==
        wedge(Form::generator(w, 3), Form::generator(w, 4)).scaled((i + one).conj()));
}

TEST_CASE("printing complex generators uses the tilde") {
  auto t = make_table({});
  auto w = Coframe::make_complex(t, {"w1", "w2", "w3"});
  auto f = wedge(Form::generator(w, 0), Form::generator(w, 4));
  CHECK(f.str() == "w1^~w2");
  CHECK(w->generator_index("~w2") == 4);
  CHECK(w->generator_index("w3") == 2);
}
