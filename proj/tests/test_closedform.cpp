#include "fixtures.hpp"

#include <doctest.h>

using namespace twn;
using fx::P;

TEST_SUITE("closedform") {

TEST_CASE("n-conditions")
{
  NCondition c = NCondition::neq(0);
  CHECK_FALSE(c.holds(0));
  CHECK(c.holds(3));
  CHECK(NCondition::eq(2).holds(2));
  CHECK_FALSE(conjoin(NCondition::eq(1), NCondition::neq(1)));
  CHECK(conjoin(NCondition::eq(1), NCondition::neq(0)) == NCondition::eq(1));
  CHECK(conjoin(NCondition::neq(0), NCondition::neq(2))->disequalities.size() == 2);
}

TEST_CASE("poly-exponential arithmetic agrees with evaluation")
{
  std::vector<Var> v = fx::xs(2);
  PolyExp a = PolyExp::term({}, P("x1"), 1, 2) + PolyExp::term(NCondition::neq(0), P("x2 - 1"), 0, make_rational(1, 3));
  PolyExp b = PolyExp::term({}, P("x1*x2"), 2, 1) + PolyExp::term(NCondition::eq(0), P("5"), 0, 1);
  Point c{make_rational(2, 3), -4};
  for (unsigned long n = 0; n < 8; ++n) {
    Rational ea = eval_polyexp(a, v, c, n), eb = eval_polyexp(b, v, c, n);
    CHECK(eval_polyexp(a + b, v, c, n) == ea + eb);
    CHECK(eval_polyexp(a * b, v, c, n) == ea * eb);
    CHECK(eval_polyexp(a.pow(3), v, c, n) == ea * ea * ea);
  }
}

TEST_CASE("geometric sums against direct summation")
{
  const Rational cs[] = {0, 1, 2, make_rational(1, 2), 3};
  const Rational bs[] = {1, 2, make_rational(1, 3), 3};
  for (const auto &c : cs)
    for (const auto &b : bs)
      for (unsigned a = 0; a <= 3; ++a) {
        PolyExp g = geometric_poly_sum(c, b, a);
        for (unsigned long n = 0; n <= 10; ++n) {
          Rational s = 0;
          for (unsigned long k = 0; k < n; ++k)
            s += pow(c, n - 1 - k) * pow(Rational(k), a) * pow(b, k);
          CHECK(g.at(n) == Polynomial(s));
        }
      }
}

TEST_CASE("closed form of the tnn example")
{
  Loop l = fx::tnn_loop();
  auto q = closed_form(l);
  auto expect = fx::tnn_expected_closed_form();
  REQUIRE(q.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(normalize(q[i]) == normalize(expect[i]));
  CHECK_FALSE(check_closed_form(l, q, 20, 10));
}

TEST_CASE("closed forms with zero self-coefficients")
{
  Loop l = fx::make_loop(3, "x1 > 0", {"x2^2 + x3", "3*x3", "x3"});
  auto q = closed_form(l);
  CHECK_FALSE(check_closed_form(l, q, 10, 12));
  // x1 is overwritten in the first step: its closed form needs an n = 0 case
  bool conditional = false;
  for (const auto &t : q[0].terms())
    conditional |= !t.cond.empty();
  CHECK(conditional);
}

TEST_CASE("closed forms with negative-free exponentials")
{
  Loop l = fx::make_loop(3, "x1 > 0", {"2*x1 + x2*x3 + 1", "1/2*x2 + x3^2", "3*x3"});
  CHECK_FALSE(check_closed_form(l, closed_form(l), 10, 12));
}

TEST_CASE("closed_form requires tnn")
{
  CHECK_THROWS_AS(closed_form(fx::make_loop(1, "x1 > 0", {"-x1"})), PreconditionError);
  CHECK_THROWS_AS(closed_form(fx::poly_aut_loop()), PreconditionError);
}

TEST_CASE("normalization drops equality-conditioned terms")
{
  PolyExp q = PolyExp::term(NCondition::eq(0), P("x1"), 0, 1) + PolyExp::term(NCondition::neq(0), P("x2"), 1, 2) +
              PolyExp::term({}, P("x1"), 1, 2);
  NPE n = normalize(q);
  REQUIRE(n.terms.size() == 1);
  CHECK(n.terms[0].coeff == P("x1 + x2"));
  CHECK(n.terms[0].base == 2);
}

TEST_CASE("normalized closed forms agree for large n")
{
  Loop l = fx::make_loop(2, "x1 > 0", {"x2^2", "2*x2 + 1"});
  auto q = closed_form(l);
  NPE n0 = normalize(q[0]);
  Point c{make_rational(1, 2), 3};
  Point x = c;
  for (unsigned long n = 0; n < 10; ++n) {
    if (n >= 2)
      CHECK(n0.eval(twn::bind(l.vars, c), n) == x[0]);
    x = l.step(x);
  }
}

TEST_CASE("chaining makes twn loops tnn")
{
  Loop l = fx::make_loop(2, "x1 > 0", {"-x1 + x2", "-2*x2"});
  Loop c = chain(l);
  CHECK(classify(c).tnn);
  CHECK(c.step({3, 5}) == l.step(l.step({3, 5})));
  CHECK(c.guard.atom_count() == 2);
}

TEST_CASE("closed forms of random tnn loops")
{
  for (std::uint64_t s = 0; s < 40; ++s) {
    Loop l = random_tnn_loop(s, 3, 2, 3);
    auto mm = check_closed_form(l, closed_form(l), 3, 10, s);
    CHECK_MESSAGE(!mm, "seed ", s);
  }
}

}
