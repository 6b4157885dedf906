#include "fixtures.hpp"

#include <doctest.h>

using namespace twn;
using fx::P;

namespace {

Point iterate(const Loop &l, Point c, unsigned n)
{
  for (unsigned k = 0; k < n; ++k)
    c = l.step(c);
  return c;
}

Loop random_poly_loop(std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Loop l = random_linear_loop(seed, 3, 2);
  std::uniform_int_distribution<int> pick(0, 2);
  l.update[pick(rng)] += P("x1*x2");
  return l;
}

} // namespace

TEST_SUITE("transform") {

TEST_CASE("polynomial automorphism makes the loop twn")
{
  Loop out = apply_tr(fx::poly_aut_loop(), fx::poly_aut_eta());
  CHECK(out.guard == parse_formula("x1^3 + x2 > 0"));
  CHECK(out.update == std::vector<Polynomial>{P("x1 + x2^2"), P("2*x2")});
  CHECK(classify(out).twn());
}

TEST_CASE("matrix automorphism on the nilpotent loop")
{
  Automorphism eta = Automorphism::linear(fx::xs(3), fx::nilpotent_matrix());
  CHECK(eta.inverse.at(Var("x1")) == P("2*x1 - x3"));
  CHECK(eta.inverse.at(Var("x2")) == P("1/2*x2"));
  CHECK(eta.inverse.at(Var("x3")) == P("-x1 - 1/2*x2 + x3"));
  Loop out = apply_tr(fx::nilpotent_loop(), eta);
  Loop expect = fx::tnn_loop();
  CHECK(out.guard == expect.guard);
  CHECK(out.update == expect.update);
}

TEST_CASE("apply_tr rejects non-inverse pairs")
{
  Automorphism bad = fx::make_aut(fx::xs(2), {"x2", "x1"}, {"x2", "x1 + 1"});
  CHECK(verify_automorphism(bad));
  CHECK_THROWS_AS(apply_tr(fx::poly_aut_loop(), bad), PreconditionError);
  CHECK_FALSE(verify_automorphism(fx::poly_aut_eta()));
}

TEST_CASE("identity and composition laws")
{
  for (std::uint64_t s = 0; s < 30; ++s) {
    Loop l = random_poly_loop(s);
    Automorphism e1 = random_linear_automorphism(100 + s, l.vars), e2 = random_linear_automorphism(200 + s, l.vars);
    CHECK(apply_tr(l, Automorphism::identity(l.vars)) == l);
    CHECK(apply_tr(l, compose(e1, e2)) == apply_tr(apply_tr(l, e1), e2));
  }
}

TEST_CASE("transformed loops simulate through eta")
{
  std::mt19937_64 rng(3);
  for (std::uint64_t s = 0; s < 30; ++s) {
    Loop l = random_poly_loop(s);
    Automorphism eta = random_linear_automorphism(300 + s, l.vars);
    Loop t = apply_tr(l, eta);
    Point c = random_point(rng, 3, 3);
    Point d = apply_inverse_point(eta, c);
    for (unsigned n = 0; n <= 4; ++n) {
      // a'^n(c) = η(a^n(η⁻¹(c)))
      CHECK(iterate(t, c, n) == apply_point(eta, iterate(l, d, n)));
      CHECK(t.guard_holds(iterate(t, c, n)) == l.guard_holds(iterate(l, d, n)));
    }
  }
}

TEST_CASE("strong nilpotence of the Jacobian")
{
  auto r = jacobian_strongly_nilpotent(fx::nilpotent_loop());
  CHECK(r.nilpotent);
  CHECK(jacobian_strongly_nilpotent(fx::make_loop(2, "x1 > 0", {"x1 + x2^2", "x2"})).nilpotent);
  CHECK_FALSE(jacobian_strongly_nilpotent(fx::make_loop(1, "x1 > 0", {"2*x1"})).nilpotent);
  CHECK_FALSE(jacobian_strongly_nilpotent(fx::make_loop(2, "x1 > 0", {"x2", "x1"})).nilpotent);
  CHECK_FALSE(jacobian_strongly_nilpotent(fx::poly_aut_loop()).nilpotent);
}

TEST_CASE("jacobian entries")
{
  PolyMatrix j = jacobian(fx::make_loop(2, "x1 > 0", {"x1*x2", "x2^3"}));
  // derivatives of a - x
  CHECK(j[0][0] == P("x2 - 1"));
  CHECK(j[0][1] == P("x1"));
  CHECK(j[1][0].is_zero());
  CHECK(j[1][1] == P("3*x2^2 - 1"));
}

TEST_CASE("image of Z^d under the matrix automorphism")
{
  Loop l = fx::nilpotent_loop();
  Automorphism eta = Automorphism::linear(l.vars, fx::nilpotent_matrix());
  DefinableSet img = image_of_set(default_set(l), eta);
  DefinableSet expect = fx::image_z3();
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c) {
        Point x = apply_point(eta, {a, b, c});
        std::map<Var, Rational> aux;
        for (const auto &[n, v] : std::vector<std::pair<const char *, int>>{{"a", a}, {"b", b}, {"c", c}})
          aux[Var(n)] = v;
        CHECK(expect.holds(l.vars, x, aux));
        std::map<Var, Rational> k{{Var("k_x1"), a}, {Var("k_x2"), b}, {Var("k_x3"), c}};
        CHECK(img.holds(l.vars, x, k));
      }
  // (0, 1, 0) has pre-image (0, 1/2, -1/2)
  CHECK_FALSE(img.holds(l.vars, {0, 1, 0}, {{Var("k_x1"), 0}, {Var("k_x2"), 0}, {Var("k_x3"), 0}}));
}

TEST_CASE("homogenization")
{
  Loop l = fx::make_loop(1, "x1 > 0", {"x1 - 1"});
  CHECK(is_affine(l));
  Loop h = homogenize(l);
  CHECK(h.dim() == 2);
  CHECK(h.step({3, 1}) == Point{2, 1});
  CHECK_FALSE(is_affine(fx::poly_aut_loop()));
}

TEST_CASE("solvable loops are triangularized")
{
  int done = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    Loop l = random_linear_loop(s, 3, 2);
    for (auto &u : l.update)
      u -= Polynomial(u.constant_term());
    Classification c = classify(l);
    REQUIRE(c.solvable_partition);
    auto r = triangularize_solvable(l, c);
    if (auto *t = std::get_if<Triangularized>(&r)) {
      CHECK(classify(t->loop).twn());
      CHECK(apply_tr(l, t->eta) == t->loop);
      ++done;
    } else {
      CHECK(!std::get<TransformUnsupported>(r).reason.empty());
    }
  }
  CHECK(done > 10);
}

TEST_CASE("rotation is unsupported")
{
  Loop l = fx::make_loop(2, "x1 > 0", {"-x2", "x1"});
  auto r = triangularize_solvable(l, classify(l));
  REQUIRE(std::holds_alternative<TransformUnsupported>(r));
  CHECK_FALSE(std::get<TransformUnsupported>(r).real_spectrum);
}

TEST_CASE("set files")
{
  DefinableSet s = fx::image_z3();
  CHECK(s.int_vars.size() == 3);
  CHECK(s.holds(fx::xs(3), {3, 2, 5}, {{Var("a"), 1}, {Var("b"), 1}, {Var("c"), 1}}));
  CHECK_FALSE(s.holds(fx::xs(3), {3, 2, 4}, {{Var("a"), 1}, {Var("b"), 1}, {Var("c"), 1}}));
  CHECK(parse_set(s.to_string(fx::xs(3)), fx::xs(3)).to_string() == s.to_string());
}

TEST_CASE("search finds a polynomial automorphism" * doctest::timeout(120))
{
  SearchOptions o;
  o.solver = fx::solver();
  auto r = search_automorphism(fx::poly_aut_loop(), 2, o);
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(classify(*r.loop).twn());
  CHECK_FALSE(verify_automorphism(*r.eta));
  CHECK(apply_tr(fx::poly_aut_loop(), *r.eta) == *r.loop);
}

TEST_CASE("unit-diagonal linear search on the nilpotent loop" * doctest::timeout(120))
{
  SearchOptions o;
  o.solver = fx::solver();
  o.unit_diagonal = true;
  auto r = search_automorphism(fx::nilpotent_loop(), 1, o);
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(r.eta->is_linear());
  CHECK(classify(*r.loop).twn());
}

TEST_CASE("linear search recovers hidden triangular structure" * doctest::timeout(300))
{
  for (std::uint64_t s = 0; s < 5; ++s) {
    Loop base = random_twn_loop(s, 2, 2, 2);
    Loop hidden = apply_tr(base, random_linear_automorphism(500 + s, base.vars));
    SearchOptions o;
    o.solver = fx::solver();
    auto r = search_automorphism(hidden, 1, o);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(classify(*r.loop).twn());
  }
}

TEST_CASE("no linear automorphism for a squaring swap" * doctest::timeout(120))
{
  Loop l = fx::make_loop(2, "x1 > 0", {"x2^2", "x1^2"});
  SearchOptions o;
  o.solver = fx::solver();
  auto r = search_automorphism(l, 1, o);
  CHECK(r.status == SearchStatus::NotFound);
  // independent cross-check over small integer matrices
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d) {
          RatMatrix m{{a, b}, {c, d}};
          if (!m.inverse())
            continue;
          CHECK_FALSE(classify(apply_tr(l, Automorphism::linear(l.vars, m))).twn());
        }
}

TEST_CASE("search query shape")
{
  auto q = automorphism_query(fx::poly_aut_loop(), fx::xs(2), 1, 1, 2, false);
  CHECK(q.int_consts.empty());
  CHECK(q.real_consts.size() > 4);
  CHECK(emit_smtlib(q).find("(check-sat)") != std::string::npos);
}

}
