#include "fixtures.hpp"

#include <doctest.h>

using namespace twn;
using fx::P;

TEST_SUITE("oracle") {

TEST_CASE("simulation")
{
  Loop l = fx::make_loop(1, "x1 > 0", {"x1 - 1"});
  SimTrace t = simulate(l, {2}, 3);
  CHECK(t.points == std::vector<Point>{{2}, {1}, {0}, {-1}});
  CHECK(t.guard_truth == std::vector<bool>{true, true, false, false});
}

TEST_CASE("closed-form checker catches a wrong closed form")
{
  Loop l = fx::make_loop(1, "x1 > 0", {"x1 + 2"});
  std::vector<PolyExp> wrong{PolyExp::term({}, P("1"), 1, 1) + PolyExp(P("x1"))};
  auto mm = check_closed_form(l, wrong, 3, 5);
  REQUIRE(mm);
  CHECK(mm->n == 1);
}

TEST_CASE("sign stabilization")
{
  // n^2 - 40 n: negative up to 40, then positive
  NPE p;
  p.terms.push_back({P("1"), 2, 1});
  p.terms.push_back({P("-40"), 1, 1});
  auto s = find_stabilization(p, {});
  REQUIRE(s);
  CHECK(s->sign == 1);
  CHECK(s->n0 == 64);

  // 2^n - n^5 crosses late but well under the cap
  NPE q;
  q.terms.push_back({P("1"), 0, 2});
  q.terms.push_back({P("-1"), 5, 1});
  auto t = find_stabilization(q, {});
  REQUIRE(t);
  CHECK(t->sign == 1);

  auto z = find_stabilization(NPE{}, {});
  REQUIRE(z);
  CHECK(z->sign == 0);
}

TEST_CASE("stabilization respects point values")
{
  NPE p;
  p.terms.push_back({P("x1"), 1, make_rational(1, 2)});
  p.terms.push_back({P("x2"), 0, make_rational(1, 3)});
  auto s = find_stabilization(p, {{Var("x1"), -1}, {Var("x2"), 100}});
  REQUIRE(s);
  CHECK(s->sign == -1);
}

TEST_CASE("witness prefix check")
{
  Loop up = fx::make_loop(1, "x1 >= 0", {"x1 + 1"});
  CHECK(validate_witness_prefix(up, {0}) == 0u);
  CHECK(validate_witness_prefix(up, {-10}) == 10u);
  CHECK_FALSE(validate_witness_prefix(up, {-100}));
  Loop down = fx::make_loop(1, "x1 > 0", {"x1 - 1"});
  CHECK_FALSE(validate_witness_prefix(down, {40}));
  CHECK(validate_witness_prefix(down, {1000}) == 0u);
}

TEST_CASE("random generators respect their shapes")
{
  for (std::uint64_t s = 0; s < 30; ++s) {
    CHECK(classify(random_tnn_loop(s, 3, 2, 3)).tnn);
    CHECK(classify(random_twn_loop(s, 3, 2, 3)).twn());
    Automorphism e = random_linear_automorphism(s, fx::xs(3));
    CHECK_FALSE(verify_automorphism(e));
    NPE n = random_npe(s, fx::xs(2));
    CHECK_NOTHROW(marked_coeffs(n));
  }
}

TEST_CASE("generators are deterministic")
{
  CHECK(random_tnn_loop(5, 3, 2, 3) == random_tnn_loop(5, 3, 2, 3));
  CHECK(random_npe(9, fx::xs(2)) == random_npe(9, fx::xs(2)));
}

}
