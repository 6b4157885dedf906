#include "fixtures.hpp"

#include <doctest.h>

using namespace twn;
using fx::P;

namespace {

std::vector<NPE> tnn_q_norm()
{
  std::vector<NPE> out;
  for (const auto &q : closed_form(fx::tnn_loop()))
    out.push_back(normalize(q));
  return out;
}

std::vector<Polynomial> alphas()
{
  return {P("4/3*x3^5"), P("-2*x3^5 - 2*x2*x3^3 + 4*x3^4"), P("x2^2*x3 + 2/3*x3^5 + 2*x2*x3^3 - 4*x2*x3^2"),
          P("x2^2 + x1")};
}

} // namespace

TEST_SUITE("reduction") {

TEST_CASE("marked coefficients of the substituted guard")
{
  NPE p = compose_npe(P("x1 + x2^2"), fx::xs(3), tnn_q_norm());
  auto m = marked_coeffs(p);
  auto a = alphas();
  REQUIRE(m.size() == 4);
  for (unsigned i = 0; i < 4; ++i) {
    CHECK(m[i].coeff == a[i]);
    CHECK(m[i].base == 1);
    CHECK(m[i].npow == 3 - i);
  }
}

TEST_CASE("red of a strict atom has one disjunct per coefficient")
{
  NPE p = compose_npe(P("x1 + x2^2"), fx::xs(3), tnn_q_norm());
  Formula r = red_atom(p, Rel::Greater);
  auto a = alphas();
  std::vector<Formula> ds;
  for (unsigned j = 0; j < 4; ++j) {
    std::vector<Formula> cs{Formula(Atom{a[j], Rel::Greater})};
    for (unsigned i = 0; i < j; ++i)
      cs.emplace_back(Atom{a[i], Rel::Equal});
    ds.push_back(Formula::conj(cs));
  }
  CHECK(r == Formula::disj(ds));
}

TEST_CASE("red of a non-strict atom adds the all-zero case")
{
  NPE p;
  p.terms.push_back({P("x1"), 1, 1});
  p.terms.push_back({P("x2"), 0, 1});
  Formula r = red_atom(p, Rel::GreaterEq);
  CHECK(r.kind() == Formula::Kind::Or);
  CHECK(r.children().size() == 3);
  CHECK(r.holds({{Var("x1"), 0}, {Var("x2"), 0}}));
  CHECK_FALSE(red_atom(p, Rel::Greater).holds({{Var("x1"), 0}, {Var("x2"), 0}}));
  CHECK_THROWS(red_atom(p, Rel::Equal));
}

TEST_CASE("zero NPE")
{
  auto m = marked_coeffs(NPE{});
  REQUIRE(m.size() == 1);
  CHECK(m[0].coeff.is_zero());
  CHECK_FALSE(red_atom(NPE{}, Rel::Greater).holds({}));
  CHECK(red_atom(NPE{}, Rel::GreaterEq).holds({}));
}

TEST_CASE("dominance order")
{
  CHECK(dominates({P("1"), 2, 0}, {P("1"), 1, 5}));
  CHECK(dominates({P("1"), 1, 2}, {P("1"), 1, 1}));
  CHECK_FALSE(dominates({P("1"), make_rational(1, 2), 9}, {P("1"), 1, 0}));
}

TEST_CASE("paper witness satisfies the certificate")
{
  CertificateFormula cert = build_certificate(fx::tnn_loop(), fx::image_z3());
  std::map<Var, Rational> asg{{Var("x1"), 1}, {Var("x2"), 0}, {Var("x3"), 1},
                              {Var("a"), 1}, {Var("b"), 0}, {Var("c"), 0}};
  CHECK(cert.holds(asg));
  CHECK(Formula(Atom{alphas()[0], Rel::Greater}).holds(asg));
}

TEST_CASE("witness extraction walks the trace backwards")
{
  PipelineTrace t;
  Automorphism eta = Automorphism::linear(fx::xs(3), fx::nilpotent_matrix());
  t.steps.push_back({TraceStep::Kind::Transform, "solvable", eta, fx::tnn_loop()});
  t.steps.push_back({TraceStep::Kind::Chain, "chain", std::nullopt, chain(fx::tnn_loop())});
  Point w = extract_witness({1, 0, 1}, t);
  CHECK(w == Point{1, 0, 0});
  CHECK(validate_witness_prefix(fx::nilpotent_loop(), w));
  PipelineTrace h;
  h.steps.push_back({TraceStep::Kind::Homogenize, "affine", std::nullopt, fx::tnn_loop()});
  CHECK(extract_witness({4, 1}, h) == Point{4});
  CHECK_THROWS(extract_witness({4, 2}, h));
}

TEST_CASE("end-to-end verdicts" * doctest::timeout(300))
{
  RunConfig cfg = fx::run_config();
  Loop down = fx::make_loop(1, "x1 > 0", {"x1 - 1"}, Ring::Z);
  CHECK(analyze(down, default_set(down), cfg).verdict == Verdict::Terminating);

  Loop up = fx::make_loop(1, "x1 >= 0", {"x1 + 1"}, Ring::Z);
  auto r = analyze(up, default_set(up), cfg);
  CHECK(r.verdict == Verdict::NonTerminating);
  REQUIRE(r.witness);
  CHECK(*r.witness == Point{0});

  Loop nil = fx::nilpotent_loop();
  auto rn = analyze(nil, default_set(nil), cfg);
  CHECK(rn.verdict == Verdict::NonTerminating);
  REQUIRE(rn.witness);
  CHECK(validate_witness_prefix(nil, *rn.witness));
  for (const auto &v : *rn.witness)
    CHECK(is_integer(v));
}

TEST_CASE("affine loops go through homogenization" * doctest::timeout(120))
{
  RunConfig cfg = fx::run_config();
  // x1 ← x2 + 1, x2 ← x1: solvable, not triangular
  Loop l = fx::make_loop(2, "x1 + x2 > 0", {"x2 + 1", "x1"}, Ring::Q);
  auto r = analyze(l, default_set(l), cfg);
  CHECK(r.verdict == Verdict::NonTerminating);
  REQUIRE(r.witness);
  CHECK(r.trace.steps.front().kind == TraceStep::Kind::Homogenize);

  Loop t = fx::make_loop(2, "x1 - x2 > 0", {"x2 - 1", "x1 + 1"}, Ring::Q);
  CHECK(analyze(t, default_set(t), cfg).verdict == Verdict::Terminating);
}

TEST_CASE("irrational spectra give Unknown with a reason")
{
  Loop l = fx::make_loop(2, "x1 > 0", {"-x2", "x1"});
  auto r = analyze(l, default_set(l), fx::run_config());
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.reason.find("unsupported") != std::string::npos);
}

}
