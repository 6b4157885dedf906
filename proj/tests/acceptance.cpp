// One PASS/FAIL line per acceptance criterion.

#include "fixtures.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>

using namespace twn;
using fx::P;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string &what)
  {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Point iterate(const Loop &l, Point c, unsigned n)
{
  for (unsigned k = 0; k < n; ++k)
    c = l.step(c);
  return c;
}

Check golden_polynomial_transform()
{
  Check c;
  Loop out = apply_tr(fx::poly_aut_loop(), fx::poly_aut_eta());
  c.require(out.guard == parse_formula("x1^3 + x2 > 0"), "guard " + out.guard.to_string());
  c.require(out.update == std::vector<Polynomial>{P("x1 + x2^2"), P("2*x2")}, "update");
  return c;
}

Check golden_matrix_transform()
{
  Check c;
  Loop out = apply_tr(fx::nilpotent_loop(), Automorphism::linear(fx::xs(3), fx::nilpotent_matrix()));
  Loop expect = fx::tnn_loop();
  c.require(out.guard == expect.guard, "guard " + out.guard.to_string());
  c.require(out.update == expect.update, "update");
  c.require(jacobian_strongly_nilpotent(fx::nilpotent_loop()).nilpotent, "Jacobian not strongly nilpotent");
  return c;
}

Check golden_closed_form()
{
  Check c;
  Loop l = fx::tnn_loop();
  auto q = closed_form(l);
  // the paper's q, evaluated independently of PolyExp
  auto expect = [](const Point &x, unsigned long n) {
    Rational N(n), x1 = x[0], x2 = x[1], x3 = x[2];
    Rational x35 = pow(x3, 5), x33 = pow(x3, 3);
    Rational q1 = make_rational(4, 3) * x35 * N * N * N + (-2 * x35 - 2 * x2 * x33) * N * N +
                  (x2 * x2 * x3 + make_rational(2, 3) * x35 + 2 * x2 * x33) * N + x1;
    Rational q2 = -2 * x3 * x3 * N + x2;
    return Point{q1, q2, x3};
  };
  std::mt19937_64 rng(2024);
  for (int s = 0; s < 20; ++s) {
    Point x = random_point(rng, 3);
    for (unsigned long n = 0; n <= 10; ++n) {
      Point e = expect(x, n);
      for (std::size_t i = 0; i < 3; ++i)
        c.require(eval_polyexp(q[i], l.vars, x, n) == e[i], "pointwise mismatch");
    }
  }
  auto ex = fx::tnn_expected_closed_form();
  for (std::size_t i = 0; i < 3; ++i)
    c.require(normalize(q[i]) == normalize(ex[i]), "coefficient mismatch in component " + std::to_string(i + 1));
  return c;
}

Check golden_reduction()
{
  Check c;
  Loop l = fx::tnn_loop();
  std::vector<NPE> qn;
  for (const auto &q : closed_form(l))
    qn.push_back(normalize(q));
  NPE p = compose_npe(P("x1 + x2^2"), l.vars, qn);
  std::vector<Polynomial> alpha{P("4/3*x3^5"), P("-2*x3^5 - 2*x2*x3^3 + 4*x3^4"),
                                P("x2^2*x3 + 2/3*x3^5 + 2*x2*x3^3 - 4*x2*x3^2"), P("x2^2 + x1")};
  auto m = marked_coeffs(p);
  c.require(m.size() == 4, "expected 4 marked coefficients");
  for (unsigned i = 0; i < 4 && i < m.size(); ++i)
    c.require(m[i].coeff == alpha[i] && m[i].base == 1 && m[i].npow == 3 - i,
              "alpha" + std::to_string(i + 1) + " = " + m[i].coeff.to_string());
  std::vector<Formula> ds;
  for (unsigned j = 0; j < 4; ++j) {
    std::vector<Formula> cs{Formula(Atom{alpha[j], Rel::Greater})};
    for (unsigned i = 0; i < j; ++i)
      cs.emplace_back(Atom{alpha[i], Rel::Equal});
    ds.push_back(Formula::conj(cs));
  }
  c.require(red_atom(p, Rel::Greater) == Formula::disj(ds), "red formula differs");

  CertificateFormula cert = build_certificate(l, fx::image_z3());
  SolverOutcome out = run_solver(emit_smtlib(cert), fx::solver());
  c.require(out.status == SolverStatus::Sat, std::string("solver: ") + status_name(out.status));

  std::map<Var, Rational> asg{{Var("x1"), 1}, {Var("x2"), 0}, {Var("x3"), 1},
                              {Var("a"), 1}, {Var("b"), 0}, {Var("c"), 0}};
  c.require(fx::image_z3().constraint.holds(asg), "(1,0,1) not in the image set");
  c.require(Formula(Atom{alpha[0], Rel::Greater}).holds(asg), "alpha1 not positive at (1,0,1)");
  return c;
}

Check end_to_end()
{
  Check c;
  RunConfig cfg = fx::run_config();
  Loop nil = fx::nilpotent_loop();
  auto r = analyze(nil, default_set(nil), cfg);
  c.require(r.verdict == Verdict::NonTerminating, std::string("nilpotent loop: ") + verdict_name(r.verdict));
  c.require(r.witness && validate_witness_prefix(nil, *r.witness), "nilpotent loop witness");

  Loop down = fx::make_loop(1, "x1 > 0", {"x1 - 1"}, Ring::Z);
  auto rd = analyze(down, default_set(down), cfg);
  c.require(rd.verdict == Verdict::Terminating, std::string("countdown: ") + verdict_name(rd.verdict));

  Loop up = fx::make_loop(1, "x1 >= 0", {"x1 + 1"}, Ring::Z);
  auto ru = analyze(up, default_set(up), cfg);
  c.require(ru.verdict == Verdict::NonTerminating, std::string("countup: ") + verdict_name(ru.verdict));
  c.require(ru.witness && *ru.witness == Point{0} && validate_witness_prefix(up, *ru.witness), "countup witness");
  return c;
}

Check closed_form_property()
{
  Check c;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> dim(1, 3), deg(1, 2);
  for (std::uint64_t s = 0; s < 200; ++s) {
    Loop l = random_tnn_loop(1000 + s, dim(rng), deg(rng), 3);
    auto mm = check_closed_form(l, closed_form(l), 5, 15, s);
    c.require(!mm, "mismatch for seed " + std::to_string(1000 + s));
  }
  return c;
}

Check red_property()
{
  Check c;
  std::mt19937_64 rng(7);
  std::vector<Var> vars = fx::xs(2);
  for (std::uint64_t s = 0; s < 200; ++s) {
    NPE p = random_npe(2000 + s, vars);
    Point pt = random_point(rng, 2, 5);
    auto asg = twn::bind(vars, pt);
    Rel rel = s % 2 ? Rel::Greater : Rel::GreaterEq;
    bool red_truth = red_atom(p, rel).holds(asg);
    auto st = find_stabilization(p, asg);
    c.require(st.has_value(), "no stabilization for seed " + std::to_string(2000 + s));
    if (!st)
      continue;
    bool eventual = rel == Rel::Greater ? st->sign > 0 : st->sign >= 0;
    c.require(red_truth == eventual, "disagreement for seed " + std::to_string(2000 + s));
  }
  return c;
}

Check tr_laws()
{
  Check c;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<unsigned> steps(0, 12);
  for (std::uint64_t s = 0; s < 100; ++s) {
    Loop l = s % 2 ? random_linear_loop(3000 + s, 3, 2) : random_twn_loop(3000 + s, 3, 2, 2);
    Automorphism e1 = random_linear_automorphism(4000 + s, l.vars), e2 = random_linear_automorphism(5000 + s, l.vars);
    c.require(apply_tr(l, Automorphism::identity(l.vars)) == l, "identity law");
    Loop t = apply_tr(l, e1);
    c.require(apply_tr(l, compose(e1, e2)) == apply_tr(t, e2), "composition law");
    Point x = random_point(rng, 3, 3);
    unsigned n = steps(rng);
    Point y = apply_inverse_point(e1, x);
    Point tn = iterate(t, x, n), ln = iterate(l, y, n);
    c.require(tn == apply_point(e1, ln), "action law, seed " + std::to_string(s));
    c.require(t.guard_holds(tn) == l.guard_holds(ln), "guard transport, seed " + std::to_string(s));
  }
  return c;
}

Check chaining_property()
{
  Check c;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> dim(1, 3), deg(1, 2);
  for (std::uint64_t s = 0; s < 100; ++s) {
    Loop l = random_twn_loop(6000 + s, dim(rng), deg(rng), 3);
    Loop ch = chain(l);
    c.require(classify(ch).tnn, "chained loop not tnn, seed " + std::to_string(6000 + s));
    Point x = random_point(rng, l.dim(), 5);
    for (unsigned n = 0; n <= 8; ++n)
      c.require(iterate(ch, x, n) == iterate(l, x, 2 * n), "chained iteration differs");
  }
  return c;
}

Check search()
{
  Check c;
  SearchOptions o;
  o.solver = fx::solver();
  o.budget_seconds = 60;
  auto t0 = std::chrono::steady_clock::now();
  auto r = search_automorphism(fx::poly_aut_loop(), 2, o);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(r.status == SearchStatus::Found && classify(*r.loop).twn(), "degree-2 search: " + r.reason);
  c.require(secs <= 60, "degree-2 search took " + std::to_string(secs) + " s");

  o.unit_diagonal = true;
  auto n = search_automorphism(fx::nilpotent_loop(), 1, o);
  c.require(n.status == SearchStatus::Found && classify(*n.loop).twn(), "unit-diagonal search: " + n.reason);
  return c;
}

} // namespace

int main()
{
  std::vector<std::pair<const char *, std::function<Check()>>> criteria{
      {"golden polynomial transformation", golden_polynomial_transform},
      {"golden matrix transformation and nilpotence", golden_matrix_transform},
      {"golden closed form", golden_closed_form},
      {"golden reduction", golden_reduction},
      {"end-to-end verdicts", end_to_end},
      {"closed-form soundness", closed_form_property},
      {"red soundness", red_property},
      {"transformation laws", tr_laws},
      {"chaining", chaining_property},
      {"automorphism search", search},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c = criteria[i].second();
    } catch (const std::exception &e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << i + 1 << ": " << (c.ok ? "PASS" : "FAIL") << " (" << criteria[i].first;
    if (!c.ok)
      std::cout << ": " << c.detail;
    std::cout << ", " << std::fixed << std::setprecision(2) << secs << " s)" << std::endl;
    failed += !c.ok;
  }
  return failed ? 1 : 0;
}
