// Loops and automorphisms shared by the test suites.

#ifndef TWN_TEST_FIXTURES_HPP
#define TWN_TEST_FIXTURES_HPP

#include "twn/analyze.hpp"
#include "twn/oracle.hpp"

namespace fx {

using namespace twn;

inline Polynomial P(std::string_view s) { return parse_polynomial(s); }
inline Var V(std::string_view s) { return Var(s); }

inline std::vector<Var> xs(std::size_t d)
{
  std::vector<Var> v;
  for (std::size_t i = 1; i <= d; ++i)
    v.emplace_back("x" + std::to_string(i));
  return v;
}

inline Loop make_loop(std::size_t d, std::string_view guard, std::vector<std::string> update, Ring ring = Ring::Q)
{
  Loop l;
  l.vars = xs(d);
  l.guard = parse_formula(guard);
  for (const auto &u : update)
    l.update.push_back(P(u));
  l.ring = ring;
  return l;
}

inline Automorphism make_aut(const std::vector<Var> &vars, std::vector<std::string> fwd, std::vector<std::string> inv)
{
  Automorphism a;
  a.vars = vars;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    a.forward[vars[i]] = P(fwd[i]);
    a.inverse[vars[i]] = P(inv[i]);
  }
  return a;
}

// Needs a non-linear automorphism to become twn.
inline Loop poly_aut_loop()
{
  return make_loop(2, "x2^3 + x1 - x2^2 > 0",
                   {"((-x2^2 + x1)^2 + x2)^2 - 2*x2^2 + 2*x1", "(-x2^2 + x1)^2 + x2"});
}

inline Automorphism poly_aut_eta()
{
  return make_aut(xs(2), {"x2", "x1 - x2^2"}, {"x1^2 + x2", "x1"});
}

inline Loop nilpotent_loop()
{
  return make_loop(3, "4*x2^2 + x1 + x2 + x3 > 0",
                   {"x1 + 8*x1*x2^2 + 16*x2^3 + 16*x2^2*x3",
                    "x2 - x1^2 - 4*x1*x2 - 4*x1*x3 - 4*x2^2 - 8*x2*x3 - 4*x3^2",
                    "x3 - 4*x1*x2^2 - 8*x2^3 - 8*x2^2*x3 + x1^2 + 4*x1*x2 + 4*x1*x3 + 4*x2^2 + 8*x2*x3 + 4*x3^2"},
                   Ring::Z);
}

inline RatMatrix nilpotent_matrix() { return RatMatrix{{1, 1, 1}, {0, 2, 0}, {1, 2, 2}}; }

inline Loop tnn_loop()
{
  return make_loop(3, "x1 + x2^2 > 0", {"x1 + x2^2*x3", "x2 - 2*x3^2", "x3"}, Ring::Z);
}

// Closed form of tnn_loop.
inline std::vector<Polynomial> tnn_closed_form_coeffs()
{
  // coefficients of n^0..n^3 for x1, of n^0..n^1 for x2
  return {P("x1"), P("x2^2*x3 + 2/3*x3^5 + 2*x2*x3^3"), P("-2*x3^5 - 2*x2*x3^3"), P("4/3*x3^5")};
}

inline PolyExp n_poly(const std::vector<Polynomial> &coeffs)
{
  PolyExp q;
  for (unsigned k = 0; k < coeffs.size(); ++k)
    if (!coeffs[k].is_zero())
      q.add({NCondition{}, coeffs[k], k, 1});
  return q;
}

inline std::vector<PolyExp> tnn_expected_closed_form()
{
  return {n_poly(tnn_closed_form_coeffs()), n_poly({P("x2"), P("-2*x3^2")}), n_poly({P("x3")})};
}

// The image of Z^3 under the matrix automorphism.
inline DefinableSet image_z3()
{
  return parse_set("int: a b c\nwhere: x1 == a + b + c && x2 == 2*b && x3 == a + 2*b + 2*c\n", xs(3));
}

inline SolverConfig solver(double timeout = 60)
{
  SolverConfig c;
  c.executable = TWN_TEST_SOLVER;
  c.timeout_seconds = timeout;
  return c;
}

inline RunConfig run_config()
{
  RunConfig c;
  c.solver = solver();
  return c;
}

} // namespace fx

#endif
