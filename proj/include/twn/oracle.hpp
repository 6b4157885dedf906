// Brute-force ground truth: simulation, closed-form differential checks,
// sign stabilization and random instance generators.

#ifndef TWN_ORACLE_HPP
#define TWN_ORACLE_HPP

#include "twn/closedform.hpp"
#include "twn/transform.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace twn {

struct SimTrace {
  std::vector<Point> points;
  std::vector<bool> guard_truth;
};

SimTrace simulate(const Loop &loop, const Point &c, std::size_t steps);

struct ClosedFormMismatch {
  Point point;
  unsigned long n = 0;
  std::size_t index = 0;
  Rational expected, actual;
};

std::optional<ClosedFormMismatch> check_closed_form(const Loop &loop, const std::vector<PolyExp> &q,
                                                    std::size_t samples, unsigned long horizon,
                                                    std::uint64_t seed = 1);

struct Stabilization {
  unsigned long n0 = 0;
  int sign = 0;
};

// Least power of two N ≤ cap such that the sign of p(n) is one constant
// value on every window [M, M+16] for the powers of two N ≤ M ≤ cap.
std::optional<Stabilization> find_stabilization(const NPE &p, const std::map<Var, Rational> &point,
                                                unsigned long cap = 1ul << 16);

// Rational with numerator and denominator bounded by `height`.
Rational random_rational(std::mt19937_64 &rng, int height = 10);
Point random_point(std::mt19937_64 &rng, std::size_t d, int height = 10);

// Variables x1..xd; x_i's update depends only on x_{i+1..d}.
Loop random_tnn_loop(std::uint64_t seed, std::size_t d, unsigned max_degree, int coeff_bound);
// Same shape, self-coefficients may be negative.
Loop random_twn_loop(std::uint64_t seed, std::size_t d, unsigned max_degree, int coeff_bound);
// Arbitrary linear-update loop with a random guard.
Loop random_linear_loop(std::uint64_t seed, std::size_t d, int coeff_bound);
Automorphism random_linear_automorphism(std::uint64_t seed, const std::vector<Var> &vars, int entry_bound = 2);
// Distinct (base, npow) pairs with bases in {1/2, 1, 2, 3}.
NPE random_npe(std::uint64_t seed, const std::vector<Var> &vars, std::size_t max_terms = 4);
Formula random_guard(std::mt19937_64 &rng, const std::vector<Var> &vars, unsigned depth, int coeff_bound);

// A prefix n₀ ≤ max_prefix after which the guard holds for `window` steps;
// simulation stops when values exceed `max_bits` (then nullopt).
std::optional<std::size_t> validate_witness_prefix(const Loop &loop, const Point &w, std::size_t max_prefix = 64,
                                                   std::size_t window = 50, std::size_t max_bits = 1u << 20);

} // namespace twn

#endif
