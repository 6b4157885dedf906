// Single-path polynomial loops `while φ do x ← a` and their structural classes.

#ifndef TWN_LOOP_HPP
#define TWN_LOOP_HPP

#include "twn/formula.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twn {

enum class Ring { Z, Q, A, R };

const char *ring_name(Ring r);
std::optional<Ring> parse_ring(std::string_view s);

struct Loop {
  std::vector<Var> vars;
  GuardFormula guard = Formula::top();
  std::vector<Polynomial> update; // update[i] is the new value of vars[i]
  Ring ring = Ring::Q;

  std::size_t dim() const { return vars.size(); }
  PolyMap update_map() const;
  std::size_t index_of(Var v) const;

  Point step(const Point &c) const;
  bool guard_holds(const Point &c) const;

  // Loop-file text; parse_loop(to_string()) reproduces the loop.
  std::string to_string() const;

  friend bool operator==(const Loop &, const Loop &) = default;
};

Loop parse_loop(std::string_view text);
Loop load_loop(const std::string &path);

// Guard-grammar parser. With keep_equalities, `==` yields Equal atoms instead
// of the pair of non-strict inequalities used for loop guards.
Formula parse_formula(std::string_view text, bool keep_equalities = false);

struct Classification {
  // (x_i, x_j) with x_i ≻ x_j: transitive closure of "x_j occurs in a_i", i ≠ j.
  std::set<std::pair<Var, Var>> dep_relation;
  bool triangular = false;
  bool weakly_nonlinear = false;
  bool tnn = false;
  // Blocks J_1..J_k: block i's update is linear in its own variables plus a
  // polynomial in the variables of blocks i+1..k.
  std::optional<std::vector<std::vector<Var>>> solvable_partition;
  // When triangular: all variables, each listed after everything it depends on.
  std::vector<Var> topo_order;

  bool twn() const { return triangular && weakly_nonlinear; }
  std::string to_string() const;
};

Classification classify(const Loop &loop);

// Coefficient of x in a (the rational c with a = c·x + terms without x^1 alone).
Rational self_coefficient(const Polynomial &a, Var x);

// Every variable in guard and update is declared, update is total.
void validate_loop(const Loop &loop);

} // namespace twn

#endif
