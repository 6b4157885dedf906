// Negation-free propositional formulas over polynomial (in)equations.

#ifndef TWN_FORMULA_HPP
#define TWN_FORMULA_HPP

#include "twn/polynomial.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace twn {

enum class Rel { GreaterEq, Greater, Equal };

const char *rel_symbol(Rel r);

/// p ▷ 0. Loop guards only ever contain GreaterEq/Greater; Equal appears in
/// definable-set constraints and certificate formulas.
struct Atom {
  Polynomial poly;
  Rel rel = Rel::Greater;

  bool holds(const std::map<Var, Rational> &point) const;
  friend bool operator==(const Atom &, const Atom &) = default;
};

/// Immutable formula tree. Children lists of And/Or are non-empty; the
/// constant node only arises from explicit `true`/`false`.
class Formula {
public:
  enum class Kind { Leaf, And, Or, Const };

  Formula(Atom atom);
  static Formula conj(std::vector<Formula> children);
  static Formula disj(std::vector<Formula> children);
  static Formula constant(bool value);
  static Formula top() { return constant(true); }

  Kind kind() const { return kind_; }
  const Atom &atom() const { return *atom_; }
  const std::vector<Formula> &children() const { return children_; }
  bool const_value() const { return value_; }

  bool holds(const std::map<Var, Rational> &point) const;
  std::set<Var> vars() const;
  std::vector<Atom> atoms() const;
  std::size_t atom_count() const;

  // Structure-preserving leaf replacement.
  Formula map(const std::function<Formula(const Atom &)> &f) const;
  // Substitutes into every atom polynomial.
  Formula substitute(const PolyMap &bindings) const;

  // Parseable text in the guard grammar (&&, ||, >=, >, ==).
  std::string to_string(const VarOrder &order = {}) const;

  friend bool operator==(const Formula &a, const Formula &b);

private:
  Formula(Kind k) : kind_(k) {}
  Kind kind_;
  std::shared_ptr<const Atom> atom_;
  std::vector<Formula> children_;
  bool value_ = false;
};

using GuardFormula = Formula;

// Free function form of Formula::map.
Formula guard_map(const std::function<Formula(const Atom &)> &f, const Formula &phi);

Formula operator&&(const Formula &a, const Formula &b);

} // namespace twn

#endif
