// Poly-exponential expressions ∑ ⟦ψ⟧·α·nᵃ·bⁿ and closed forms of tnn updates.

#ifndef TWN_CLOSEDFORM_HPP
#define TWN_CLOSEDFORM_HPP

#include "twn/loop.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace twn {

/// Conjunction of n = c and n ≠ c. Kept canonical: with an equality present
/// the disequalities are dropped (they are implied or contradictory).
struct NCondition {
  std::optional<unsigned long> equality;
  std::set<unsigned long> disequalities;

  static NCondition eq(unsigned long c) { return {c, {}}; }
  static NCondition neq(unsigned long c) { return {std::nullopt, {c}}; }

  bool empty() const { return !equality && disequalities.empty(); }
  bool holds(unsigned long n) const;
  // Largest constant mentioned, if any.
  std::optional<unsigned long> max_constant() const;
  std::string to_string() const;

  friend bool operator==(const NCondition &, const NCondition &) = default;
  friend auto operator<=>(const NCondition &, const NCondition &) = default;
};

// Conjunction; nullopt if unsatisfiable.
std::optional<NCondition> conjoin(const NCondition &a, const NCondition &b);

struct PETerm {
  NCondition cond;
  Polynomial coeff;
  unsigned npow = 0;
  Rational base = 1;
};

/// Terms are kept merged on (cond, npow, base) with non-zero coefficients.
/// Terms under an equality n = c are folded to constants (npow 0, base 1).
class PolyExp {
public:
  PolyExp() = default;
  PolyExp(const Polynomial &p); // constant in n

  static PolyExp term(const NCondition &cond, const Polynomial &coeff, unsigned npow, const Rational &base);

  const std::vector<PETerm> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const PETerm &t);
  PolyExp &operator+=(const PolyExp &o);
  friend PolyExp operator+(PolyExp a, const PolyExp &b) { return a += b; }
  friend PolyExp operator*(const PolyExp &a, const PolyExp &b);
  PolyExp scaled(const Polynomial &c) const;
  PolyExp pow(unsigned e) const;

  // Value at a concrete n, as a polynomial in the loop variables.
  Polynomial at(unsigned long n) const;
  std::optional<unsigned long> max_condition_constant() const;
  std::string to_string(const VarOrder &order = {}) const;

  friend bool operator==(const PolyExp &a, const PolyExp &b);

private:
  std::vector<PETerm> terms_;
};

Rational eval_polyexp(const PolyExp &p, const std::vector<Var> &vars, const Point &c, unsigned long n);

struct NPETerm {
  Polynomial coeff;
  unsigned npow = 0;
  Rational base = 1;
  friend bool operator==(const NPETerm &, const NPETerm &) = default;
};

/// Condition-free, (base, npow) pairwise distinct, sorted by (base, npow)
/// descending, no zero coefficients.
struct NPE {
  std::vector<NPETerm> terms;

  PolyExp to_polyexp() const;
  // The numeric NPE obtained by fixing the loop variables.
  NPE at_point(const std::map<Var, Rational> &point) const;
  Rational eval(const std::map<Var, Rational> &point, unsigned long n) const;
  std::string to_string(const VarOrder &order = {}) const;
  friend bool operator==(const NPE &, const NPE &) = default;
};

NPE normalize(const PolyExp &q);

// Substitutes x_i ↦ q_i into p (variables not in `vars` stay as they are).
PolyExp substitute_polyexp(const Polynomial &p, const std::vector<Var> &vars, const std::vector<PolyExp> &q);

// (φ ∧ φ(a), a(a))
Loop chain(const Loop &loop);

// ∑_{k<n} c^{n−1−k}·kᵃ·bᵏ as a PolyExp in n, valid for all n ≥ 0.
PolyExp geometric_poly_sum(const Rational &c, const Rational &b, unsigned a);

// q with q_i = (aⁿ)_i for all n ≥ 0. Requires a tnn loop.
std::vector<PolyExp> closed_form(const Loop &loop);

} // namespace twn

#endif
