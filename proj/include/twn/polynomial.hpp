// Sparse multivariate polynomials over the rationals.

#ifndef TWN_POLYNOMIAL_HPP
#define TWN_POLYNOMIAL_HPP

#include "twn/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twn {

/// A variable identifier. Names are interned process-wide so that
/// monomials compare by small integer ids; the table is append-only and
/// guarded internally, so Var values are safe to create from any thread.
class Var {
public:
  explicit Var(std::string_view name);

  const std::string &name() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Var a, Var b) { return a.id_ == b.id_; }
  friend auto operator<=>(Var a, Var b) { return a.id_ <=> b.id_; }

private:
  std::uint32_t id_;
};

/// Power product. Exponents are positive; the empty product is 1.
class Monomial {
public:
  using Factor = std::pair<Var, unsigned>;

  Monomial() = default;
  explicit Monomial(Var v, unsigned exp = 1);
  static Monomial from_factors(std::vector<Factor> factors);

  const std::vector<Factor> &factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  unsigned degree() const;
  unsigned degree_in(Var v) const;
  bool contains(Var v) const { return degree_in(v) > 0; }

  Monomial operator*(const Monomial &other) const;
  // Drops the factor of v entirely.
  Monomial without(Var v) const;
  // Keeps only factors whose variables are in `keep`.
  Monomial restricted_to(const std::set<Var> &keep) const;

  friend bool operator==(const Monomial &, const Monomial &) = default;
  friend auto operator<=>(const Monomial &a, const Monomial &b)
  {
    return a.factors_ <=> b.factors_;
  }

private:
  std::vector<Factor> factors_; // sorted by variable id, exponents > 0
};

/// Variable order used for canonical printing (graded lexicographic).
/// Variables absent from the order sort after all listed ones, by name.
using VarOrder = std::vector<Var>;

class Polynomial {
public:
  using TermMap = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational &c);
  Polynomial(long c) : Polynomial(Rational(c)) {}
  Polynomial(Var v);
  Polynomial(const Monomial &m, const Rational &c = 1);

  static Polynomial variable(std::string_view name) { return Polynomial(Var(name)); }

  const TermMap &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Constant term (coefficient of the empty monomial).
  Rational constant_term() const;
  Rational coefficient(const Monomial &m) const;
  unsigned total_degree() const;
  unsigned degree_in(Var v) const;
  std::set<Var> vars() const;
  bool is_linear() const { return total_degree() <= 1; }

  Polynomial operator-() const;
  Polynomial &operator+=(const Polynomial &o);
  Polynomial &operator-=(const Polynomial &o);
  Polynomial &operator*=(const Polynomial &o);
  friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
  friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
  Polynomial pow(unsigned exp) const;
  Polynomial scaled(const Rational &c) const;

  friend bool operator==(const Polynomial &, const Polynomial &) = default;

  // Simultaneous substitution. Unbound variables map to themselves.
  Polynomial substitute(const std::map<Var, Polynomial> &bindings) const;
  Rational evaluate(const std::map<Var, Rational> &point) const;
  Polynomial derivative(Var v) const;

  // Groups terms by their projection onto `main`; the values are the
  // cofactors in the remaining variables.
  std::map<Monomial, Polynomial> coefficients_wrt(const std::set<Var> &main) const;

  std::string to_string(const VarOrder &order = {}) const;

private:
  void add_term(const Monomial &m, const Rational &c);
  TermMap terms_; // no zero coefficients
};

// Parses the polynomial sub-grammar of loop files. Every identifier becomes a
// variable; throws ParseError on malformed input.
Polynomial parse_polynomial(std::string_view text);

std::vector<Monomial> monomials_up_to(const std::vector<Var> &vars, unsigned degree,
                                      unsigned min_degree = 0);

// Graded-lex comparison for printing: true if a precedes b (higher first).
bool grlex_before(const Monomial &a, const Monomial &b, const VarOrder &order);

using PolyMap = std::map<Var, Polynomial>;
using Point = std::vector<Rational>;

std::map<Var, Rational> bind(const std::vector<Var> &vars, const Point &values);

} // namespace twn

#endif
