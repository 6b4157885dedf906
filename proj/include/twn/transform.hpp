// Polynomial automorphisms and the loop transformation Tr.

#ifndef TWN_TRANSFORM_HPP
#define TWN_TRANSFORM_HPP

#include "twn/loop.hpp"
#include "twn/matrix.hpp"
#include "twn/smt.hpp"

#include <optional>
#include <variant>

namespace twn {

/// η given by the images of the variables, together with η⁻¹.
struct Automorphism {
  std::vector<Var> vars;
  PolyMap forward;
  PolyMap inverse;

  static Automorphism identity(const std::vector<Var> &vars);
  // x ↦ M·x, inverse from M⁻¹. Throws if M is singular.
  static Automorphism linear(const std::vector<Var> &vars, const RatMatrix &m);

  unsigned degree() const;
  bool is_linear() const;
  Automorphism inverted() const { return {vars, inverse, forward}; }
  std::string to_string() const;
};

// Composition η₁∘η₂ of endomorphisms, so that
// apply_tr(l, compose(η₁, η₂)) == apply_tr(apply_tr(l, η₁), η₂).
Automorphism compose(const Automorphism &eta1, const Automorphism &eta2);

// nullopt if both compositions are the identity, else the first variable
// where one of them fails.
std::optional<Var> verify_automorphism(const Automorphism &eta);

Loop apply_tr(const Loop &loop, const Automorphism &eta);

Point apply_point(const Automorphism &eta, const Point &c);
Point apply_inverse_point(const Automorphism &eta, const Point &c);

/// Existentially definable set {x | ∃ ints, reals. constraint}.
struct DefinableSet {
  std::vector<Var> int_vars;
  std::vector<Var> real_vars;
  Formula constraint = Formula::top();

  // Zd, Qd and the full space.
  static DefinableSet integers(const std::vector<Var> &vars);
  static DefinableSet rationals(const std::vector<Var> &vars);
  static DefinableSet full();

  // Checks membership of x given values for the auxiliaries.
  bool holds(const std::vector<Var> &vars, const Point &x, const std::map<Var, Rational> &aux) const;
  std::string to_string(const VarOrder &order = {}) const;
};

DefinableSet default_set(const Loop &loop);

// Set files: `int: a b`, `real: y`, `where: <formula>` (equalities allowed).
DefinableSet parse_set(std::string_view text, const std::vector<Var> &loop_vars);
DefinableSet load_set(const std::string &path, const std::vector<Var> &loop_vars);
// "Zd", "Qd", "full" or a set file path.
DefinableSet resolve_set(const std::string &spec, const Loop &loop);

DefinableSet image_of_set(const DefinableSet &f, const Automorphism &eta);

using PolyMatrix = std::vector<std::vector<Polynomial>>;

// Jacobian of (a_i − x_i).
PolyMatrix jacobian(const Loop &loop);

struct NilpotenceResult {
  bool nilpotent = false;
  PolyMatrix product; // ∏ J[x/y⁽ⁱ⁾]
};

NilpotenceResult jacobian_strongly_nilpotent(const Loop &loop);

struct TransformUnsupported {
  std::vector<Var> block;
  UniPoly residual;
  bool real_spectrum = false;
  std::string reason;
};

struct Triangularized {
  Loop loop;
  Automorphism eta;
};

std::variant<Triangularized, TransformUnsupported> triangularize_solvable(const Loop &loop,
                                                                           const Classification &cls);

struct SearchOptions {
  SolverConfig solver;
  double budget_seconds = 60;   // over all queries of one search
  std::size_t max_permutations = 5040;
  bool unit_diagonal = false;   // a'_i = x_i + p_i
};

enum class SearchStatus { Found, NotFound, Unknown };

struct SearchResult {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<Automorphism> eta;
  std::optional<Loop> loop;
  std::vector<Var> order; // triangularity order of the result, innermost last
  std::string reason;
  std::size_t queries = 0;
};

// One SMT query: η (degree ≤ δ, no constant part), η⁻¹ (degree ≤ inverse_degree)
// and a' in triangular weakly non-linear shape along `order`, with a' of
// degree ≤ update_degree.
CertificateFormula automorphism_query(const Loop &loop, const std::vector<Var> &order, unsigned delta,
                                      unsigned inverse_degree, unsigned update_degree, bool unit_diagonal);

SearchResult search_automorphism(const Loop &loop, unsigned delta, const SearchOptions &opts);

// (φ ∧ x_b = 1, (A·x + b·x_b, x_b)) for affine updates.
Loop homogenize(const Loop &loop);
bool is_affine(const Loop &loop);

// A name not used by any of `taken`, based on `base`.
Var fresh_var(const std::string &base, const std::set<std::string> &taken);

} // namespace twn

#endif
