// SMT-LIB 2 emission, solver subprocess driver and model parsing.

#ifndef TWN_SMT_HPP
#define TWN_SMT_HPP

#include "twn/error.hpp"
#include "twn/loop.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twn {

/// Existentially closed, quantifier-free formula. All constants are declared
/// in the order real_consts, int_consts, real_aux.
struct CertificateFormula {
  std::vector<Var> real_consts;
  std::vector<Var> int_consts;
  std::vector<Var> real_aux;
  Formula body = Formula::top();

  // Ground evaluation under a complete rational assignment.
  bool holds(const std::map<Var, Rational> &assignment) const { return body.holds(assignment); }
};

struct SolverConfig {
  std::string executable;
  double timeout_seconds = 60;
  std::optional<std::string> logic;
  // Passed before the script; empty means "-in" for z3 and nothing otherwise.
  std::optional<std::vector<std::string>> extra_flags;
};

enum class SolverStatus { Sat, Unsat, Unknown };
const char *status_name(SolverStatus s);

/// A model entry. Rational values are parsed exactly; anything else (e.g.
/// algebraic root objects) is kept as text only.
struct ModelValue {
  std::optional<Rational> value;
  std::string text;
};

using Model = std::map<std::string, ModelValue>;

struct SolverOutcome {
  SolverStatus status = SolverStatus::Unknown;
  std::optional<Model> model;
  std::string transcript;
  std::string reason; // why the status is Unknown, if it is
};

class SolverError : public Error {
public:
  using Error::Error;
};

// SMT-LIB symbol for a variable, |quoted| when not a simple symbol.
std::string smt_symbol(Var v);

std::string emit_smtlib(const CertificateFormula &f, const std::optional<std::string> &logic = {});

SolverOutcome run_solver(const std::string &script, const SolverConfig &cfg);

// Parses the `(get-model)` response (the s-expression list of define-funs).
Model parse_model(const std::string &text);

// Looks up a variable's rational model value; absent constants default to 0.
std::optional<std::map<Var, Rational>> rational_assignment(const Model &model, const std::vector<Var> &vars);

// $TWN_SOLVER if set, else "z3".
std::string default_solver_path();

enum class Verdict { Terminating, NonTerminating, Unknown };
const char *verdict_name(Verdict v);

struct VerdictInfo {
  Verdict verdict = Verdict::Unknown;
  std::string caveat;
};

VerdictInfo classify_verdict(const SolverOutcome &outcome, Ring ring);

} // namespace twn

#endif
