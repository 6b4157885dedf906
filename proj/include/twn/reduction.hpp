// Reduction of eventual non-termination of tnn-loops to an existential
// formula, and transport of witnesses back through the pipeline.

#ifndef TWN_REDUCTION_HPP
#define TWN_REDUCTION_HPP

#include "twn/closedform.hpp"
#include "twn/smt.hpp"
#include "twn/transform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twn {

struct MarkedCoefficient {
  Polynomial coeff;
  Rational base = 1;
  unsigned npow = 0;
  friend bool operator==(const MarkedCoefficient &, const MarkedCoefficient &) = default;
};

// (b₂,a₂) >lex (b₁,a₁)
bool dominates(const MarkedCoefficient &a, const MarkedCoefficient &b);

// Descending order; the zero NPE gives [0^(1,0)].
std::vector<MarkedCoefficient> marked_coeffs(const NPE &p);

// Rel must be Greater or GreaterEq.
Formula red_atom(const NPE &p, Rel rel);

// Replaces every atom p ▷ 0 of the guard by red(p(q) ▷ 0).
Formula red_formula(const Formula &guard, const std::vector<Var> &vars, const std::vector<NPE> &q_norm);

// The NPE p(q_norm) for a polynomial p over the loop variables.
NPE compose_npe(const Polynomial &p, const std::vector<Var> &vars, const std::vector<NPE> &q_norm);

// ψ_F ∧ red(φ(q_norm)). Requires a tnn-loop.
CertificateFormula build_certificate(const Loop &loop, const DefinableSet &f);

struct TraceStep {
  enum class Kind { Homogenize, Transform, Chain };
  Kind kind;
  std::string method; // e.g. "solvable", "nilpotent-jacobian", "search"
  std::optional<Automorphism> eta;
  Loop result;
};

struct PipelineTrace {
  std::vector<TraceStep> steps;
  bool chained = false;
  std::size_t guard_atoms = 0;
  std::size_t certificate_atoms = 0;
  std::string solver_status;
  std::string smt_script;
  std::string solver_transcript;
  std::vector<std::string> notes;
};

struct AnalysisResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Point> witness;
  PipelineTrace trace;
  std::string reason;
  std::vector<PolyExp> closed_form;
  std::optional<Loop> final_loop;
};

// Maps a point of the final loop back to the original loop.
Point extract_witness(const Point &model_point, const PipelineTrace &trace);

} // namespace twn

#endif
