// The end-to-end termination check.

#ifndef TWN_ANALYZE_HPP
#define TWN_ANALYZE_HPP

#include "twn/reduction.hpp"

namespace twn {

struct RunConfig {
  std::string input_path;
  std::string set_spec; // "Zd", "Qd", "full", a set file, or empty for the ring default
  SolverConfig solver;
  unsigned max_degree = 2;
  std::size_t permutation_cap = 5040;
  double search_budget = 60;
  bool machine = false;
};

// Transforms the loop to twn form, recording each step; returns nullopt
// (with `reason` set) when no transformation is available.
struct TwnTransformation {
  Loop loop;
  DefinableSet set;
  std::vector<TraceStep> steps;
};
std::optional<TwnTransformation> to_twn(const Loop &loop, const DefinableSet &f, const RunConfig &cfg,
                                        std::string &reason, std::vector<std::string> &notes);

AnalysisResult analyze(const Loop &loop, const DefinableSet &f, const RunConfig &cfg);
AnalysisResult analyze(const RunConfig &cfg);

// Exit status of the command-line tool for a verdict.
int exit_code(Verdict v);

} // namespace twn

#endif
