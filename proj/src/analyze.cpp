#include "twn/analyze.hpp"

#include "twn/oracle.hpp"

namespace twn {

int exit_code(Verdict v)
{
  switch (v) {
  case Verdict::Terminating:
    return 0;
  case Verdict::NonTerminating:
    return 1;
  case Verdict::Unknown:
    return 2;
  }
  return 3;
}

namespace {

bool has_constant_term(const Loop &loop)
{
  for (const auto &u : loop.update)
    if (u.constant_term() != 0)
      return true;
  return false;
}

DefinableSet extend_for_homogenization(const DefinableSet &f, Var xb)
{
  DefinableSet out = f;
  Formula fix(Atom{Polynomial(xb) - 1, Rel::Equal});
  if (f.constraint.kind() == Formula::Kind::Const && f.constraint.const_value())
    out.constraint = fix;
  else
    out.constraint = f.constraint && fix;
  return out;
}

} // namespace

std::optional<TwnTransformation> to_twn(const Loop &loop, const DefinableSet &f, const RunConfig &cfg,
                                        std::string &reason, std::vector<std::string> &notes)
{
  TwnTransformation t{loop, f, {}};
  Classification cls = classify(loop);
  if (cls.twn())
    return t;

  if (cls.solvable_partition) {
    Loop l = loop;
    if (is_affine(loop) && has_constant_term(loop)) {
      l = homogenize(loop);
      t.set = extend_for_homogenization(f, l.vars.back());
      t.steps.push_back({TraceStep::Kind::Homogenize, "affine", std::nullopt, l});
      notes.push_back("homogenized affine update with " + l.vars.back().name());
    }
    auto res = triangularize_solvable(l, classify(l));
    if (auto *u = std::get_if<TransformUnsupported>(&res)) {
      reason = "unsupported: " + u->reason;
      if (u->real_spectrum)
        reason += "; the spectrum is real";
      else
        reason += "; the spectrum is not real";
      return std::nullopt;
    }
    auto &tri = std::get<Triangularized>(res);
    t.set = image_of_set(t.set, tri.eta);
    t.steps.push_back({TraceStep::Kind::Transform, "solvable", tri.eta, tri.loop});
    t.loop = tri.loop;
    return t;
  }

  SearchOptions opts;
  opts.solver = cfg.solver;
  opts.budget_seconds = cfg.search_budget;
  opts.max_permutations = cfg.permutation_cap;

  auto accept = [&](const SearchResult &s, const std::string &method) {
    t.set = image_of_set(t.set, *s.eta);
    t.steps.push_back({TraceStep::Kind::Transform, method, *s.eta, *s.loop});
    t.loop = *s.loop;
  };

  if (jacobian_strongly_nilpotent(loop).nilpotent) {
    notes.push_back("Jacobian is strongly nilpotent");
    opts.unit_diagonal = true;
    auto s = search_automorphism(loop, 1, opts);
    if (s.status == SearchStatus::Found) {
      accept(s, "nilpotent-jacobian");
      return t;
    }
    notes.push_back("unit-diagonal linear search: " + s.reason);
    opts.unit_diagonal = false;
  }

  bool inconclusive = false;
  for (unsigned delta = 1; delta <= cfg.max_degree; ++delta) {
    auto s = search_automorphism(loop, delta, opts);
    if (s.status == SearchStatus::Found) {
      accept(s, "search");
      return t;
    }
    notes.push_back("search with degree " + std::to_string(delta) + ": " + s.reason);
    if (s.status == SearchStatus::Unknown)
      inconclusive = true;
  }
  reason = std::string(inconclusive ? "no automorphism found within budget"
                                     : "no automorphism exists") +
           " up to degree " + std::to_string(cfg.max_degree);
  return std::nullopt;
}

AnalysisResult analyze(const Loop &loop, const DefinableSet &f, const RunConfig &cfg)
{
  validate_loop(loop);
  AnalysisResult res;
  auto &trace = res.trace;
  trace.guard_atoms = loop.guard.atom_count();

  std::string reason;
  auto twn = to_twn(loop, f, cfg, reason, trace.notes);
  if (!twn) {
    res.reason = reason;
    return res;
  }
  trace.steps = twn->steps;
  Loop current = twn->loop;
  if (!classify(current).tnn) {
    current = chain(current);
    trace.chained = true;
    trace.steps.push_back({TraceStep::Kind::Chain, "chain", std::nullopt, current});
  }
  res.final_loop = current;
  res.closed_form = closed_form(current);

  CertificateFormula cert = build_certificate(current, twn->set);
  trace.certificate_atoms = cert.body.atom_count();
  trace.smt_script = emit_smtlib(cert);
  SolverOutcome out = run_solver(trace.smt_script, cfg.solver);
  trace.solver_status = status_name(out.status);
  trace.solver_transcript = out.transcript;
  VerdictInfo v = classify_verdict(out, loop.ring);
  res.verdict = v.verdict;
  res.reason = v.caveat;
  if (v.verdict != Verdict::NonTerminating)
    return res;

  std::vector<Var> all = cert.real_consts;
  all.insert(all.end(), cert.int_consts.begin(), cert.int_consts.end());
  all.insert(all.end(), cert.real_aux.begin(), cert.real_aux.end());
  auto values = rational_assignment(*out.model, all);
  if (!values) {
    trace.notes.push_back("model has non-rational values; witness omitted");
    return res;
  }
  if (!cert.holds(*values))
    trace.notes.push_back("solver model does not satisfy the certificate under exact evaluation");
  Point model_point;
  for (Var v : current.vars)
    model_point.push_back(values->at(v));
  Point w = extract_witness(model_point, trace);
  if (auto n0 = validate_witness_prefix(loop, w)) {
    res.witness = w;
    trace.notes.push_back("witness guard holds from step " + std::to_string(*n0) + " for 50 steps");
  } else {
    trace.notes.push_back("witness failed the prefix check; omitted");
  }
  return res;
}

AnalysisResult analyze(const RunConfig &cfg)
{
  Loop loop = load_loop(cfg.input_path);
  DefinableSet f = cfg.set_spec.empty() ? default_set(loop) : resolve_set(cfg.set_spec, loop);
  return analyze(loop, f, cfg);
}

} // namespace twn
