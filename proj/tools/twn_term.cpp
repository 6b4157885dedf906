// twn-term: termination analysis for twn-transformable polynomial loops.

#include "twn/analyze.hpp"
#include "twn/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace twn;
using json = nlohmann::ordered_json;

namespace {

constexpr int schema_version = 1;

std::string join_point(const Point &p)
{
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? ", " : "") + twn::to_string(p[i]);
  return "(" + s + ")";
}

json point_json(const Point &p)
{
  json a = json::array();
  for (const auto &v : p)
    a.push_back(twn::to_string(v));
  return a;
}

// FNV-1a, only to fingerprint solver output in reports.
std::string digest(const std::string &s)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json automorphism_json(const Automorphism &eta)
{
  json fwd = json::object(), inv = json::object();
  for (std::size_t i = 0; i < eta.vars.size(); ++i) {
    fwd[eta.vars[i].name()] = eta.forward.at(eta.vars[i]).to_string(eta.vars);
    inv[eta.vars[i].name()] = eta.inverse.at(eta.vars[i]).to_string(eta.vars);
  }
  return {{"forward", fwd}, {"inverse", inv}};
}

const char *step_kind(TraceStep::Kind k)
{
  switch (k) {
  case TraceStep::Kind::Homogenize:
    return "homogenize";
  case TraceStep::Kind::Transform:
    return "transform";
  case TraceStep::Kind::Chain:
    return "chain";
  }
  return "?";
}

json report_json(const Loop &loop, const AnalysisResult &r)
{
  json j;
  j["schema"] = schema_version;
  j["verdict"] = verdict_name(r.verdict);
  j["witness"] = r.witness ? point_json(*r.witness) : json(nullptr);
  j["ring"] = ring_name(loop.ring);
  j["reason"] = r.reason;
  json steps = json::array();
  for (const auto &s : r.trace.steps) {
    json e{{"kind", step_kind(s.kind)}, {"method", s.method}};
    if (s.eta)
      e["automorphism"] = automorphism_json(*s.eta);
    e["loop"] = s.result.to_string();
    steps.push_back(e);
  }
  j["transformations"] = steps;
  json cf = json::object();
  if (r.final_loop)
    for (std::size_t i = 0; i < r.closed_form.size(); ++i)
      cf[r.final_loop->vars[i].name()] = r.closed_form[i].to_string(r.final_loop->vars);
  j["closed_form"] = cf;
  j["certificate"] = {{"guard_atoms", r.trace.guard_atoms},
                      {"certificate_atoms", r.trace.certificate_atoms},
                      {"script_bytes", r.trace.smt_script.size()}};
  j["solver"] = {{"status", r.trace.solver_status},
                 {"transcript_digest", digest(r.trace.solver_transcript)},
                 {"transcript_bytes", r.trace.solver_transcript.size()}};
  j["notes"] = r.trace.notes;
  return j;
}

void print_report(const Loop &loop, const AnalysisResult &r)
{
  std::cout << "verdict: " << verdict_name(r.verdict) << "\n";
  if (r.witness)
    std::cout << "witness: " << join_point(*r.witness) << "\n";
  if (!r.reason.empty())
    std::cout << "reason: " << r.reason << "\n";
  std::cout << "ring: " << ring_name(loop.ring) << "\n";
  for (const auto &s : r.trace.steps) {
    std::cout << "step: " << step_kind(s.kind) << " (" << s.method << ")\n";
    if (s.eta)
      std::cout << s.eta->to_string();
  }
  if (r.final_loop) {
    std::cout << "closed form:\n";
    for (std::size_t i = 0; i < r.closed_form.size(); ++i)
      std::cout << "  " << r.final_loop->vars[i].name() << " = " << r.closed_form[i].to_string(r.final_loop->vars)
                << "\n";
  }
  if (!r.trace.solver_status.empty())
    std::cout << "certificate atoms: " << r.trace.certificate_atoms << "\nsolver: " << r.trace.solver_status << "\n";
  for (const auto &n : r.trace.notes)
    std::cout << "note: " << n << "\n";
}

Point parse_point(const std::string &text, std::size_t d)
{
  Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" ()"), e = item.find_last_not_of(" ()");
    auto v = b == std::string::npos ? std::nullopt : parse_rational(item.substr(b, e - b + 1));
    if (!v)
      throw Error("bad point coordinate '" + item + "'");
    p.push_back(*v);
  }
  if (p.size() != d)
    throw Error("point needs " + std::to_string(d) + " coordinates");
  return p;
}

struct Options {
  std::string file;
  std::string set;
  std::string solver;
  double timeout = 60;
  unsigned max_degree = 2;
  std::size_t permutation_cap = 5040;
  bool machine = false;
  std::string point;
  std::size_t steps = 20;
};

RunConfig run_config(const Options &o)
{
  RunConfig cfg;
  cfg.input_path = o.file;
  cfg.set_spec = o.set;
  cfg.solver.executable = o.solver.empty() ? default_solver_path() : o.solver;
  cfg.solver.timeout_seconds = o.timeout;
  cfg.max_degree = o.max_degree;
  cfg.permutation_cap = o.permutation_cap;
  cfg.search_budget = o.timeout;
  cfg.machine = o.machine;
  return cfg;
}

DefinableSet load_set_for(const Options &o, const Loop &loop)
{
  return o.set.empty() ? default_set(loop) : resolve_set(o.set, loop);
}

int cmd_analyze(const Options &o)
{
  RunConfig cfg = run_config(o);
  Loop loop = load_loop(cfg.input_path);
  AnalysisResult r = analyze(loop, load_set_for(o, loop), cfg);
  if (o.machine)
    std::cout << report_json(loop, r).dump(2) << "\n";
  else
    print_report(loop, r);
  return exit_code(r.verdict);
}

int cmd_transform(const Options &o)
{
  RunConfig cfg = run_config(o);
  Loop loop = load_loop(o.file);
  std::string reason;
  std::vector<std::string> notes;
  auto t = to_twn(loop, load_set_for(o, loop), cfg, reason, notes);
  if (!t) {
    std::cerr << "twn-term: " << reason << "\n";
    return 2;
  }
  std::cout << t->loop.to_string();
  Automorphism total = Automorphism::identity(t->loop.vars);
  bool any = false;
  for (const auto &s : t->steps)
    if (s.eta) {
      std::cout << s.eta->to_string();
      any = true;
    }
  if (!any)
    std::cout << total.to_string();
  std::cout << "set:\n" << t->set.to_string(t->loop.vars);
  for (const auto &n : notes)
    std::cout << "note: " << n << "\n";
  return 0;
}

int cmd_closed_form(const Options &o)
{
  Loop loop = load_loop(o.file);
  auto q = closed_form(loop);
  for (std::size_t i = 0; i < q.size(); ++i)
    std::cout << loop.vars[i].name() << " = " << q[i].to_string(loop.vars) << "\n";
  return 0;
}

int cmd_reduce(const Options &o)
{
  RunConfig cfg = run_config(o);
  Loop loop = load_loop(o.file);
  std::string reason;
  std::vector<std::string> notes;
  auto t = to_twn(loop, load_set_for(o, loop), cfg, reason, notes);
  if (!t) {
    std::cerr << "twn-term: " << reason << "\n";
    return 2;
  }
  Loop l = classify(t->loop).tnn ? t->loop : chain(t->loop);
  std::cout << emit_smtlib(build_certificate(l, t->set));
  return 0;
}

int cmd_simulate(const Options &o)
{
  Loop loop = load_loop(o.file);
  Point c = parse_point(o.point, loop.dim());
  SimTrace tr = simulate(loop, c, o.steps);
  std::cout << "n";
  for (const auto &v : loop.vars)
    std::cout << "\t" << v.name();
  std::cout << "\tguard\n";
  for (std::size_t n = 0; n < tr.points.size(); ++n) {
    std::cout << n;
    for (const auto &v : tr.points[n])
      std::cout << "\t" << twn::to_string(v);
    std::cout << "\t" << (tr.guard_truth[n] ? "true" : "false") << "\n";
  }
  return 0;
}

int cmd_classify(const Options &o)
{
  std::cout << classify(load_loop(o.file)).to_string();
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Termination analysis for twn-transformable polynomial loops"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("file", o.file, "loop file")->required()->check(CLI::ExistingFile);
  };
  auto add_solver = [&](CLI::App *sub) {
    sub->add_option("--set", o.set, "start set: Zd, Qd, full, or a set file");
    sub->add_option("--solver", o.solver, "SMT solver executable (default: $TWN_SOLVER or z3)");
    sub->add_option("--timeout", o.timeout, "solver timeout and search budget in seconds")->check(CLI::PositiveNumber);
    sub->add_option("--max-degree", o.max_degree, "largest automorphism degree tried by the search")
        ->check(CLI::Range(1u, 16u));
    sub->add_option("--permutation-cap", o.permutation_cap, "largest number of variable orders tried")
        ->check(CLI::PositiveNumber);
  };

  auto *an = app.add_subcommand("analyze", "decide termination");
  add_common(an);
  add_solver(an);
  an->add_flag("--machine", o.machine, "print a JSON report");
  auto *tr = app.add_subcommand("transform", "print the twn loop and the automorphism");
  add_common(tr);
  add_solver(tr);
  auto *cf = app.add_subcommand("closed-form", "print the closed form of a tnn loop");
  add_common(cf);
  auto *rd = app.add_subcommand("reduce", "print the SMT-LIB certificate");
  add_common(rd);
  add_solver(rd);
  auto *sim = app.add_subcommand("simulate", "run the loop from a point");
  add_common(sim);
  sim->add_option("--point", o.point, "start point, e.g. 1,0,1")->required();
  sim->add_option("--steps", o.steps, "number of iterations");
  auto *cl = app.add_subcommand("classify", "print the structural classification");
  add_common(cl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (*an)
      return cmd_analyze(o);
    if (*tr)
      return cmd_transform(o);
    if (*cf)
      return cmd_closed_form(o);
    if (*rd)
      return cmd_reduce(o);
    if (*sim)
      return cmd_simulate(o);
    if (*cl)
      return cmd_classify(o);
  } catch (const SolverError &e) {
    std::cerr << "twn-term: solver error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception &e) {
    std::cerr << "twn-term: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
