#include "twn/smt.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sstream>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

namespace twn {

const char *status_name(SolverStatus s)
{
  switch (s) {
  case SolverStatus::Sat:
    return "sat";
  case SolverStatus::Unsat:
    return "unsat";
  case SolverStatus::Unknown:
    return "unknown";
  }
  return "?";
}

const char *verdict_name(Verdict v)
{
  switch (v) {
  case Verdict::Terminating:
    return "Terminating";
  case Verdict::NonTerminating:
    return "NonTerminating";
  case Verdict::Unknown:
    return "Unknown";
  }
  return "?";
}

std::string smt_symbol(Var v)
{
  static const std::set<std::string> reserved{"and", "or", "not", "true", "false", "ite", "let",
                                              "exists", "forall", "to_real", "to_int", "div", "mod",
                                              "abs", "distinct", "par", "as", "_", "!"};
  const std::string &n = v.name();
  bool simple = !n.empty() && !std::isdigit(static_cast<unsigned char>(n[0])) && !reserved.count(n);
  for (char c : n)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || std::strchr("~!@$%^&*_-+=<>.?/", c)))
      simple = false;
  return simple ? n : "|" + n + "|";
}

namespace {

std::string literal(const Rational &r)
{
  Rational a = abs(r);
  std::string body = a.get_den() == 1 ? a.get_num().get_str() : "(/ " + a.get_num().get_str() + " " +
                                                                     a.get_den().get_str() + ")";
  return r < 0 ? "(- " + body + ")" : body;
}

struct Emitter {
  std::set<Var> ints;
  VarOrder order;

  std::string term(const Monomial &m, const Rational &c) const
  {
    std::vector<std::string> factors;
    if (c != 1 || m.is_one())
      factors.push_back(literal(c));
    std::vector<Monomial::Factor> fs = m.factors();
    std::sort(fs.begin(), fs.end(), [&](const auto &a, const auto &b) {
      auto ka = std::find(order.begin(), order.end(), a.first) - order.begin();
      auto kb = std::find(order.begin(), order.end(), b.first) - order.begin();
      return ka != kb ? ka < kb : a.first.name() < b.first.name();
    });
    for (const auto &[v, e] : fs) {
      std::string s = ints.count(v) ? "(to_real " + smt_symbol(v) + ")" : smt_symbol(v);
      for (unsigned k = 0; k < e; ++k)
        factors.push_back(s);
    }
    if (factors.size() == 1)
      return factors.front();
    std::string out = "(*";
    for (const auto &f : factors)
      out += " " + f;
    return out + ")";
  }

  std::string sum(const std::vector<std::pair<Monomial, Rational>> &terms) const
  {
    if (terms.empty())
      return "0";
    if (terms.size() == 1)
      return term(terms[0].first, terms[0].second);
    std::string out = "(+";
    for (const auto &[m, c] : terms)
      out += " " + term(m, c);
    return out + ")";
  }

  std::string atom(const Atom &a) const
  {
    std::vector<std::pair<Monomial, Rational>> pos, neg;
    std::vector<std::pair<Monomial, Rational>> sorted(a.poly.terms().begin(), a.poly.terms().end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](const auto &x, const auto &y) { return grlex_before(x.first, y.first, order); });
    for (const auto &[m, c] : sorted) {
      if (c > 0)
        pos.emplace_back(m, c);
      else
        neg.emplace_back(m, -c);
    }
    const char *op = a.rel == Rel::Equal ? "=" : a.rel == Rel::Greater ? ">" : ">=";
    return std::string("(") + op + " " + sum(pos) + " " + sum(neg) + ")";
  }

  void formula(const Formula &f, std::string &out) const
  {
    switch (f.kind()) {
    case Formula::Kind::Leaf:
      out += atom(f.atom());
      return;
    case Formula::Kind::Const:
      out += f.const_value() ? "true" : "false";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out += f.kind() == Formula::Kind::And ? "(and" : "(or";
      for (const auto &c : f.children()) {
        out += ' ';
        formula(c, out);
      }
      out += ')';
      return;
    }
  }
};

} // namespace

std::string emit_smtlib(const CertificateFormula &f, const std::optional<std::string> &logic)
{
  Emitter em;
  em.ints.insert(f.int_consts.begin(), f.int_consts.end());
  for (const auto *group : {&f.real_consts, &f.int_consts, &f.real_aux})
    em.order.insert(em.order.end(), group->begin(), group->end());

  std::string out = "(set-logic " + logic.value_or(f.int_consts.empty() ? "QF_NRA" : "QF_NIRA") + ")\n";
  for (Var v : f.real_consts)
    out += "(declare-const " + smt_symbol(v) + " Real)\n";
  for (Var v : f.int_consts)
    out += "(declare-const " + smt_symbol(v) + " Int)\n";
  for (Var v : f.real_aux)
    out += "(declare-const " + smt_symbol(v) + " Real)\n";
  out += "(assert ";
  em.formula(f.body, out);
  out += ")\n(check-sat)\n(get-model)\n";
  return out;
}

std::string default_solver_path()
{
  if (const char *env = std::getenv("TWN_SOLVER"); env && *env)
    return env;
  return "z3";
}

namespace {

std::optional<std::string> resolve_executable(const std::string &name)
{
  auto runnable = [](const std::string &p) {
    struct stat st;
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos)
    return runnable(name) ? std::optional(name) : std::nullopt;
  const char *path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    std::string cand = (dir.empty() ? "." : dir) + "/" + name;
    if (runnable(cand))
      return cand;
  }
  return std::nullopt;
}

// --- s-expressions for model parsing ---------------------------------------

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprReader {
public:
  explicit SExprReader(std::string_view s) : s_(s) {}

  std::optional<SExpr> next()
  {
    skip();
    if (i_ >= s_.size())
      return std::nullopt;
    return read();
  }

private:
  void skip()
  {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_])))
        ++i_;
      else if (s_[i_] == ';')
        while (i_ < s_.size() && s_[i_] != '\n')
          ++i_;
      else
        break;
    }
  }

  SExpr read()
  {
    skip();
    if (i_ >= s_.size())
      throw Error("unexpected end of solver output");
    SExpr e;
    if (s_[i_] == '(') {
      ++i_;
      e.is_list = true;
      while (true) {
        skip();
        if (i_ >= s_.size())
          throw Error("unbalanced parenthesis in solver output");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e.list.push_back(read());
      }
      return e;
    }
    if (s_[i_] == ')')
      throw Error("unexpected ')' in solver output");
    std::size_t start = i_;
    if (s_[i_] == '|') {
      ++i_;
      while (i_ < s_.size() && s_[i_] != '|')
        ++i_;
      ++i_;
      e.atom = std::string(s_.substr(start + 1, i_ - start - 2));
      return e;
    }
    if (s_[i_] == '"') {
      ++i_;
      while (i_ < s_.size() && s_[i_] != '"')
        ++i_;
      ++i_;
      e.atom = std::string(s_.substr(start, i_ - start));
      return e;
    }
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
           s_[i_] != ')')
      ++i_;
    e.atom = std::string(s_.substr(start, i_ - start));
    return e;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::string render(const SExpr &e)
{
  if (!e.is_list)
    return e.atom;
  std::string out = "(";
  for (std::size_t k = 0; k < e.list.size(); ++k)
    out += (k ? " " : "") + render(e.list[k]);
  return out + ")";
}

std::optional<Rational> decimal(const std::string &s)
{
  if (s.empty())
    return std::nullopt;
  auto dot = s.find('.');
  std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(c); }))
    return std::nullopt;
  Integer num(digits, 10);
  Integer den = 1;
  if (dot != std::string::npos)
    for (std::size_t k = dot + 1; k < s.size(); ++k)
      den *= 10;
  return make_rational(num, den);
}

std::optional<Rational> value_of(const SExpr &e)
{
  if (!e.is_list)
    return decimal(e.atom);
  if (e.list.empty() || e.list[0].is_list)
    return std::nullopt;
  const std::string &op = e.list[0].atom;
  std::vector<Rational> args;
  for (std::size_t k = 1; k < e.list.size(); ++k) {
    auto v = value_of(e.list[k]);
    if (!v)
      return std::nullopt;
    args.push_back(*v);
  }
  if (args.empty())
    return std::nullopt;
  if (op == "-")
    return args.size() == 1 ? std::optional<Rational>(-args[0])
                            : std::optional<Rational>(args[0] - args[1]);
  if (op == "+" || op == "*") {
    Rational acc = args[0];
    for (std::size_t k = 1; k < args.size(); ++k)
      acc = op == "+" ? Rational(acc + args[k]) : Rational(acc * args[k]);
    return acc;
  }
  if (op == "/" && args.size() == 2 && args[1] != 0)
    return Rational(args[0] / args[1]);
  if (op == "to_real" && args.size() == 1)
    return args[0];
  return std::nullopt;
}

} // namespace

Model parse_model(const std::string &text)
{
  Model model;
  SExprReader reader(text);
  auto top = reader.next();
  if (!top || !top->is_list)
    throw Error("model is not an s-expression list");
  std::vector<SExpr> defs = top->list;
  // Some solvers wrap the list as (model ...).
  if (!defs.empty() && !defs[0].is_list && defs[0].atom == "model")
    defs.erase(defs.begin());
  for (const auto &d : defs) {
    if (!d.is_list || d.list.size() != 5 || d.list[0].atom != "define-fun")
      continue;
    if (!d.list[2].is_list || !d.list[2].list.empty())
      continue; // functions with arguments are not constants
    ModelValue mv{value_of(d.list[4]), render(d.list[4])};
    model[d.list[1].atom] = std::move(mv);
  }
  return model;
}

std::optional<std::map<Var, Rational>> rational_assignment(const Model &model, const std::vector<Var> &vars)
{
  std::map<Var, Rational> out;
  for (Var v : vars) {
    auto it = model.find(v.name());
    if (it == model.end()) {
      out[v] = 0;
      continue;
    }
    if (!it->second.value)
      return std::nullopt;
    out[v] = *it->second.value;
  }
  return out;
}

SolverOutcome run_solver(const std::string &script, const SolverConfig &cfg)
{
  SolverOutcome outcome;
  if (cfg.timeout_seconds <= 0) {
    outcome.reason = "timeout";
    return outcome;
  }
  auto exe = resolve_executable(cfg.executable);
  if (!exe)
    throw SolverError("solver executable not found: '" + cfg.executable + "'");

  std::vector<std::string> args{*exe};
  if (cfg.extra_flags) {
    args.insert(args.end(), cfg.extra_flags->begin(), cfg.extra_flags->end());
  } else {
    std::string base = exe->substr(exe->rfind('/') + 1);
    if (base.rfind("z3", 0) == 0)
      args.push_back("-in");
  }

  // The script goes through an unlinked temporary file so that large inputs
  // cannot deadlock against the output pipe.
  char tmpl[] = "/tmp/twn-smt-XXXXXX";
  int in_fd = ::mkstemp(tmpl);
  if (in_fd < 0)
    throw SolverError(std::string("cannot create temporary file: ") + std::strerror(errno));
  ::unlink(tmpl);
  for (std::size_t off = 0; off < script.size();) {
    ssize_t w = ::write(in_fd, script.data() + off, script.size() - off);
    if (w < 0) {
      ::close(in_fd);
      throw SolverError(std::string("cannot write solver input: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(w);
  }
  ::lseek(in_fd, 0, SEEK_SET);

  int out_pipe[2];
  if (::pipe(out_pipe) != 0) {
    ::close(in_fd);
    throw SolverError(std::string("pipe failed: ") + std::strerror(errno));
  }

  std::vector<char *> argv;
  for (auto &a : args)
    argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(in_fd);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    throw SolverError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(in_fd, STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(out_pipe[1], STDERR_FILENO);
    ::close(in_fd);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::setpgid(0, 0);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(in_fd);
  ::close(out_pipe[1]);

  using clock = std::chrono::steady_clock;
  auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                     std::chrono::duration<double>(cfg.timeout_seconds));
  std::string output;
  bool timed_out = false;
  char buf[65536];
  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{out_pipe[0], POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (r < 0 && errno == EINTR)
      continue;
    if (r == 0)
      continue;
    ssize_t n = ::read(out_pipe[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0)
      break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  if (timed_out) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
  }
  ::close(out_pipe[0]);
  int wstatus = 0;
  while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
  }
  outcome.transcript = output;

  if (timed_out) {
    outcome.reason = "timeout";
    return outcome;
  }
  if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 127 && output.empty())
    throw SolverError("could not execute solver '" + *exe + "'");

  std::istringstream lines(output);
  std::string first;
  lines >> first;
  if (first == "sat") {
    outcome.status = SolverStatus::Sat;
    std::string rest = output.substr(output.find("sat") + 3);
    try {
      outcome.model = parse_model(rest);
    } catch (const Error &e) {
      outcome.status = SolverStatus::Unknown;
      outcome.reason = std::string("unparseable model: ") + e.what();
    }
  } else if (first == "unsat") {
    outcome.status = SolverStatus::Unsat;
  } else if (first == "unknown") {
    outcome.reason = "solver returned unknown";
  } else {
    outcome.reason = "unexpected solver output";
  }
  return outcome;
}

VerdictInfo classify_verdict(const SolverOutcome &outcome, Ring ring)
{
  VerdictInfo info;
  switch (outcome.status) {
  case SolverStatus::Sat:
    info.verdict = Verdict::NonTerminating;
    break;
  case SolverStatus::Unsat:
    info.verdict = Verdict::Terminating;
    break;
  case SolverStatus::Unknown:
    info.verdict = Verdict::Unknown;
    info.caveat = outcome.reason.empty() ? "solver gave no answer" : outcome.reason;
    if (ring == Ring::Z || ring == Ring::Q)
      info.caveat += "; over " + std::string(ring_name(ring)) +
                     " only non-termination is semi-decidable, so no complete answer is guaranteed";
    break;
  }
  return info;
}

} // namespace twn
