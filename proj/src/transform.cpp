#include "twn/transform.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>

namespace twn {

Var fresh_var(const std::string &base, const std::set<std::string> &taken)
{
  if (!taken.count(base))
    return Var(base);
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!taken.count(cand))
      return Var(cand);
  }
}

namespace {

std::set<std::string> names_of(const std::vector<Var> &vs)
{
  std::set<std::string> out;
  for (Var v : vs)
    out.insert(v.name());
  return out;
}

Polynomial image(const PolyMap &m, Var v)
{
  auto it = m.find(v);
  return it == m.end() ? Polynomial(v) : it->second;
}

} // namespace

Automorphism Automorphism::identity(const std::vector<Var> &vars)
{
  Automorphism eta;
  eta.vars = vars;
  for (Var v : vars) {
    eta.forward.emplace(v, Polynomial(v));
    eta.inverse.emplace(v, Polynomial(v));
  }
  return eta;
}

Automorphism Automorphism::linear(const std::vector<Var> &vars, const RatMatrix &m)
{
  if (m.rows() != vars.size() || m.cols() != vars.size())
    throw Error("automorphism matrix has the wrong size");
  auto inv = m.inverse();
  if (!inv)
    throw Error("singular matrix does not induce an automorphism");
  Automorphism eta;
  eta.vars = vars;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Polynomial f, g;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      f += Polynomial(vars[j]).scaled(m(i, j));
      g += Polynomial(vars[j]).scaled((*inv)(i, j));
    }
    eta.forward.emplace(vars[i], f);
    eta.inverse.emplace(vars[i], g);
  }
  return eta;
}

unsigned Automorphism::degree() const
{
  unsigned d = 0;
  for (Var v : vars)
    d = std::max(d, image(forward, v).total_degree());
  return d;
}

bool Automorphism::is_linear() const
{
  for (Var v : vars) {
    if (image(forward, v).total_degree() > 1 || image(inverse, v).total_degree() > 1)
      return false;
  }
  return true;
}

std::string Automorphism::to_string() const
{
  std::string out = "eta:";
  for (Var v : vars)
    out += "\n  " + v.name() + " -> " + image(forward, v).to_string(vars);
  out += "\neta^-1:";
  for (Var v : vars)
    out += "\n  " + v.name() + " -> " + image(inverse, v).to_string(vars);
  return out + "\n";
}

Automorphism compose(const Automorphism &eta1, const Automorphism &eta2)
{
  if (eta1.vars != eta2.vars)
    throw Error("composing automorphisms over different variables");
  Automorphism out;
  out.vars = eta1.vars;
  for (Var v : out.vars) {
    out.forward.emplace(v, image(eta2.forward, v).substitute(eta1.forward));
    out.inverse.emplace(v, image(eta1.inverse, v).substitute(eta2.inverse));
  }
  return out;
}

std::optional<Var> verify_automorphism(const Automorphism &eta)
{
  for (Var v : eta.vars) {
    if (image(eta.forward, v).substitute(eta.inverse) != Polynomial(v))
      return v;
    if (image(eta.inverse, v).substitute(eta.forward) != Polynomial(v))
      return v;
  }
  return std::nullopt;
}

Loop apply_tr(const Loop &loop, const Automorphism &eta)
{
  if (eta.vars != loop.vars)
    throw Error("automorphism variables do not match the loop");
  if (auto bad = verify_automorphism(eta))
    throw PreconditionError("not an automorphism: composition fails at " + bad->name());
  Loop out = loop;
  out.guard = loop.guard.substitute(eta.inverse);
  PolyMap a = loop.update_map();
  for (std::size_t i = 0; i < loop.dim(); ++i)
    out.update[i] = image(eta.forward, loop.vars[i]).substitute(a).substitute(eta.inverse);
  return out;
}

namespace {

Point eval_images(const PolyMap &m, const std::vector<Var> &vars, const Point &c)
{
  if (c.size() != vars.size())
    throw Error("point has the wrong dimension");
  auto env = bind(vars, c);
  Point out;
  for (Var v : vars)
    out.push_back(image(m, v).evaluate(env));
  return out;
}

} // namespace

Point apply_point(const Automorphism &eta, const Point &c) { return eval_images(eta.forward, eta.vars, c); }

Point apply_inverse_point(const Automorphism &eta, const Point &c)
{
  return eval_images(eta.inverse, eta.vars, c);
}

// ---------------------------------------------------------------------------
// Definable sets

DefinableSet DefinableSet::integers(const std::vector<Var> &vars)
{
  DefinableSet s;
  auto taken = names_of(vars);
  std::vector<Formula> cs;
  for (Var v : vars) {
    Var k = fresh_var("k_" + v.name(), taken);
    taken.insert(k.name());
    s.int_vars.push_back(k);
    cs.emplace_back(Atom{Polynomial(v) - Polynomial(k), Rel::Equal});
  }
  if (!cs.empty())
    s.constraint = Formula::conj(std::move(cs));
  return s;
}

DefinableSet DefinableSet::rationals(const std::vector<Var> &vars)
{
  DefinableSet s;
  auto taken = names_of(vars);
  std::vector<Formula> cs;
  for (Var v : vars) {
    Var p = fresh_var("p_" + v.name(), taken);
    taken.insert(p.name());
    Var q = fresh_var("q_" + v.name(), taken);
    taken.insert(q.name());
    s.int_vars.push_back(p);
    s.int_vars.push_back(q);
    cs.emplace_back(Atom{Polynomial(q) - 1, Rel::GreaterEq});
    cs.emplace_back(Atom{Polynomial(v) * Polynomial(q) - Polynomial(p), Rel::Equal});
  }
  if (!cs.empty())
    s.constraint = Formula::conj(std::move(cs));
  return s;
}

DefinableSet DefinableSet::full() { return {}; }

bool DefinableSet::holds(const std::vector<Var> &vars, const Point &x,
                         const std::map<Var, Rational> &aux) const
{
  auto env = bind(vars, x);
  for (Var v : int_vars) {
    auto it = aux.find(v);
    if (it == aux.end() || !is_integer(it->second))
      return false;
  }
  env.insert(aux.begin(), aux.end());
  return constraint.holds(env);
}

std::string DefinableSet::to_string(const VarOrder &order) const
{
  std::string out;
  if (!int_vars.empty()) {
    out += "int:";
    for (Var v : int_vars)
      out += " " + v.name();
    out += "\n";
  }
  if (!real_vars.empty()) {
    out += "real:";
    for (Var v : real_vars)
      out += " " + v.name();
    out += "\n";
  }
  VarOrder full_order = order;
  full_order.insert(full_order.end(), int_vars.begin(), int_vars.end());
  full_order.insert(full_order.end(), real_vars.begin(), real_vars.end());
  out += "where: " + constraint.to_string(full_order) + "\n";
  return out;
}

DefinableSet default_set(const Loop &loop)
{
  switch (loop.ring) {
  case Ring::Z:
    return DefinableSet::integers(loop.vars);
  case Ring::Q:
    return DefinableSet::rationals(loop.vars);
  case Ring::A:
  case Ring::R:
    return DefinableSet::full();
  }
  return DefinableSet::full();
}

DefinableSet parse_set(std::string_view text, const std::vector<Var> &loop_vars)
{
  DefinableSet s;
  std::set<std::string> declared = names_of(loop_vars);
  std::optional<std::string> where;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos)
      line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      continue;
    line = line.substr(first);
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected 'int:', 'real:' or 'where:'", line_no, 1);
    std::string key = line.substr(0, colon);
    std::string rest = line.substr(colon + 1);
    if (key == "int" || key == "real") {
      std::replace(rest.begin(), rest.end(), ',', ' ');
      std::istringstream names(rest);
      std::string n;
      while (names >> n) {
        if (!declared.insert(n).second)
          throw ParseError("name '" + n + "' declared twice", line_no, 1);
        (key == "int" ? s.int_vars : s.real_vars).emplace_back(n);
      }
    } else if (key == "where") {
      if (where)
        throw ParseError("duplicate 'where:'", line_no, 1);
      where = rest;
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, 1);
    }
  }
  if (where) {
    s.constraint = parse_formula(*where, true);
    for (Var v : s.constraint.vars())
      if (!declared.count(v.name()))
        throw Error("set constraint uses undeclared name '" + v.name() + "'");
  }
  return s;
}

DefinableSet load_set(const std::string &path, const std::vector<Var> &loop_vars)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open set file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_set(buf.str(), loop_vars);
}

DefinableSet resolve_set(const std::string &spec, const Loop &loop)
{
  if (spec == "Zd")
    return DefinableSet::integers(loop.vars);
  if (spec == "Qd")
    return DefinableSet::rationals(loop.vars);
  if (spec == "full")
    return DefinableSet::full();
  return load_set(spec, loop.vars);
}

namespace {

// If the constraint is a conjunction containing x_i − t_i = 0 for every loop
// variable (t_i free of loop variables) and nothing else mentions loop
// variables, returns the t_i and the remaining conjuncts.
std::optional<std::pair<PolyMap, std::vector<Formula>>> definitional(const DefinableSet &f,
                                                                     const std::vector<Var> &vars)
{
  std::vector<Formula> parts;
  if (f.constraint.kind() == Formula::Kind::And)
    parts = f.constraint.children();
  else
    parts = {f.constraint};
  std::set<Var> loop_vars(vars.begin(), vars.end());
  PolyMap defs;
  std::vector<Formula> rest;
  for (const auto &p : parts) {
    std::set<Var> used = p.vars();
    bool mentions = std::any_of(used.begin(), used.end(), [&](Var v) { return loop_vars.count(v) > 0; });
    if (!mentions) {
      rest.push_back(p);
      continue;
    }
    if (p.kind() != Formula::Kind::Leaf || p.atom().rel != Rel::Equal)
      return std::nullopt;
    const Polynomial &poly = p.atom().poly;
    std::optional<Var> x;
    for (Var v : poly.vars())
      if (loop_vars.count(v)) {
        if (x)
          return std::nullopt;
        x = v;
      }
    Rational c = poly.coefficient(Monomial(*x));
    if (c == 0 || poly.degree_in(*x) != 1 || defs.count(*x))
      return std::nullopt;
    Polynomial rem = poly - Polynomial(Monomial(*x), c);
    if (rem.vars().count(*x))
      return std::nullopt;
    defs.emplace(*x, rem.scaled(-1 / c));
  }
  if (defs.size() != vars.size())
    return std::nullopt;
  return std::make_pair(defs, rest);
}

} // namespace

DefinableSet image_of_set(const DefinableSet &f, const Automorphism &eta)
{
  if (f.constraint.kind() == Formula::Kind::Const)
    return f; // η̂ is a bijection, so the full space and the empty set are fixed
  DefinableSet out = f;
  if (auto defs = definitional(f, eta.vars)) {
    std::vector<Formula> cs;
    for (Var v : eta.vars) {
      Polynomial t = image(eta.forward, v).substitute(defs->first);
      cs.emplace_back(Atom{Polynomial(v) - t, Rel::Equal});
    }
    cs.insert(cs.end(), defs->second.begin(), defs->second.end());
    out.constraint = Formula::conj(std::move(cs));
    return out;
  }
  if (eta.is_linear()) {
    out.constraint = f.constraint.substitute(eta.inverse);
    return out;
  }
  std::set<std::string> taken = names_of(eta.vars);
  for (const auto *group : {&f.int_vars, &f.real_vars})
    for (Var v : *group)
      taken.insert(v.name());
  PolyMap to_y;
  std::vector<Formula> cs;
  for (Var v : eta.vars) {
    Var y = fresh_var("y_" + v.name(), taken);
    taken.insert(y.name());
    out.real_vars.push_back(y);
    to_y.emplace(v, Polynomial(y));
  }
  cs.push_back(f.constraint.substitute(to_y));
  for (Var v : eta.vars)
    cs.emplace_back(Atom{Polynomial(v) - image(eta.forward, v).substitute(to_y), Rel::Equal});
  out.constraint = Formula::conj(std::move(cs));
  return out;
}

// ---------------------------------------------------------------------------
// Jacobian

PolyMatrix jacobian(const Loop &loop)
{
  std::size_t d = loop.dim();
  PolyMatrix j(d, std::vector<Polynomial>(d));
  for (std::size_t r = 0; r < d; ++r) {
    Polynomial g = loop.update[r] - Polynomial(loop.vars[r]);
    for (std::size_t c = 0; c < d; ++c)
      j[r][c] = g.derivative(loop.vars[c]);
  }
  return j;
}

NilpotenceResult jacobian_strongly_nilpotent(const Loop &loop)
{
  std::size_t d = loop.dim();
  PolyMatrix j = jacobian(loop);
  std::set<std::string> taken = names_of(loop.vars);
  NilpotenceResult res;
  for (std::size_t k = 0; k < d; ++k) {
    PolyMap rename;
    for (Var v : loop.vars) {
      Var y = fresh_var("y" + std::to_string(k + 1) + "_" + v.name(), taken);
      taken.insert(y.name());
      rename.emplace(v, Polynomial(y));
    }
    PolyMatrix jk(d, std::vector<Polynomial>(d));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        jk[r][c] = j[r][c].substitute(rename);
    if (k == 0) {
      res.product = std::move(jk);
      continue;
    }
    PolyMatrix next(d, std::vector<Polynomial>(d));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t m = 0; m < d; ++m)
          if (!res.product[r][m].is_zero() && !jk[m][c].is_zero())
            next[r][c] += res.product[r][m] * jk[m][c];
    res.product = std::move(next);
  }
  res.nilpotent = true;
  for (const auto &row : res.product)
    for (const auto &e : row)
      if (!e.is_zero())
        res.nilpotent = false;
  return res;
}

// ---------------------------------------------------------------------------
// Solvable loops

std::variant<Triangularized, TransformUnsupported> triangularize_solvable(const Loop &loop,
                                                                           const Classification &cls)
{
  if (cls.twn())
    return Triangularized{loop, Automorphism::identity(loop.vars)};
  if (!cls.solvable_partition)
    throw PreconditionError("loop is not solvable");
  std::size_t d = loop.dim();
  RatMatrix t = RatMatrix::identity(d);
  for (const auto &block : *cls.solvable_partition) {
    std::size_t k = block.size();
    RatMatrix a(k, k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        a(r, c) = loop.update[loop.index_of(block[r])].coefficient(Monomial(block[c]));
    auto jd = rational_jordan(a);
    if (auto *u = std::get_if<JordanUnsupported>(&jd)) {
      TransformUnsupported out;
      out.block = block;
      out.residual = u->residual;
      out.real_spectrum = u->real_spectrum;
      out.reason = "block matrix has eigenvalues outside the rationals (residual factor " +
                   u->residual.to_polynomial(lambda_var()).to_string() + ")";
      return out;
    }
    const auto &dec = std::get<JordanDecomposition>(jd);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        t(loop.index_of(block[r]), loop.index_of(block[c])) = dec.transform(r, c);
  }
  Automorphism eta = Automorphism::linear(loop.vars, t);
  Loop out = apply_tr(loop, eta);
  if (!classify(out).twn())
    throw Error("solvable transformation did not produce a twn-loop");
  return Triangularized{std::move(out), std::move(eta)};
}

// ---------------------------------------------------------------------------
// Automorphism search

namespace {

struct Template {
  Polynomial poly;
  std::vector<std::pair<Var, Monomial>> unknowns;
};

Template make_template(const std::string &prefix, const std::vector<Monomial> &monos,
                       std::set<std::string> &taken)
{
  Template t;
  for (std::size_t k = 0; k < monos.size(); ++k) {
    Var u = fresh_var(prefix + std::to_string(k), taken);
    taken.insert(u.name());
    t.unknowns.emplace_back(u, monos[k]);
    t.poly += Polynomial(monos[k]) * Polynomial(u);
  }
  return t;
}

void add_identity(const Polynomial &lhs, const Polynomial &rhs, const std::set<Var> &xs,
                  std::set<Polynomial::TermMap> &seen, std::vector<Formula> &out)
{
  for (const auto &[m, coef] : (lhs - rhs).coefficients_wrt(xs)) {
    if (coef.is_zero())
      continue;
    // Normalize the sign/scale so duplicate equations collapse.
    Rational lead = coef.terms().rbegin()->second;
    Polynomial n = coef.scaled(1 / lead);
    if (seen.insert(n.terms()).second)
      out.emplace_back(Atom{n, Rel::Equal});
  }
}

struct QueryShape {
  CertificateFormula formula;
  std::vector<Template> eta, inv;
};

QueryShape build_query(const Loop &loop, const std::vector<Var> &order, unsigned delta, unsigned inv_deg,
                       unsigned upd_deg, bool unit_diagonal)
{
  const auto &xs = loop.vars;
  std::size_t d = xs.size();
  std::set<std::string> taken = names_of(xs);
  QueryShape q;
  auto eta_monos = monomials_up_to(xs, delta, 1);
  auto inv_monos = monomials_up_to(xs, inv_deg, 1);
  PolyMap eta_map, inv_map;
  for (std::size_t i = 0; i < d; ++i) {
    q.eta.push_back(make_template("e" + std::to_string(i + 1) + "_", eta_monos, taken));
    q.inv.push_back(make_template("f" + std::to_string(i + 1) + "_", inv_monos, taken));
    eta_map.emplace(xs[i], q.eta.back().poly);
    inv_map.emplace(xs[i], q.inv.back().poly);
  }
  std::vector<Polynomial> target(d);
  std::vector<Var> unknowns;
  for (std::size_t i = 0; i < d; ++i) {
    for (auto &[u, m] : q.eta[i].unknowns)
      unknowns.push_back(u);
    for (auto &[u, m] : q.inv[i].unknowns)
      unknowns.push_back(u);
  }
  for (std::size_t pos = 0; pos < d; ++pos) {
    Var x = order[pos];
    std::vector<Var> later(order.begin() + static_cast<long>(pos) + 1, order.end());
    std::size_t i = loop.index_of(x);
    auto monos = monomials_up_to(later, later.empty() ? 0 : upd_deg, 0);
    Template p = make_template("g" + std::to_string(i + 1) + "_", monos, taken);
    for (auto &[u, m] : p.unknowns)
      unknowns.push_back(u);
    Polynomial self = Polynomial(x);
    if (!unit_diagonal) {
      Var c = fresh_var("c" + std::to_string(i + 1), taken);
      taken.insert(c.name());
      unknowns.push_back(c);
      self = self * Polynomial(c);
    }
    target[i] = self + p.poly;
  }

  std::set<Var> xset(xs.begin(), xs.end());
  std::set<Polynomial::TermMap> seen;
  std::vector<Formula> eqs;
  PolyMap a = loop.update_map();
  for (std::size_t i = 0; i < d; ++i) {
    add_identity(q.eta[i].poly.substitute(inv_map), Polynomial(xs[i]), xset, seen, eqs);
    add_identity(q.inv[i].poly.substitute(eta_map), Polynomial(xs[i]), xset, seen, eqs);
    add_identity(q.eta[i].poly.substitute(a), target[i].substitute(eta_map), xset, seen, eqs);
  }
  q.formula.real_consts = unknowns;
  q.formula.body = eqs.empty() ? Formula::top() : Formula::conj(std::move(eqs));
  return q;
}

unsigned ipow(unsigned b, std::size_t e)
{
  unsigned r = 1;
  for (std::size_t k = 0; k < e; ++k)
    r *= b;
  return r;
}

} // namespace

CertificateFormula automorphism_query(const Loop &loop, const std::vector<Var> &order, unsigned delta,
                                      unsigned inverse_degree, unsigned update_degree, bool unit_diagonal)
{
  return build_query(loop, order, delta, inverse_degree, update_degree, unit_diagonal).formula;
}

SearchResult search_automorphism(const Loop &loop, unsigned delta, const SearchOptions &opts)
{
  if (delta < 1)
    throw PreconditionError("degree bound must be at least 1");
  SearchResult res;
  std::size_t d = loop.dim();
  unsigned upd_max = 0;
  for (const auto &u : loop.update)
    upd_max = std::max(upd_max, u.total_degree());
  unsigned inv_deg = ipow(delta, d == 0 ? 0 : d - 1);
  unsigned bound = std::max(1u, inv_deg * std::max(1u, upd_max) * delta);

  std::vector<std::vector<Var>> orders;
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Var> o;
    for (std::size_t k : perm)
      o.push_back(loop.vars[k]);
    orders.push_back(std::move(o));
  } while (orders.size() < opts.max_permutations && std::next_permutation(perm.begin(), perm.end()));
  bool all_orders = orders.size() == [&] {
    std::size_t f = 1;
    for (std::size_t k = 2; k <= d; ++k)
      f *= k;
    return f;
  }();

  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  auto remaining = [&] {
    return opts.budget_seconds - std::chrono::duration<double>(clock::now() - start).count();
  };
  bool inconclusive = false;
  std::vector<bool> refuted(orders.size(), false);
  for (unsigned deg = 1; deg <= bound; ++deg) {
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
      if (refuted[oi])
        continue;
      double left = remaining();
      if (left <= 0) {
        res.reason = "search budget exhausted";
        return res;
      }
      QueryShape q = build_query(loop, orders[oi], delta, inv_deg, deg, opts.unit_diagonal);
      SolverConfig cfg = opts.solver;
      cfg.timeout_seconds = std::min(cfg.timeout_seconds, left);
      SolverOutcome out = run_solver(emit_smtlib(q.formula), cfg);
      ++res.queries;
      if (out.status == SolverStatus::Unsat) {
        if (deg == bound)
          refuted[oi] = true;
        continue;
      }
      if (out.status == SolverStatus::Unknown) {
        inconclusive = true;
        continue;
      }
      auto values = rational_assignment(*out.model, q.formula.real_consts);
      if (!values) {
        inconclusive = true;
        res.reason = "solver model has non-rational values";
        continue;
      }
      Automorphism eta;
      eta.vars = loop.vars;
      for (std::size_t i = 0; i < d; ++i) {
        eta.forward.emplace(loop.vars[i], q.eta[i].poly.substitute([&] {
          PolyMap m;
          for (auto &[u, mono] : q.eta[i].unknowns)
            m.emplace(u, Polynomial(values->at(u)));
          return m;
        }()));
        eta.inverse.emplace(loop.vars[i], q.inv[i].poly.substitute([&] {
          PolyMap m;
          for (auto &[u, mono] : q.inv[i].unknowns)
            m.emplace(u, Polynomial(values->at(u)));
          return m;
        }()));
      }
      if (verify_automorphism(eta)) {
        inconclusive = true;
        res.reason = "solver model failed automorphism validation";
        continue;
      }
      Loop out_loop = apply_tr(loop, eta);
      if (!classify(out_loop).twn()) {
        inconclusive = true;
        res.reason = "transformed loop failed twn validation";
        continue;
      }
      res.status = SearchStatus::Found;
      res.eta = std::move(eta);
      res.loop = std::move(out_loop);
      res.order = orders[oi];
      res.reason.clear();
      return res;
    }
  }
  if (all_orders && std::all_of(refuted.begin(), refuted.end(), [](bool r) { return r; })) {
    res.status = SearchStatus::NotFound;
    res.reason = "no automorphism of degree <= " + std::to_string(delta);
  } else if (res.reason.empty()) {
    res.reason = inconclusive ? "solver returned unknown" : "permutation cap reached";
  }
  return res;
}

// ---------------------------------------------------------------------------

bool is_affine(const Loop &loop)
{
  return std::all_of(loop.update.begin(), loop.update.end(),
                     [](const Polynomial &p) { return p.total_degree() <= 1; });
}

Loop homogenize(const Loop &loop)
{
  if (!is_affine(loop))
    throw PreconditionError("homogenization needs an affine update");
  Var xb = fresh_var("x_b", names_of(loop.vars));
  Loop out = loop;
  out.vars.push_back(xb);
  for (auto &u : out.update) {
    Rational b = u.constant_term();
    u = u - Polynomial(b) + Polynomial(xb).scaled(b);
  }
  out.update.emplace_back(xb);
  out.guard = loop.guard && Formula::conj({Formula(Atom{Polynomial(xb) - 1, Rel::GreaterEq}),
                                           Formula(Atom{1 - Polynomial(xb), Rel::GreaterEq})});
  return out;
}

} // namespace twn
