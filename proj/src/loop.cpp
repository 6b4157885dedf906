#include "twn/loop.hpp"

#include "twn/error.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace twn {

const char *ring_name(Ring r)
{
  switch (r) {
  case Ring::Z:
    return "Z";
  case Ring::Q:
    return "Q";
  case Ring::A:
    return "A";
  case Ring::R:
    return "R";
  }
  return "?";
}

std::optional<Ring> parse_ring(std::string_view s)
{
  if (s == "Z")
    return Ring::Z;
  if (s == "Q")
    return Ring::Q;
  if (s == "A")
    return Ring::A;
  if (s == "R")
    return Ring::R;
  return std::nullopt;
}

PolyMap Loop::update_map() const
{
  PolyMap m;
  for (std::size_t i = 0; i < vars.size(); ++i)
    m.emplace(vars[i], update[i]);
  return m;
}

std::size_t Loop::index_of(Var v) const
{
  auto it = std::find(vars.begin(), vars.end(), v);
  if (it == vars.end())
    throw Error("variable '" + v.name() + "' is not a loop variable");
  return static_cast<std::size_t>(it - vars.begin());
}

Point Loop::step(const Point &c) const
{
  auto env = bind(vars, c);
  Point out;
  out.reserve(update.size());
  for (const auto &u : update)
    out.push_back(u.evaluate(env));
  return out;
}

bool Loop::guard_holds(const Point &c) const { return guard.holds(bind(vars, c)); }

std::string Loop::to_string() const
{
  std::ostringstream out;
  out << "vars:";
  for (Var v : vars)
    out << ' ' << v.name();
  out << "\nring: " << ring_name(ring) << '\n';
  if (!(guard.kind() == Formula::Kind::Const && guard.const_value()))
    out << "guard: " << guard.to_string(vars) << '\n';
  out << "update:\n";
  for (std::size_t i = 0; i < vars.size(); ++i)
    out << "  " << vars[i].name() << " := " << update[i].to_string(vars) << '\n';
  return out.str();
}

Rational self_coefficient(const Polynomial &a, Var x) { return a.coefficient(Monomial(x)); }

void validate_loop(const Loop &loop)
{
  if (loop.update.size() != loop.vars.size())
    throw Error("update has " + std::to_string(loop.update.size()) + " entries for " +
                std::to_string(loop.vars.size()) + " variables");
  std::set<Var> declared(loop.vars.begin(), loop.vars.end());
  if (declared.size() != loop.vars.size())
    throw Error("duplicate loop variable");
  auto check = [&](const std::set<Var> &used, const char *where) {
    for (Var v : used)
      if (!declared.count(v))
        throw Error(std::string("undeclared variable '") + v.name() + "' in " + where);
  };
  check(loop.guard.vars(), "guard");
  for (const auto &u : loop.update)
    check(u.vars(), "update");
}

namespace {

// Tarjan's algorithm; components come out in reverse topological order of
// the condensation (sinks first).
std::vector<std::vector<std::size_t>> strongly_connected(const std::vector<std::vector<bool>> &edge)
{
  std::size_t n = edge.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (!edge[v][w])
        continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0)
      visit(v);
  return comps;
}

} // namespace

Classification classify(const Loop &loop)
{
  const std::size_t d = loop.dim();
  Classification cls;

  // direct[i][j]: x_j occurs in a_i (i ≠ j)
  std::vector<std::vector<bool>> direct(d, std::vector<bool>(d, false));
  for (std::size_t i = 0; i < d; ++i)
    for (Var v : loop.update[i].vars())
      if (std::size_t j = loop.index_of(v); j != i)
        direct[i][j] = true;

  auto closure = direct;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      if (closure[i][k])
        for (std::size_t j = 0; j < d; ++j)
          if (closure[k][j])
            closure[i][j] = true;

  cls.triangular = true;
  for (std::size_t i = 0; i < d; ++i) {
    if (closure[i][i])
      cls.triangular = false;
    for (std::size_t j = 0; j < d; ++j)
      if (closure[i][j] && i != j)
        cls.dep_relation.emplace(loop.vars[i], loop.vars[j]);
  }

  cls.weakly_nonlinear = true;
  bool nonneg = true;
  for (std::size_t i = 0; i < d; ++i) {
    Var x = loop.vars[i];
    for (const auto &[m, c] : loop.update[i].terms())
      if (m.contains(x) && m != Monomial(x))
        cls.weakly_nonlinear = false;
    if (self_coefficient(loop.update[i], x) < 0)
      nonneg = false;
  }
  cls.tnn = cls.twn() && nonneg;

  if (cls.triangular) {
    // Kahn's algorithm, smallest index first among ready variables.
    std::vector<bool> placed(d, false);
    while (cls.topo_order.size() < d) {
      for (std::size_t i = 0; i < d; ++i) {
        if (placed[i])
          continue;
        bool ready = true;
        for (std::size_t j = 0; j < d; ++j)
          if (direct[i][j] && !placed[j])
            ready = false;
        if (ready) {
          placed[i] = true;
          cls.topo_order.push_back(loop.vars[i]);
          break;
        }
      }
    }
  }

  // Solvable partition.
  auto comps = strongly_connected(direct);
  std::size_t k = comps.size();
  std::vector<std::size_t> comp_of(d);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t v : comps[c])
      comp_of[v] = c;
  // Order blocks so that each depends only on later ones: repeatedly take
  // the block (smallest leading index) that no remaining block depends on.
  std::vector<std::vector<bool>> block_dep(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (direct[i][j] && comp_of[i] != comp_of[j])
        block_dep[comp_of[i]][comp_of[j]] = true;
  std::vector<std::size_t> order;
  std::vector<bool> taken(k, false);
  while (order.size() < k) {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < k; ++c) {
      if (taken[c])
        continue;
      bool depended = false;
      for (std::size_t o = 0; o < k; ++o)
        if (!taken[o] && o != c && block_dep[o][c])
          depended = true;
      if (!depended && (!best || comps[c].front() < comps[*best].front()))
        best = c;
    }
    taken[*best] = true;
    order.push_back(*best);
  }
  bool solvable = true;
  for (std::size_t c : order) {
    std::set<Var> block;
    for (std::size_t v : comps[c])
      block.insert(loop.vars[v]);
    for (std::size_t v : comps[c])
      for (const auto &[m, coef] : loop.update[v].terms()) {
        bool touches = std::any_of(m.factors().begin(), m.factors().end(),
                                   [&](const auto &f) { return block.count(f.first) > 0; });
        if (touches && !(m.factors().size() == 1 && m.factors()[0].second == 1))
          solvable = false;
      }
  }
  if (solvable) {
    std::vector<std::vector<Var>> blocks;
    for (std::size_t c : order) {
      std::vector<Var> b;
      for (std::size_t v : comps[c])
        b.push_back(loop.vars[v]);
      blocks.push_back(std::move(b));
    }
    cls.solvable_partition = std::move(blocks);
  }
  return cls;
}

std::string Classification::to_string() const
{
  std::ostringstream out;
  out << (triangular ? "triangular" : "not triangular") << '\n';
  out << (weakly_nonlinear ? "weakly non-linear" : "not weakly non-linear") << '\n';
  out << "twn: " << (twn() ? "yes" : "no") << '\n';
  out << "tnn: " << (tnn ? "yes" : "no") << '\n';
  out << "dependencies: {";
  bool first = true;
  for (const auto &[a, b] : dep_relation) {
    out << (first ? "" : ", ") << '(' << a.name() << ',' << b.name() << ')';
    first = false;
  }
  out << "}\n";
  if (solvable_partition) {
    out << "solvable: ";
    for (std::size_t i = 0; i < solvable_partition->size(); ++i) {
      out << (i ? " " : "") << '[';
      for (std::size_t j = 0; j < (*solvable_partition)[i].size(); ++j)
        out << (j ? " " : "") << (*solvable_partition)[i][j].name();
      out << ']';
    }
    out << '\n';
  } else {
    out << "solvable: no\n";
  }
  if (triangular) {
    out << "order:";
    for (Var v : topo_order)
      out << ' ' << v.name();
    out << '\n';
  }
  return out.str();
}

} // namespace twn
