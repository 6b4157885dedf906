#include "twn/closedform.hpp"

#include "twn/error.hpp"
#include "twn/matrix.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace twn {

bool NCondition::holds(unsigned long n) const
{
  if (equality)
    return n == *equality;
  return !disequalities.count(n);
}

std::optional<unsigned long> NCondition::max_constant() const
{
  if (equality)
    return equality;
  if (disequalities.empty())
    return std::nullopt;
  return *disequalities.rbegin();
}

std::string NCondition::to_string() const
{
  if (equality)
    return "[n=" + std::to_string(*equality) + "]";
  std::string out;
  for (auto c : disequalities)
    out += "[n!=" + std::to_string(c) + "]";
  return out;
}

std::optional<NCondition> conjoin(const NCondition &a, const NCondition &b)
{
  if (a.equality && b.equality)
    return *a.equality == *b.equality ? std::optional(a) : std::nullopt;
  if (a.equality || b.equality) {
    const NCondition &e = a.equality ? a : b;
    const NCondition &o = a.equality ? b : a;
    if (o.disequalities.count(*e.equality))
      return std::nullopt;
    return e;
  }
  NCondition out = a;
  out.disequalities.insert(b.disequalities.begin(), b.disequalities.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Rational npow_value(unsigned long n, unsigned a) { return pow(Rational(n), a); }

PETerm canonical(PETerm t)
{
  if (t.cond.equality) {
    unsigned long k = *t.cond.equality;
    t.coeff = t.coeff.scaled(npow_value(k, t.npow) * pow(t.base, k));
    t.npow = 0;
    t.base = 1;
  }
  return t;
}

bool same_slot(const PETerm &a, const PETerm &b)
{
  return a.cond == b.cond && a.npow == b.npow && a.base == b.base;
}

// Canonical term order for printing and comparison: unconditional terms
// first, then by (base, npow) descending.
bool term_before(const PETerm &a, const PETerm &b)
{
  if (a.cond.empty() != b.cond.empty())
    return a.cond.empty();
  if (a.base != b.base)
    return a.base > b.base;
  if (a.npow != b.npow)
    return a.npow > b.npow;
  return a.cond < b.cond;
}

} // namespace

PolyExp::PolyExp(const Polynomial &p)
{
  if (!p.is_zero())
    terms_.push_back({NCondition{}, p, 0, 1});
}

PolyExp PolyExp::term(const NCondition &cond, const Polynomial &coeff, unsigned npow, const Rational &base)
{
  if (base <= 0)
    throw Error("poly-exponential base must be positive");
  PolyExp p;
  p.add({cond, coeff, npow, base});
  return p;
}

void PolyExp::add(const PETerm &raw)
{
  if (raw.coeff.is_zero())
    return;
  PETerm t = canonical(raw);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t, term_before);
  if (it != terms_.end() && same_slot(*it, t)) {
    it->coeff += t.coeff;
    if (it->coeff.is_zero())
      terms_.erase(it);
    return;
  }
  terms_.insert(it, std::move(t));
}

PolyExp &PolyExp::operator+=(const PolyExp &o)
{
  for (const auto &t : o.terms_)
    add(t);
  return *this;
}

PolyExp operator*(const PolyExp &a, const PolyExp &b)
{
  PolyExp out;
  for (const auto &x : a.terms_)
    for (const auto &y : b.terms_) {
      auto cond = conjoin(x.cond, y.cond);
      if (!cond)
        continue;
      out.add({*cond, x.coeff * y.coeff, x.npow + y.npow, x.base * y.base});
    }
  return out;
}

PolyExp PolyExp::scaled(const Polynomial &c) const
{
  PolyExp out;
  for (const auto &t : terms_)
    out.add({t.cond, t.coeff * c, t.npow, t.base});
  return out;
}

PolyExp PolyExp::pow(unsigned e) const
{
  PolyExp result(Polynomial(1));
  PolyExp b = *this;
  while (e) {
    if (e & 1)
      result = result * b;
    e >>= 1;
    if (e)
      b = b * b;
  }
  return result;
}

Polynomial PolyExp::at(unsigned long n) const
{
  Polynomial out;
  for (const auto &t : terms_)
    if (t.cond.holds(n))
      out += t.coeff.scaled(npow_value(n, t.npow) * twn::pow(t.base, n));
  return out;
}

std::optional<unsigned long> PolyExp::max_condition_constant() const
{
  std::optional<unsigned long> m;
  for (const auto &t : terms_)
    if (auto c = t.cond.max_constant())
      m = m ? std::max(*m, *c) : *c;
  return m;
}

namespace {

std::string growth(unsigned npow, const Rational &base)
{
  std::string out;
  if (npow == 1)
    out += "n";
  else if (npow > 1)
    out += "n^" + std::to_string(npow);
  if (base != 1) {
    std::string b = base.get_den() == 1 ? to_string(base) : "(" + to_string(base) + ")";
    out += (out.empty() ? "" : "*") + b + "^n";
  }
  return out;
}

std::string term_text(const std::string &cond, const Polynomial &coeff, unsigned npow, const Rational &base,
                      const VarOrder &order)
{
  std::string g = growth(npow, base);
  std::string c = coeff.to_string(order);
  std::string out = cond;
  if (g.empty())
    return out + (cond.empty() || coeff.size() == 1 ? c : "(" + c + ")");
  if (!out.empty())
    out += "*";
  if (coeff == Polynomial(1))
    return out + g;
  return out + "(" + c + ")*" + g;
}

} // namespace

std::string PolyExp::to_string(const VarOrder &order) const
{
  if (terms_.empty())
    return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto &t = terms_[i];
    out += (i ? " + " : "") + term_text(t.cond.to_string(), t.coeff, t.npow, t.base, order);
  }
  return out;
}

bool operator==(const PolyExp &a, const PolyExp &b)
{
  if (a.terms_.size() != b.terms_.size())
    return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!same_slot(a.terms_[i], b.terms_[i]) || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  }
  return true;
}

Rational eval_polyexp(const PolyExp &p, const std::vector<Var> &vars, const Point &c, unsigned long n)
{
  auto env = bind(vars, c);
  Rational out = 0;
  for (const auto &t : p.terms())
    if (t.cond.holds(n))
      out += t.coeff.evaluate(env) * npow_value(n, t.npow) * pow(t.base, n);
  return out;
}

// ---------------------------------------------------------------------------

PolyExp NPE::to_polyexp() const
{
  PolyExp p;
  for (const auto &t : terms)
    p.add({NCondition{}, t.coeff, t.npow, t.base});
  return p;
}

NPE NPE::at_point(const std::map<Var, Rational> &point) const
{
  NPE out;
  for (const auto &t : terms) {
    Rational v = t.coeff.evaluate(point);
    if (v != 0)
      out.terms.push_back({Polynomial(v), t.npow, t.base});
  }
  return out;
}

Rational NPE::eval(const std::map<Var, Rational> &point, unsigned long n) const
{
  Rational out = 0;
  for (const auto &t : terms)
    out += t.coeff.evaluate(point) * npow_value(n, t.npow) * pow(t.base, n);
  return out;
}

std::string NPE::to_string(const VarOrder &order) const
{
  if (terms.empty())
    return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i)
    out += (i ? " + " : "") + term_text("", terms[i].coeff, terms[i].npow, terms[i].base, order);
  return out;
}

NPE normalize(const PolyExp &q)
{
  std::map<std::pair<Rational, unsigned>, Polynomial, std::greater<>> merged;
  for (const auto &t : q.terms()) {
    if (t.cond.equality)
      continue;
    merged[{t.base, t.npow}] += t.coeff;
  }
  NPE out;
  for (const auto &[key, coeff] : merged)
    if (!coeff.is_zero())
      out.terms.push_back({coeff, key.second, key.first});
  return out;
}

PolyExp substitute_polyexp(const Polynomial &p, const std::vector<Var> &vars, const std::vector<PolyExp> &q)
{
  std::map<Var, std::size_t> idx;
  for (std::size_t i = 0; i < vars.size(); ++i)
    idx[vars[i]] = i;
  std::map<std::pair<std::size_t, unsigned>, PolyExp> powers;
  auto power = [&](std::size_t i, unsigned e) -> const PolyExp & {
    auto key = std::make_pair(i, e);
    auto it = powers.find(key);
    if (it != powers.end())
      return it->second;
    PolyExp v = e == 1 ? q[i] : q[i].pow(e);
    return powers.emplace(key, std::move(v)).first->second;
  };
  PolyExp out;
  for (const auto &[m, c] : p.terms()) {
    PolyExp t{Polynomial(c)};
    Monomial rest;
    for (const auto &[v, e] : m.factors()) {
      auto it = idx.find(v);
      if (it == idx.end())
        rest = rest * Monomial(v, e);
      else
        t = t * power(it->second, e);
    }
    if (!rest.is_one())
      t = t.scaled(Polynomial(rest));
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------

Loop chain(const Loop &loop)
{
  Loop out = loop;
  PolyMap a = loop.update_map();
  out.guard = loop.guard && loop.guard.substitute(a);
  for (auto &u : out.update)
    u = u.substitute(a);
  return out;
}

namespace {

// Σ_{k<n} k^a as a polynomial in n, coefficients low to high.
std::vector<Rational> faulhaber(unsigned a)
{
  static thread_local std::vector<std::vector<Rational>> memo;
  while (memo.size() <= a) {
    unsigned j = static_cast<unsigned>(memo.size());
    // n^{j+1} = Σ_{i≤j} C(j+1,i)·F_i(n)
    std::vector<Rational> f(j + 2, 0);
    f[j + 1] = 1;
    for (unsigned i = 0; i < j; ++i) {
      Rational b = binomial(j + 1, i);
      for (std::size_t t = 0; t < memo[i].size(); ++t)
        f[t] -= b * memo[i][t];
    }
    for (auto &x : f)
      x /= (j + 1);
    memo.push_back(std::move(f));
  }
  return memo[a];
}

// Adds cond·scale·(Σ_t poly[t]·n^t)·base^n.
void add_poly_times(PolyExp &out, const NCondition &cond, const Rational &scale, const std::vector<Rational> &poly,
                    const Rational &base)
{
  for (std::size_t t = 0; t < poly.size(); ++t)
    if (poly[t] != 0)
      out.add({cond, Polynomial(scale * poly[t]), static_cast<unsigned>(t), base});
}

// Coefficients of (n + s)^a.
std::vector<Rational> shifted_power(unsigned a, const Rational &s)
{
  std::vector<Rational> out(a + 1);
  for (unsigned t = 0; t <= a; ++t)
    out[t] = binomial(a, t) * pow(s, a - t);
  return out;
}

} // namespace

PolyExp geometric_poly_sum(const Rational &c, const Rational &b, unsigned a)
{
  if (c < 0 || b <= 0)
    throw PreconditionError("geometric_poly_sum needs c >= 0 and b > 0");
  PolyExp out;
  if (c == 0) {
    // Only k = n−1 contributes: ⟦n≠0⟧·(n−1)^a·b^{n−1}.
    add_poly_times(out, NCondition::neq(0), 1 / b, shifted_power(a, -1), b);
    return out;
  }
  if (b == c) {
    add_poly_times(out, {}, 1 / c, faulhaber(a), c);
    return out;
  }
  // S(n) = P(n)·bⁿ + K·cⁿ with b·P(n+1) − c·P(n) = nᵃ and P(0) + K = 0.
  std::size_t m = a + 2; // p_0..p_a, K
  RatMatrix sys(a + 2, m);
  std::vector<Rational> rhs(a + 2, 0);
  for (unsigned j = 0; j <= a; ++j) {
    // contribution of p_j·(b·(n+1)^j − c·n^j) to the coefficient of n^t
    for (unsigned t = 0; t <= j; ++t)
      sys(t, j) += b * binomial(j, t);
    sys(j, j) -= c;
  }
  rhs[a] = 1;
  sys(a + 1, 0) = 1;
  sys(a + 1, a + 1) = 1;
  auto sol = solve_linear(sys, rhs);
  if (!sol)
    throw Error("geometric_poly_sum: singular system");
  std::vector<Rational> p(sol->begin(), sol->begin() + static_cast<long>(a) + 1);
  add_poly_times(out, {}, 1, p, b);
  out.add({NCondition{}, Polynomial((*sol)[a + 1]), 0, c});
  return out;
}

std::vector<PolyExp> closed_form(const Loop &loop)
{
  Classification cls = classify(loop);
  if (!cls.tnn)
    throw PreconditionError("closed forms need a tnn-loop");
  std::size_t d = loop.dim();
  std::vector<PolyExp> q(d);
  std::vector<bool> done(d, false);
  for (Var x : cls.topo_order) {
    std::size_t i = loop.index_of(x);
    const Polynomial &a = loop.update[i];
    Rational c = self_coefficient(a, x);
    Polynomial p = a - Polynomial(Monomial(x), c);

    // r(n) = p(q(n)); all variables of p are already solved.
    std::vector<Var> known;
    std::vector<PolyExp> known_q;
    for (std::size_t j = 0; j < d; ++j)
      if (done[j]) {
        known.push_back(loop.vars[j]);
        known_q.push_back(q[j]);
      }
    PolyExp r = substitute_polyexp(p, known, known_q);
    auto maxc = r.max_condition_constant();
    unsigned long C = maxc ? *maxc + 1 : 0;

    PolyExp result;
    // Prefix values x^(0..C) by direct iteration.
    Polynomial value(x);
    for (unsigned long k = 0; k < C; ++k) {
      result.add({NCondition::eq(k), value, 0, 1});
      value = value.scaled(c) + r.at(k);
    }
    // value = x^(C); for n ≥ C: c^{n−C}·x^(C) + Σ_{k=C}^{n−1} c^{n−1−k}·r(k).
    PolyExp general;
    if (c == 0)
      general.add({NCondition::eq(C), value, 0, 1});
    else
      general.add({NCondition{}, value.scaled(1 / pow(c, C)), 0, c});

    NPE rn = normalize(r); // r agrees with its normalization for k ≥ C
    for (const auto &t : rn.terms) {
      // Σ_{j<m} c^{m−1−j}·(C+j)^a·b^{C+j} with m = n − C
      PolyExp in_m;
      auto shift = shifted_power(t.npow, Rational(C));
      for (unsigned s = 0; s <= t.npow; ++s)
        if (shift[s] != 0)
          in_m += geometric_poly_sum(c, t.base, s).scaled(Polynomial(shift[s] * pow(t.base, C)));
      // Back to n: m^s·βᵐ = (n−C)^s·β^{−C}·βⁿ; ⟦m≠0⟧ = ⟦n≠C⟧.
      for (const auto &u : in_m.terms()) {
        NCondition cond;
        for (auto v : u.cond.disequalities)
          cond.disequalities.insert(v + C);
        if (u.cond.equality)
          cond.equality = *u.cond.equality + C;
        auto back = shifted_power(u.npow, -Rational(C));
        Rational scale = 1 / pow(u.base, C);
        for (unsigned s = 0; s <= u.npow; ++s)
          if (back[s] != 0)
            general.add({cond, u.coeff * t.coeff.scaled(back[s] * scale), s, u.base});
      }
    }
    NCondition tail;
    for (unsigned long k = 0; k < C; ++k)
      tail.disequalities.insert(k);
    for (const auto &g : general.terms())
      if (auto cond = conjoin(g.cond, tail))
        result.add({*cond, g.coeff, g.npow, g.base});
    q[i] = std::move(result);
    done[i] = true;
  }
  return q;
}

} // namespace twn
