#include "twn/polynomial.hpp"

#include "twn/error.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace twn {

namespace {

struct InternTable {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, std::uint32_t> ids;
};

InternTable &interned()
{
  static InternTable table;
  return table;
}

} // namespace

Var::Var(std::string_view name)
{
  InternTable &t = interned();
  std::string key(name);
  {
    std::shared_lock lock(t.mutex);
    auto it = t.ids.find(key);
    if (it != t.ids.end()) {
      id_ = it->second;
      return;
    }
  }
  std::unique_lock lock(t.mutex);
  auto [it, inserted] = t.ids.emplace(key, static_cast<std::uint32_t>(t.names.size()));
  if (inserted)
    t.names.push_back(key);
  id_ = it->second;
}

const std::string &Var::name() const
{
  InternTable &t = interned();
  std::shared_lock lock(t.mutex);
  return t.names[id_];
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Var v, unsigned exp)
{
  if (exp > 0)
    factors_.emplace_back(v, exp);
}

Monomial Monomial::from_factors(std::vector<Factor> factors)
{
  std::sort(factors.begin(), factors.end(),
            [](const Factor &a, const Factor &b) { return a.first < b.first; });
  Monomial m;
  for (const auto &[v, e] : factors) {
    if (e == 0)
      continue;
    if (!m.factors_.empty() && m.factors_.back().first == v)
      m.factors_.back().second += e;
    else
      m.factors_.emplace_back(v, e);
  }
  return m;
}

unsigned Monomial::degree() const
{
  unsigned d = 0;
  for (const auto &f : factors_)
    d += f.second;
  return d;
}

unsigned Monomial::degree_in(Var v) const
{
  for (const auto &f : factors_)
    if (f.first == v)
      return f.second;
  return 0;
}

Monomial Monomial::operator*(const Monomial &other) const
{
  Monomial r;
  r.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin(), b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first))
      r.factors_.push_back(*a++);
    else if (a == factors_.end() || b->first < a->first)
      r.factors_.push_back(*b++);
    else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return r;
}

Monomial Monomial::without(Var v) const
{
  Monomial r;
  for (const auto &f : factors_)
    if (f.first != v)
      r.factors_.push_back(f);
  return r;
}

Monomial Monomial::restricted_to(const std::set<Var> &keep) const
{
  Monomial r;
  for (const auto &f : factors_)
    if (keep.count(f.first))
      r.factors_.push_back(f);
  return r;
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rational &c)
{
  if (c != 0)
    terms_.emplace(Monomial(), c);
}

Polynomial::Polynomial(Var v) { terms_.emplace(Monomial(v), Rational(1)); }

Polynomial::Polynomial(const Monomial &m, const Rational &c)
{
  if (c != 0)
    terms_.emplace(m, c);
}

void Polynomial::add_term(const Monomial &m, const Rational &c)
{
  if (c == 0)
    return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0)
      terms_.erase(it);
  }
}

bool Polynomial::is_constant() const
{
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_term() const { return coefficient(Monomial()); }

Rational Polynomial::coefficient(const Monomial &m) const
{
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Polynomial::total_degree() const
{
  unsigned d = 0;
  for (const auto &[m, c] : terms_)
    d = std::max(d, m.degree());
  return d;
}

unsigned Polynomial::degree_in(Var v) const
{
  unsigned d = 0;
  for (const auto &[m, c] : terms_)
    d = std::max(d, m.degree_in(v));
  return d;
}

std::set<Var> Polynomial::vars() const
{
  std::set<Var> vs;
  for (const auto &[m, c] : terms_)
    for (const auto &f : m.factors())
      vs.insert(f.first);
  return vs;
}

Polynomial Polynomial::operator-() const
{
  Polynomial r = *this;
  for (auto &[m, c] : r.terms_)
    c = -c;
  return r;
}

Polynomial &Polynomial::operator+=(const Polynomial &o)
{
  for (const auto &[m, c] : o.terms_)
    add_term(m, c);
  return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &o)
{
  for (const auto &[m, c] : o.terms_)
    add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b)
{
  Polynomial r;
  for (const auto &[ma, ca] : a.terms_)
    for (const auto &[mb, cb] : b.terms_)
      r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial &Polynomial::operator*=(const Polynomial &o)
{
  *this = *this * o;
  return *this;
}

Polynomial Polynomial::pow(unsigned exp) const
{
  Polynomial result(1);
  Polynomial base = *this;
  while (exp > 0) {
    if (exp & 1U)
      result *= base;
    exp >>= 1U;
    if (exp > 0)
      base = base * base;
  }
  return result;
}

Polynomial Polynomial::scaled(const Rational &c) const
{
  if (c == 0)
    return {};
  Polynomial r = *this;
  for (auto &[m, k] : r.terms_)
    k *= c;
  return r;
}

Polynomial Polynomial::substitute(const std::map<Var, Polynomial> &bindings) const
{
  // Cache powers of each bound image; substitution results are reused across terms.
  std::map<std::pair<Var, unsigned>, Polynomial> powers;
  auto power_of = [&](Var v, unsigned e) -> const Polynomial & {
    auto key = std::make_pair(v, e);
    auto it = powers.find(key);
    if (it != powers.end())
      return it->second;
    const Polynomial &img = bindings.at(v);
    Polynomial p = e == 1 ? img : img.pow(e);
    return powers.emplace(key, std::move(p)).first->second;
  };

  Polynomial result;
  for (const auto &[m, c] : terms_) {
    Monomial kept;
    Polynomial factor(c);
    std::vector<Monomial::Factor> free;
    for (const auto &[v, e] : m.factors()) {
      if (bindings.count(v))
        factor *= power_of(v, e);
      else
        free.emplace_back(v, e);
    }
    if (!free.empty())
      factor *= Polynomial(Monomial::from_factors(std::move(free)));
    result += factor;
  }
  return result;
}

Rational Polynomial::evaluate(const std::map<Var, Rational> &point) const
{
  Rational sum = 0;
  for (const auto &[m, c] : terms_) {
    Rational t = c;
    for (const auto &[v, e] : m.factors()) {
      auto it = point.find(v);
      if (it == point.end())
        throw Error("evaluate: unbound variable " + v.name());
      t *= twn::pow(it->second, e);
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::derivative(Var v) const
{
  Polynomial r;
  for (const auto &[m, c] : terms_) {
    unsigned e = m.degree_in(v);
    if (e == 0)
      continue;
    std::vector<Monomial::Factor> fs = m.factors();
    for (auto &f : fs)
      if (f.first == v)
        f.second -= 1;
    r.add_term(Monomial::from_factors(std::move(fs)), c * e);
  }
  return r;
}

std::map<Monomial, Polynomial> Polynomial::coefficients_wrt(const std::set<Var> &main) const
{
  std::map<Monomial, Polynomial> out;
  for (const auto &[m, c] : terms_) {
    std::vector<Monomial::Factor> in, rest;
    for (const auto &f : m.factors())
      (main.count(f.first) ? in : rest).push_back(f);
    out[Monomial::from_factors(std::move(in))].add_term(Monomial::from_factors(std::move(rest)), c);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// ---------------------------------------------------------------- printing

namespace {

std::pair<std::size_t, std::string> var_key(Var v, const VarOrder &order)
{
  auto it = std::find(order.begin(), order.end(), v);
  if (it != order.end())
    return {static_cast<std::size_t>(it - order.begin()), std::string()};
  return {order.size(), v.name()};
}

} // namespace

bool grlex_before(const Monomial &a, const Monomial &b, const VarOrder &order)
{
  if (a.degree() != b.degree())
    return a.degree() > b.degree();
  // Lex: compare exponents variable by variable in the given order.
  std::vector<std::pair<std::pair<std::size_t, std::string>, unsigned>> ea, eb;
  for (const auto &[v, e] : a.factors())
    ea.emplace_back(var_key(v, order), e);
  for (const auto &[v, e] : b.factors())
    eb.emplace_back(var_key(v, order), e);
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  std::size_t i = 0;
  for (; i < ea.size() && i < eb.size(); ++i) {
    if (ea[i].first != eb[i].first)
      return ea[i].first < eb[i].first; // a has an earlier variable
    if (ea[i].second != eb[i].second)
      return ea[i].second > eb[i].second;
  }
  return i < ea.size() && i == eb.size();
}

std::string Polynomial::to_string(const VarOrder &order) const
{
  if (terms_.empty())
    return "0";
  std::vector<const TermMap::value_type *> sorted;
  for (const auto &t : terms_)
    sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(), [&](auto *x, auto *y) {
    return grlex_before(x->first, y->first, order);
  });

  std::string out;
  bool first = true;
  for (const auto *t : sorted) {
    const Monomial &m = t->first;
    Rational c = t->second;
    bool negative = c < 0;
    if (negative)
      c = -c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;

    // Factors printed in the requested variable order.
    std::vector<Monomial::Factor> fs = m.factors();
    std::sort(fs.begin(), fs.end(), [&](const auto &x, const auto &y) {
      return var_key(x.first, order) < var_key(y.first, order);
    });
    std::string body;
    for (const auto &[v, e] : fs) {
      if (!body.empty())
        body += "*";
      body += v.name();
      if (e > 1)
        body += "^" + std::to_string(e);
    }
    if (body.empty())
      out += twn::to_string(c);
    else if (c == 1)
      out += body;
    else
      out += twn::to_string(c) + "*" + body;
  }
  return out;
}

std::vector<Monomial> monomials_up_to(const std::vector<Var> &vars, unsigned degree,
                                      unsigned min_degree)
{
  std::vector<Monomial> out;
  std::vector<unsigned> exps(vars.size(), 0);
  // Enumerate exponent vectors with total degree <= degree.
  auto rec = [&](auto &&self, std::size_t i, unsigned left) -> void {
    if (i == vars.size()) {
      std::vector<Monomial::Factor> fs;
      unsigned total = 0;
      for (std::size_t k = 0; k < vars.size(); ++k) {
        fs.emplace_back(vars[k], exps[k]);
        total += exps[k];
      }
      if (total >= min_degree)
        out.push_back(Monomial::from_factors(std::move(fs)));
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      exps[i] = e;
      self(self, i + 1, left - e);
    }
    exps[i] = 0;
  };
  rec(rec, 0, degree);
  std::stable_sort(out.begin(), out.end(),
                   [&](const Monomial &a, const Monomial &b) { return grlex_before(b, a, vars); });
  return out;
}

std::map<Var, Rational> bind(const std::vector<Var> &vars, const Point &values)
{
  if (vars.size() != values.size())
    throw Error("bind: dimension mismatch");
  std::map<Var, Rational> m;
  for (std::size_t i = 0; i < vars.size(); ++i)
    m.emplace(vars[i], values[i]);
  return m;
}

} // namespace twn
