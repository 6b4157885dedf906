#include "twn/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace twn {

SimTrace simulate(const Loop &loop, const Point &c, std::size_t steps)
{
  if (c.size() != loop.dim())
    throw Error("start point has the wrong dimension");
  SimTrace t;
  t.points.push_back(c);
  t.guard_truth.push_back(loop.guard_holds(c));
  for (std::size_t k = 0; k < steps; ++k) {
    t.points.push_back(loop.step(t.points.back()));
    t.guard_truth.push_back(loop.guard_holds(t.points.back()));
  }
  return t;
}

Rational random_rational(std::mt19937_64 &rng, int height)
{
  std::uniform_int_distribution<int> num(-height, height), den(1, height);
  return make_rational(num(rng), den(rng));
}

Point random_point(std::mt19937_64 &rng, std::size_t d, int height)
{
  Point p;
  for (std::size_t i = 0; i < d; ++i)
    p.push_back(random_rational(rng, height));
  return p;
}

std::optional<ClosedFormMismatch> check_closed_form(const Loop &loop, const std::vector<PolyExp> &q,
                                                    std::size_t samples, unsigned long horizon,
                                                    std::uint64_t seed)
{
  if (q.size() != loop.dim())
    throw Error("closed form has the wrong dimension");
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    Point c = random_point(rng, loop.dim());
    Point x = c;
    for (unsigned long n = 0; n <= horizon; ++n) {
      for (std::size_t i = 0; i < loop.dim(); ++i) {
        Rational v = eval_polyexp(q[i], loop.vars, c, n);
        if (v != x[i])
          return ClosedFormMismatch{c, n, i, x[i], v};
      }
      if (n < horizon)
        x = loop.step(x);
    }
  }
  return std::nullopt;
}

namespace {

// p(n)·Lⁿ·D with integer data, so signs can be read off big integers.
struct IntegerNPE {
  std::vector<Integer> coeff;
  std::vector<unsigned> npow;
  std::vector<Integer> base;
};

IntegerNPE integralize(const NPE &p, const std::map<Var, Rational> &point)
{
  NPE num = p.at_point(point);
  Integer l = 1, d = 1;
  for (const auto &t : num.terms) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.base.get_den().get_mpz_t());
    Rational c = t.coeff.constant_term();
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den().get_mpz_t());
  }
  IntegerNPE out;
  for (const auto &t : num.terms) {
    Rational c = t.coeff.constant_term() * d;
    Rational b = t.base * l;
    out.coeff.push_back(c.get_num());
    out.npow.push_back(t.npow);
    out.base.push_back(b.get_num());
  }
  return out;
}

// Sign of p(n) for n = m..m+len.
std::vector<int> window_signs(const IntegerNPE &p, unsigned long m, unsigned len)
{
  std::size_t k = p.coeff.size();
  std::vector<Integer> bpow(k);
  for (std::size_t j = 0; j < k; ++j)
    mpz_pow_ui(bpow[j].get_mpz_t(), p.base[j].get_mpz_t(), m);
  std::vector<int> out;
  for (unsigned s = 0; s <= len; ++s) {
    unsigned long n = m + s;
    Integer total = 0, npow_val;
    for (std::size_t j = 0; j < k; ++j) {
      mpz_ui_pow_ui(npow_val.get_mpz_t(), n, p.npow[j]);
      total += p.coeff[j] * npow_val * bpow[j];
      bpow[j] *= p.base[j];
    }
    out.push_back(sgn(total));
  }
  return out;
}

} // namespace

std::optional<Stabilization> find_stabilization(const NPE &p, const std::map<Var, Rational> &point,
                                                unsigned long cap)
{
  IntegerNPE ip = integralize(p, point);
  std::vector<std::pair<unsigned long, std::optional<int>>> windows;
  for (unsigned long m = 1; m <= cap; m *= 2) {
    auto signs = window_signs(ip, m, 16);
    bool constant = std::all_of(signs.begin(), signs.end(), [&](int s) { return s == signs[0]; });
    windows.emplace_back(m, constant ? std::optional<int>(signs[0]) : std::nullopt);
  }
  if (windows.empty() || !windows.back().second)
    return std::nullopt;
  int sign = *windows.back().second;
  unsigned long n0 = windows.back().first;
  for (auto it = windows.rbegin(); it != windows.rend(); ++it) {
    if (it->second != sign)
      break;
    n0 = it->first;
  }
  return Stabilization{n0, sign};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Var> numbered_vars(std::size_t d)
{
  std::vector<Var> vs;
  for (std::size_t i = 1; i <= d; ++i)
    vs.emplace_back("x" + std::to_string(i));
  return vs;
}

Polynomial random_poly(std::mt19937_64 &rng, const std::vector<Var> &vars, unsigned degree, int bound,
                       unsigned min_degree = 0)
{
  std::uniform_int_distribution<int> coin(0, 1), coef(-bound, bound);
  Polynomial p;
  for (const auto &m : monomials_up_to(vars, degree, min_degree))
    if (coin(rng))
      p += Polynomial(m, coef(rng));
  return p;
}

Loop random_triangular(std::uint64_t seed, std::size_t d, unsigned max_degree, int bound, bool nonneg)
{
  std::mt19937_64 rng(seed);
  Loop loop;
  loop.vars = numbered_vars(d);
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  loop.update.assign(d, Polynomial());
  std::uniform_int_distribution<int> self(nonneg ? 0 : -bound, bound);
  for (std::size_t pos = 0; pos < d; ++pos) {
    std::vector<Var> later;
    for (std::size_t k = pos + 1; k < d; ++k)
      later.push_back(loop.vars[perm[k]]);
    Var x = loop.vars[perm[pos]];
    Polynomial rest = later.empty() ? Polynomial(std::uniform_int_distribution<int>(-bound, bound)(rng))
                                    : random_poly(rng, later, max_degree, bound);
    loop.update[perm[pos]] = Polynomial(x).scaled(self(rng)) + rest;
  }
  loop.guard = random_guard(rng, loop.vars, 2, bound);
  return loop;
}

} // namespace

Formula random_guard(std::mt19937_64 &rng, const std::vector<Var> &vars, unsigned depth, int coeff_bound)
{
  std::uniform_int_distribution<int> kind(0, depth == 0 ? 0 : 2), width(2, 3), rel(0, 1);
  int k = kind(rng);
  if (k == 0) {
    Polynomial p;
    while (p.is_zero())
      p = random_poly(rng, vars, 2, coeff_bound);
    return Formula(Atom{p, rel(rng) ? Rel::Greater : Rel::GreaterEq});
  }
  std::vector<Formula> cs;
  int w = width(rng);
  for (int i = 0; i < w; ++i)
    cs.push_back(random_guard(rng, vars, depth - 1, coeff_bound));
  return k == 1 ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
}

Loop random_tnn_loop(std::uint64_t seed, std::size_t d, unsigned max_degree, int coeff_bound)
{
  return random_triangular(seed, d, max_degree, coeff_bound, true);
}

Loop random_twn_loop(std::uint64_t seed, std::size_t d, unsigned max_degree, int coeff_bound)
{
  return random_triangular(seed, d, max_degree, coeff_bound, false);
}

Loop random_linear_loop(std::uint64_t seed, std::size_t d, int coeff_bound)
{
  std::mt19937_64 rng(seed);
  Loop loop;
  loop.vars = numbered_vars(d);
  for (std::size_t i = 0; i < d; ++i)
    loop.update.push_back(random_poly(rng, loop.vars, 1, coeff_bound));
  loop.guard = random_guard(rng, loop.vars, 2, coeff_bound);
  return loop;
}

Automorphism random_linear_automorphism(std::uint64_t seed, const std::vector<Var> &vars, int entry_bound)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> e(-entry_bound, entry_bound);
  std::size_t d = vars.size();
  while (true) {
    RatMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        m(r, c) = e(rng);
    if (m.inverse())
      return Automorphism::linear(vars, m);
  }
}

NPE random_npe(std::uint64_t seed, const std::vector<Var> &vars, std::size_t max_terms)
{
  std::mt19937_64 rng(seed);
  static const Rational bases[] = {make_rational(1, 2), 1, 2, 3};
  std::uniform_int_distribution<int> nterms(0, static_cast<int>(max_terms)), bi(0, 3), ai(0, 3);
  std::map<std::pair<Rational, unsigned>, Polynomial, std::greater<>> terms;
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    Polynomial c = random_poly(rng, vars, 2, 3);
    if (!c.is_zero())
      terms[{bases[bi(rng)], static_cast<unsigned>(ai(rng))}] += c;
  }
  NPE out;
  for (const auto &[key, c] : terms)
    if (!c.is_zero())
      out.terms.push_back({c, key.second, key.first});
  return out;
}

std::optional<std::size_t> validate_witness_prefix(const Loop &loop, const Point &w, std::size_t max_prefix,
                                                   std::size_t window, std::size_t max_bits)
{
  Point x = w;
  std::size_t run = 0; // consecutive guard successes ending at the current index
  for (std::size_t n = 0; n <= max_prefix + window; ++n) {
    std::size_t bits = 0;
    for (const auto &v : x)
      bits += bit_size(v);
    if (bits > max_bits)
      return std::nullopt;
    run = loop.guard_holds(x) ? run + 1 : 0;
    if (run == window + 1)
      return n - window;
    if (n < max_prefix + window)
      x = loop.step(x);
  }
  return std::nullopt;
}

} // namespace twn
