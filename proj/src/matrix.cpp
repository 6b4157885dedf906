#include "twn/matrix.hpp"

#include "twn/error.hpp"

#include <algorithm>
#include <sstream>

namespace twn {

// ---------------------------------------------------------------- RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0))
{
}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
{
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto &r : rows) {
    if (r.size() != cols_)
      throw Error("ragged matrix literal");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

RatMatrix RatMatrix::identity(std::size_t n)
{
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix &o) const
{
  if (cols_ != o.rows_)
    throw Error("matrix product: dimension mismatch");
  RatMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational &a = (*this)(i, k);
      if (a == 0)
        continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        r(i, j) += a * o(k, j);
    }
  return r;
}

RatMatrix RatMatrix::operator+(const RatMatrix &o) const
{
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error("matrix sum: dimension mismatch");
  RatMatrix r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    r.entries_[i] += o.entries_[i];
  return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix &o) const { return *this + o.scaled(-1); }

RatMatrix RatMatrix::scaled(const Rational &c) const
{
  RatMatrix r = *this;
  for (auto &e : r.entries_)
    e *= c;
  return r;
}

RatMatrix RatMatrix::transposed() const
{
  RatMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      r(j, i) = (*this)(i, j);
  return r;
}

std::vector<Rational> RatMatrix::apply(const std::vector<Rational> &v) const
{
  if (v.size() != cols_)
    throw Error("matrix-vector product: dimension mismatch");
  std::vector<Rational> r(rows_, Rational(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      r[i] += (*this)(i, j) * v[j];
  return r;
}

Rational RatMatrix::trace() const
{
  Rational t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    t += (*this)(i, i);
  return t;
}

std::vector<std::size_t> row_reduce(RatMatrix &m)
{
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0)
      ++p;
    if (p == m.rows())
      continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j)
        std::swap(m(p, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (std::size_t j = 0; j < m.cols(); ++j)
      m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0)
        continue;
      Rational f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t RatMatrix::rank() const
{
  RatMatrix m = *this;
  return row_reduce(m).size();
}

bool RatMatrix::is_zero() const
{
  return std::all_of(entries_.begin(), entries_.end(), [](const Rational &e) { return e == 0; });
}

bool RatMatrix::is_upper_triangular() const
{
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < std::min(i, cols_); ++j)
      if ((*this)(i, j) != 0)
        return false;
  return true;
}

std::vector<std::vector<Rational>> RatMatrix::nullspace() const
{
  RatMatrix m = *this;
  auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots)
    is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free])
      continue;
    std::vector<Rational> v(cols_, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatMatrix> RatMatrix::inverse() const
{
  if (!square())
    return std::nullopt;
  std::size_t n = rows_;
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1)
    return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      inv(i, j) = aug(i, n + j);
  return inv;
}

std::string RatMatrix::to_string() const
{
  std::ostringstream s;
  s << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    s << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j)
      s << (j ? ", " : "") << twn::to_string((*this)(i, j));
    s << "]";
  }
  s << "]";
  return s.str();
}

std::optional<std::vector<Rational>> solve_linear(const RatMatrix &a, const std::vector<Rational> &b)
{
  if (b.size() != a.rows())
    throw Error("solve_linear: dimension mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j)
      aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == a.cols())
    return std::nullopt;
  std::vector<Rational> x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x[pivots[r]] = aug(r, a.cols());
  return x;
}

// ------------------------------------------------------------------ UniPoly

UniPoly::UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UniPoly::trim()
{
  while (!c_.empty() && c_.back() == 0)
    c_.pop_back();
}

std::optional<UniPoly> UniPoly::from_polynomial(const Polynomial &p, Var v)
{
  std::vector<Rational> c(p.degree_in(v) + 1, Rational(0));
  for (const auto &[m, k] : p.terms()) {
    if (m.degree() != m.degree_in(v))
      return std::nullopt;
    c[m.degree_in(v)] = k;
  }
  return UniPoly(std::move(c));
}

Polynomial UniPoly::to_polynomial(Var v) const
{
  Polynomial p;
  for (std::size_t i = 0; i < c_.size(); ++i)
    p += Polynomial(Monomial(v, static_cast<unsigned>(i)), c_[i]);
  return p;
}

Rational UniPoly::eval(const Rational &x) const
{
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    r = r * x + *it;
  return r;
}

UniPoly UniPoly::derivative() const
{
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i)
    d.push_back(c_[i] * static_cast<long>(i));
  return UniPoly(std::move(d));
}

UniPoly UniPoly::operator*(const UniPoly &o) const
{
  if (is_zero() || o.is_zero())
    return {};
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] += c_[i] * o.c_[j];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly &o) const
{
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i)
    r[i] -= o.c_[i];
  return UniPoly(std::move(r));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly &d) const
{
  if (d.is_zero())
    throw Error("polynomial division by zero");
  std::vector<Rational> rem = c_;
  std::vector<Rational> quot(c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 0, Rational(0));
  for (int k = static_cast<int>(rem.size()) - static_cast<int>(d.c_.size()); k >= 0; --k) {
    Rational f = rem[k + d.c_.size() - 1] / d.lead();
    quot[k] = f;
    if (f == 0)
      continue;
    for (std::size_t j = 0; j < d.c_.size(); ++j)
      rem[k + j] -= f * d.c_[j];
  }
  return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
}

UniPoly UniPoly::primitive() const
{
  if (is_zero())
    return {};
  Integer den_lcm = 1;
  for (const auto &c : c_)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  Integer content = 0;
  for (const auto &c : c_) {
    Integer n = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), n.get_mpz_t());
  }
  std::vector<Rational> r;
  for (const auto &c : c_)
    r.push_back(make_rational(c.get_num() * (den_lcm / c.get_den()), content));
  return UniPoly(std::move(r));
}

UniPoly UniPoly::monic() const
{
  if (is_zero())
    return {};
  std::vector<Rational> r;
  for (const auto &c : c_)
    r.push_back(c / lead());
  return UniPoly(std::move(r));
}

UniPoly gcd(UniPoly a, UniPoly b)
{
  while (!b.is_zero()) {
    UniPoly r = a.divmod(b).second;
    a = std::move(b);
    b = r.primitive();
  }
  return a.monic();
}

UniPoly squarefree_part(const UniPoly &p)
{
  if (p.degree() <= 0)
    return p;
  UniPoly g = gcd(p, p.derivative());
  return p.divmod(g).first.primitive();
}

std::vector<UniPoly> sturm_sequence(const UniPoly &p)
{
  std::vector<UniPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    UniPoly r = seq[seq.size() - 2].divmod(seq.back()).second;
    if (r.is_zero())
      break;
    // Negated remainder; content removal only rescales by a positive factor.
    seq.push_back((UniPoly() - r).primitive());
  }
  if (seq.back().is_zero())
    seq.pop_back();
  return seq;
}

namespace {

// Sign of p at -inf (at_neg = true) or +inf.
int sign_at_infinity(const UniPoly &p, bool at_neg)
{
  if (p.is_zero())
    return 0;
  int s = sign(p.lead());
  if (at_neg && p.degree() % 2 == 1)
    s = -s;
  return s;
}

std::size_t variations(const std::vector<int> &signs)
{
  std::size_t v = 0;
  int prev = 0;
  for (int s : signs) {
    if (s == 0)
      continue;
    if (prev != 0 && s != prev)
      ++v;
    prev = s;
  }
  return v;
}

} // namespace

std::size_t count_real_roots(const UniPoly &p)
{
  if (p.is_zero())
    throw Error("count_real_roots: zero polynomial");
  if (p.degree() == 0)
    return 0;
  auto seq = sturm_sequence(squarefree_part(p));
  std::vector<int> neg, pos;
  for (const auto &q : seq) {
    neg.push_back(sign_at_infinity(q, true));
    pos.push_back(sign_at_infinity(q, false));
  }
  return variations(neg) - variations(pos);
}

std::size_t count_real_roots(const Polynomial &p)
{
  auto vs = p.vars();
  if (vs.size() > 1)
    throw Error("count_real_roots: polynomial is not univariate");
  Var v = vs.empty() ? lambda_var() : *vs.begin();
  return count_real_roots(*UniPoly::from_polynomial(p, v));
}

namespace {

std::vector<Integer> positive_divisors(Integer n)
{
  if (n < 0)
    n = -n;
  std::vector<Integer> small, large;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n)
        large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

} // namespace

std::vector<Rational> rational_roots(const UniPoly &p)
{
  std::vector<Rational> roots;
  if (p.degree() <= 0)
    return roots;
  UniPoly q = squarefree_part(p).primitive();
  // Factor out x.
  std::size_t shift = 0;
  while (shift < q.coeffs().size() && q.coeffs()[shift] == 0)
    ++shift;
  if (shift > 0) {
    roots.push_back(0);
    q = UniPoly(std::vector<Rational>(q.coeffs().begin() + shift, q.coeffs().end()));
  }
  if (q.degree() <= 0)
    return roots;
  Integer a0 = q.coeffs().front().get_num(), an = q.lead().get_num();
  // Divisor enumeration is by trial division; beyond this bound we give up
  // and report no further rational roots.
  const Integer limit("1000000000000", 10);
  if (abs(a0) > limit || abs(an) > limit)
    return roots;
  for (const auto &num : positive_divisors(a0))
    for (const auto &den : positive_divisors(an))
      for (int s : {1, -1}) {
        Rational cand = make_rational(num * s, den);
        if (q.eval(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end())
          roots.push_back(cand);
      }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Var lambda_var() { return Var("lambda"); }

UniPoly char_unipoly(const RatMatrix &a)
{
  if (!a.square())
    throw Error("char_poly: matrix is not square");
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  std::size_t n = a.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RatMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + RatMatrix::identity(n).scaled(c[n - k + 1]);
    c[n - k] = -(a * m).trace() / static_cast<long>(k);
  }
  return UniPoly(std::move(c));
}

Polynomial char_poly(const RatMatrix &a) { return char_unipoly(a).to_polynomial(lambda_var()); }

// ------------------------------------------------------------------- Jordan

namespace {

RatMatrix from_columns(const std::vector<std::vector<Rational>> &cols, std::size_t n)
{
  RatMatrix m(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i)
      m(i, j) = cols[j][i];
  return m;
}

RatMatrix power(const RatMatrix &a, std::size_t k)
{
  RatMatrix r = RatMatrix::identity(a.rows());
  for (std::size_t i = 0; i < k; ++i)
    r = r * a;
  return r;
}

std::size_t multiplicity(UniPoly p, const Rational &root)
{
  UniPoly lin(std::vector<Rational>{-root, 1});
  std::size_t m = 0;
  while (p.degree() > 0) {
    auto [q, r] = p.divmod(lin);
    if (!r.is_zero())
      break;
    p = q;
    ++m;
  }
  return m;
}

// Jordan chains for one eigenvalue, each listed bottom (eigenvector) to top.
std::vector<std::vector<std::vector<Rational>>> jordan_chains(const RatMatrix &a, const Rational &lambda,
                                                              std::size_t mult)
{
  std::size_t n = a.rows();
  RatMatrix nil = a - RatMatrix::identity(n).scaled(lambda);
  std::vector<std::vector<std::vector<Rational>>> kernels{{}};
  std::size_t height = 0;
  while (kernels.back().size() < mult) {
    ++height;
    kernels.push_back(power(nil, height).nullspace());
  }

  // Chains are built top first; every chain's last vector sits at the current level.
  std::vector<std::vector<std::vector<Rational>>> chains;
  for (std::size_t k = height; k >= 1; --k) {
    std::vector<std::vector<Rational>> span = kernels[k - 1];
    for (const auto &chain : chains)
      span.push_back(chain.back());
    std::size_t r = span.empty() ? 0 : from_columns(span, n).rank();
    for (const auto &cand : kernels[k]) {
      span.push_back(cand);
      std::size_t r2 = from_columns(span, n).rank();
      if (r2 > r) {
        r = r2;
        chains.push_back({cand});
      } else {
        span.pop_back();
      }
    }
    if (k > 1)
      for (auto &chain : chains)
        chain.push_back(nil.apply(chain.back()));
  }
  for (auto &chain : chains)
    std::reverse(chain.begin(), chain.end());
  return chains;
}

} // namespace

std::variant<JordanDecomposition, JordanUnsupported> rational_jordan(const RatMatrix &a)
{
  UniPoly chi = char_unipoly(a);
  std::size_t n = a.rows();
  auto roots = rational_roots(chi);

  UniPoly rest = chi;
  std::vector<std::pair<Rational, std::size_t>> eig;
  for (const auto &r : roots) {
    std::size_t m = multiplicity(rest, r);
    UniPoly lin(std::vector<Rational>{-r, 1});
    for (std::size_t i = 0; i < m; ++i)
      rest = rest.divmod(lin).first;
    eig.emplace_back(r, m);
  }
  if (rest.degree() > 0) {
    JordanUnsupported u;
    u.residual = rest.monic();
    u.real_spectrum = count_real_roots(rest) == static_cast<std::size_t>(squarefree_part(rest).degree());
    return u;
  }

  std::vector<std::vector<Rational>> columns;
  for (const auto &[lambda, mult] : eig)
    for (const auto &chain : jordan_chains(a, lambda, mult))
      columns.insert(columns.end(), chain.begin(), chain.end());
  RatMatrix p = from_columns(columns, n);
  auto p_inv = p.inverse();
  if (!p_inv)
    throw Error("rational_jordan: singular transformation (internal error)");
  JordanDecomposition d;
  d.transform = *p_inv;
  d.transform_inverse = p;
  d.jordan = d.transform * a * d.transform_inverse;
  return d;
}

} // namespace twn
