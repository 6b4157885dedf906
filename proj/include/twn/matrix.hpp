// Dense rational matrices, univariate polynomials, Sturm root counting and
// Jordan decomposition for matrices whose spectrum is rational.

#ifndef TWN_MATRIX_HPP
#define TWN_MATRIX_HPP

#include "twn/polynomial.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace twn {

class RatMatrix {
public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  RatMatrix operator*(const RatMatrix &o) const;
  RatMatrix operator+(const RatMatrix &o) const;
  RatMatrix operator-(const RatMatrix &o) const;
  RatMatrix scaled(const Rational &c) const;
  RatMatrix transposed() const;
  std::vector<Rational> apply(const std::vector<Rational> &v) const;

  Rational trace() const;
  std::size_t rank() const;
  bool is_zero() const;
  bool is_upper_triangular() const;
  // Basis of the right null space.
  std::vector<std::vector<Rational>> nullspace() const;
  std::optional<RatMatrix> inverse() const;

  friend bool operator==(const RatMatrix &, const RatMatrix &) = default;
  std::string to_string() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> entries_; // row-major
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> row_reduce(RatMatrix &m);

// Solves A x = b exactly; nullopt if inconsistent. Free variables are set to 0.
std::optional<std::vector<Rational>> solve_linear(const RatMatrix &a, const std::vector<Rational> &b);

/// Dense univariate polynomial, coefficients from low to high degree.
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);

  static std::optional<UniPoly> from_polynomial(const Polynomial &p, Var v);
  Polynomial to_polynomial(Var v) const;

  const std::vector<Rational> &coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const Rational &lead() const { return c_.back(); }

  Rational eval(const Rational &x) const;
  UniPoly derivative() const;
  UniPoly operator*(const UniPoly &o) const;
  UniPoly operator-(const UniPoly &o) const;
  // Euclidean division over Q.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly &d) const;
  // Positive rescaling to an integer polynomial with unit content.
  UniPoly primitive() const;
  UniPoly monic() const;

  friend bool operator==(const UniPoly &, const UniPoly &) = default;

private:
  void trim();
  std::vector<Rational> c_;
};

UniPoly gcd(UniPoly a, UniPoly b);
UniPoly squarefree_part(const UniPoly &p);
std::vector<UniPoly> sturm_sequence(const UniPoly &p);
std::size_t count_real_roots(const UniPoly &p);
// Distinct rational roots.
std::vector<Rational> rational_roots(const UniPoly &p);

Var lambda_var();

// det(λI − A) as a polynomial in lambda_var().
Polynomial char_poly(const RatMatrix &a);
UniPoly char_unipoly(const RatMatrix &a);

// Number of distinct real roots of a univariate polynomial; throws on zero
// or multivariate input.
std::size_t count_real_roots(const Polynomial &p);

struct JordanDecomposition {
  RatMatrix jordan;  // Q: upper triangular, eigenvalues on the diagonal
  RatMatrix transform; // T with T·A·T⁻¹ = Q
  RatMatrix transform_inverse;
};

struct JordanUnsupported {
  UniPoly residual; // factor of the characteristic polynomial without rational roots
  bool real_spectrum = false; // true if that factor still has only real roots
};

std::variant<JordanDecomposition, JordanUnsupported> rational_jordan(const RatMatrix &a);

} // namespace twn

#endif
