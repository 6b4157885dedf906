#include "twn/rational.hpp"

#include <cctype>

namespace twn {

Rational make_rational(long num, long den)
{
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(const Integer &num, const Integer &den)
{
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s)
{
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text)
{
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    return std::nullopt;
  Integer n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0)
    return std::nullopt;
  Rational r = make_rational(n, d);
  if (negative)
    r = -r;
  return r;
}

std::string to_string(const Integer &z) { return z.get_str(); }

std::string to_string(const Rational &r)
{
  if (r.get_den() == 1)
    return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational pow(const Rational &base, unsigned long exp)
{
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exp);
  return make_rational(num, den);
}

bool is_integer(const Rational &r) { return r.get_den() == 1; }

int sign(const Rational &r) { return sgn(r); }

Rational binomial(unsigned long n, unsigned long k)
{
  Integer z;
  mpz_bin_uiui(z.get_mpz_t(), n, k);
  return Rational(z);
}

std::size_t bit_size(const Rational &r)
{
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

} // namespace twn
