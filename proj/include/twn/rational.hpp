// Exact rational numbers backed by GMP.

#ifndef TWN_RATIONAL_HPP
#define TWN_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace twn {

// mpq_class keeps numerator/denominator canonical (den > 0, gcd = 1) as long
// as every value is built through the helpers below or canonicalize()d.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer &num, const Integer &den);

// Accepts "p", "-p", "p/q". Returns nullopt on anything else (including q = 0).
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational &r);
std::string to_string(const Integer &z);

Rational pow(const Rational &base, unsigned long exp);
bool is_integer(const Rational &r);
int sign(const Rational &r);
Rational binomial(unsigned long n, unsigned long k);

// Bit size of numerator plus denominator; used to bound blow-up in simulations.
std::size_t bit_size(const Rational &r);

} // namespace twn

#endif
