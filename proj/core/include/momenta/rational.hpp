#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "momenta/error.hpp"

namespace momenta {

using Int = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" in decimal digits; the result is canonical
/// (reduced, positive denominator).
Rational parse_rational(const std::string& text);

/// Canonical "p/q" (or "p" when q == 1) decimal form.
std::string rational_str(const Rational& r);

Rational make_rational(Int num, Int den);

bool is_integer(const Rational& r);

/// Truncated integer square root.
Int isqrt(const Int& n);

/// Prime factorization by trial division plus Pollard rho; factors ascending.
std::vector<std::pair<Int, unsigned>> factor_integer(Int n);

/// All positive divisors, ascending.  Throws on more than `cap` divisors.
std::vector<Int> divisors(const Int& n, std::size_t cap = 1u << 20);

} // namespace momenta
