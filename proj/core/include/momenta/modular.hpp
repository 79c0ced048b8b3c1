#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "momenta/rational.hpp"

namespace momenta {

// Word-size prime arithmetic for the modular solver.

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    if (s >= p || s < a)
        s -= p;
    return s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

/// Residue of an exact rational; nullopt when the denominator vanishes mod p
/// (the caller treats that prime as unlucky).
std::optional<std::uint64_t> rational_mod(const Rational& r, std::uint64_t p);

/// Deterministic stream of distinct primes of the requested bit size.
/// Streams with different `salt` values are disjoint.
class PrimeStream {
public:
    explicit PrimeStream(unsigned bits = 62, unsigned salt = 0);
    std::uint64_t next();

private:
    Int cursor_;
    Int limit_;
};

/// Chinese remainder combination of (residue, modulus) pairs with pairwise
/// coprime moduli; result is in [0, prod moduli).
Int crt_combine(const std::vector<std::pair<Int, Int>>& parts);

/// Wang-style rational reconstruction: the unique p/q with
/// q*residue = p (mod modulus), |p|, q <= sqrt((modulus-1)/2), gcd(p,q)=1,
/// or nullopt when no such pair exists.
std::optional<Rational> rational_reconstruct(const Int& residue, const Int& modulus);

} // namespace momenta
