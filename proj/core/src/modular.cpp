#include "momenta/modular.hpp"

namespace momenta {

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1)
            r = mul_mod(r, a, p);
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    // extended Euclid over signed 128-bit intermediates
    std::int64_t t0 = 0, t1 = 1;
    std::uint64_t r0 = p, r1 = a % p;
    while (r1 != 0) {
        std::uint64_t q = r0 / r1;
        std::uint64_t r2 = r0 - q * r1;
        std::int64_t t2 = t0 - static_cast<std::int64_t>(q) * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1)
        fail(ErrorClass::internal, "non-invertible residue");
    return t0 < 0 ? static_cast<std::uint64_t>(t0 + static_cast<std::int64_t>(p)) : static_cast<std::uint64_t>(t0);
}

std::optional<std::uint64_t> rational_mod(const Rational& r, std::uint64_t p) {
    Int den = r.get_den();
    std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), p);
    if (d == 0)
        return std::nullopt;
    Int num = r.get_num();
    std::uint64_t n = mpz_fdiv_ui(num.get_mpz_t(), p);
    return mul_mod(n, inv_mod(d, p), p);
}

PrimeStream::PrimeStream(unsigned bits, unsigned salt) {
    cursor_ = Int(1);
    cursor_ <<= (bits - 1);
    cursor_ += Int(salt) * 1000003;
    limit_ = Int(1);
    limit_ <<= bits;
}

std::uint64_t PrimeStream::next() {
    mpz_nextprime(cursor_.get_mpz_t(), cursor_.get_mpz_t());
    if (cursor_ >= limit_)
        fail(ErrorClass::internal, "prime stream exhausted");
    return cursor_.get_ui();
}

Int crt_combine(const std::vector<std::pair<Int, Int>>& parts) {
    Int x = 0, m = 1;
    for (const auto& [r, p] : parts) {
        if (m == 1) {
            x = r % p;
            m = p;
            continue;
        }
        Int minv;
        if (mpz_invert(minv.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()) == 0)
            fail(ErrorClass::internal, "CRT moduli not coprime");
        Int t = ((r - x) * minv) % p;
        if (t < 0)
            t += p;
        x += m * t;
        m *= p;
    }
    return x;
}

std::optional<Rational> rational_reconstruct(const Int& residue, const Int& modulus) {
    if (modulus <= 1 || residue < 0 || residue >= modulus)
        fail(ErrorClass::internal, "rational_reconstruct precondition");
    Int bound = isqrt((modulus - 1) / 2);
    if (residue == 0)
        return Rational(0);
    Int r0 = modulus, r1 = residue;
    Int t0 = 0, t1 = 1;
    while (r1 != 0 && r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r1 == 0)
        return std::nullopt;
    Int q = abs(t1);
    if (q == 0 || q > bound)
        return std::nullopt;
    Int p = t1 < 0 ? Int(-r1) : r1;
    Int g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), q.get_mpz_t());
    if (g != 1)
        return std::nullopt;
    return make_rational(p, q);
}

} // namespace momenta
