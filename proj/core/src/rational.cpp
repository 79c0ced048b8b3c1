#include "momenta/rational.hpp"

#include <algorithm>

namespace momenta {

const char* error_class_name(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::parse_error: return "parse-error";
        case ErrorClass::init_shortfall: return "init-shortfall";
        case ErrorClass::window_shortfall: return "window-shortfall";
        case ErrorClass::capacity_shortfall: return "capacity-shortfall";
        case ErrorClass::no_recurrence_found: return "no-recurrence-found";
        case ErrorClass::insufficient_moments: return "insufficient-moments";
        case ErrorClass::oracle_mismatch: return "oracle-mismatch";
        case ErrorClass::singular_point: return "singular-point";
        case ErrorClass::degenerate_input: return "degenerate-input";
        case ErrorClass::checkpoint_mismatch: return "checkpoint-mismatch";
        case ErrorClass::internal: return "internal";
    }
    return "internal";
}

int error_exit_code(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::parse_error: return 2;
        case ErrorClass::init_shortfall: return 3;
        case ErrorClass::window_shortfall: return 4;
        case ErrorClass::capacity_shortfall: return 5;
        case ErrorClass::no_recurrence_found: return 6;
        case ErrorClass::insufficient_moments: return 7;
        case ErrorClass::oracle_mismatch: return 8;
        case ErrorClass::singular_point: return 9;
        case ErrorClass::degenerate_input: return 10;
        case ErrorClass::checkpoint_mismatch: return 11;
        case ErrorClass::internal: return 70;
    }
    return 70;
}

Rational parse_rational(const std::string& text) {
    if (text.empty())
        fail(ErrorClass::parse_error, "empty rational literal");
    for (char c : text) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            fail(ErrorClass::parse_error, "bad character in rational literal '" + text + "'");
    }
    try {
        Rational r(text);
        if (r.get_den() == 0)
            fail(ErrorClass::parse_error, "zero denominator in '" + text + "'");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        fail(ErrorClass::parse_error, "malformed rational literal '" + text + "'");
    }
}

std::string rational_str(const Rational& r) {
    return r.get_str();
}

Rational make_rational(Int num, Int den) {
    if (den == 0)
        fail(ErrorClass::degenerate_input, "rational with zero denominator");
    Rational r(std::move(num), std::move(den));
    r.canonicalize();
    return r;
}

bool is_integer(const Rational& r) {
    return r.get_den() == 1;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

namespace {

Int pollard_rho(const Int& n) {
    // Brent's cycle variant; n must be odd composite, not a prime power of 2.
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xbadc0ffeUL);
    while (true) {
        Int y = rng.get_z_range(n - 3) + 2;
        Int c = rng.get_z_range(n - 1) + 1;
        Int x = y, d = 1, q = 1, ys = y;
        unsigned long r = 1;
        const unsigned long m = 128;
        while (d == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i)
                y = (y * y + c) % n;
            unsigned long k = 0;
            while (k < r && d == 1) {
                ys = y;
                unsigned long lim = std::min(m, static_cast<unsigned long>(r - k));
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (d == n) {
            // backtrack
            do {
                ys = (ys * ys + c) % n;
                Int diff = abs(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (d == 1);
        }
        if (d != n)
            return d;
    }
}

void factor_rec(Int n, std::vector<Int>& out) {
    if (n == 1)
        return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 32)) {
        out.push_back(n);
        return;
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

std::vector<std::pair<Int, unsigned>> factor_integer(Int n) {
    if (n < 0)
        n = -n;
    std::vector<Int> primes;
    if (n == 0)
        fail(ErrorClass::degenerate_input, "factoring zero");
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            primes.emplace_back(p);
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    // trial division by larger small primes
    for (long p = 41; p < 100000 && n > 1; p += 2) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                primes.emplace_back(p);
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            }
        }
    }
    if (n > 1)
        factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<Int, unsigned>> out;
    for (const Int& p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1u);
    }
    return out;
}

std::vector<Int> divisors(const Int& n, std::size_t cap) {
    auto fac = factor_integer(n);
    std::vector<Int> out{1};
    for (const auto& [p, e] : fac) {
        std::size_t base = out.size();
        if (base * (e + 1) > cap)
            fail(ErrorClass::internal, "divisor count exceeds cap");
        Int pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i)
                out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace momenta
