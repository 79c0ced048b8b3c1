#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "momenta/eps_series.hpp"
#include "momenta/expr.hpp"
#include "momenta/modular.hpp"
#include "momenta/poly.hpp"
#include "momenta/ratfunc.hpp"

using namespace momenta;

namespace {

std::mt19937_64 rng(20240811);

Rational random_rational(long bound = 50) {
    std::uniform_int_distribution<long> num(-bound, bound);
    std::uniform_int_distribution<long> den(1, bound);
    return make_rational(Int(num(rng)), Int(den(rng)));
}

Poly random_poly(Var v, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    int d = deg(rng);
    std::vector<Rational> c;
    for (int i = 0; i <= d; ++i)
        c.push_back(random_rational(6));
    return Poly(v, std::move(c));
}

} // namespace

TEST_CASE("rational field axioms on random triples") {
    for (int it = 0; it < 200; ++it) {
        Rational a = random_rational(), b = random_rational(), c = random_rational();
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == 0);
        if (a != 0)
            CHECK(a * (Rational(1) / a) == 1);
    }
}

TEST_CASE("rational parse and print round trip") {
    CHECK(rational_str(parse_rational("-22/4")) == "-11/2");
    CHECK(rational_str(parse_rational("7")) == "7");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
}

TEST_CASE("poly_content examples") {
    // {(x-1)(x+2), (x-1)x} -> x-1
    Poly a = parse_poly("(x-1)*(x+2)", Var::x);
    Poly b = parse_poly("(x-1)*x", Var::x);
    std::vector<Poly> in{a, b};
    CHECK(poly_content(in) == parse_poly("x-1", Var::x));

    std::vector<Poly> consts{Poly::constant(Var::x, 2), Poly::constant(Var::x, 4)};
    CHECK(poly_content(consts) == Poly::constant(Var::x, 1));

    std::vector<Poly> euclid{parse_poly("x^2-1", Var::x), parse_poly("x-1", Var::x)};
    CHECK(poly_content(euclid) == parse_poly("x-1", Var::x));

    std::vector<Poly> zeros{Poly(Var::x), Poly(Var::x)};
    CHECK_THROWS_AS(poly_content(zeros), Error);
}

TEST_CASE("poly_content divides every member exactly") {
    for (int it = 0; it < 50; ++it) {
        Poly common = random_poly(Var::x, 3);
        if (common.is_zero())
            common = Poly::constant(Var::x, 1);
        std::vector<Poly> members;
        for (int i = 0; i < 3; ++i)
            members.push_back(common * random_poly(Var::x, 3));
        bool all_zero = true;
        for (const Poly& m : members)
            all_zero = all_zero && m.is_zero();
        if (all_zero)
            continue;
        Poly g = poly_content(members);
        std::vector<Poly> reduced;
        for (const Poly& m : members) {
            auto [q, r] = poly_divmod(m, g);
            CHECK(r.is_zero());
            reduced.push_back(q);
        }
        CHECK(poly_content(reduced) == Poly::constant(Var::x, 1));
    }
}

TEST_CASE("start_index_delta examples and minimality") {
    CHECK(start_index_delta(parse_poly("n+1", Var::n)) == 0);
    CHECK(start_index_delta(parse_poly("(n-3)*(n+5)", Var::n)) == 4);
    CHECK(start_index_delta(parse_poly("n^2+1", Var::n)) == 0);
    CHECK_THROWS_AS(start_index_delta(Poly(Var::n)), Error);

    for (int it = 0; it < 30; ++it) {
        Poly p = random_poly(Var::n, 4);
        if (p.is_zero())
            continue;
        int delta = start_index_delta(p);
        if (delta > 0)
            CHECK(p.eval_int(delta - 1) == 0);
        for (int m = delta; m < delta + 50; ++m)
            CHECK(p.eval_int(m) != 0);
    }
}

TEST_CASE("integer roots with multi-digit coefficients") {
    // roots 0, 12, 345
    Poly p = parse_poly("n*(n-12)*(n-345)*(n^2+n+1)", Var::n);
    auto roots = nonneg_integer_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == 0);
    CHECK(roots[1] == 12);
    CHECK(roots[2] == 345);
}

TEST_CASE("eps series examples") {
    // (ep^-1 + 1) * ep -> 1 + ep
    EpsSeries a(-1, {Rational(1), Rational(1)});
    EpsSeries shifted = a.shift(1);
    CHECK(shifted.lo() == 0);
    CHECK(shifted.coeff(0) == 1);
    CHECK(shifted.coeff(1) == 1);

    // 1 / (1 - ep) to order 3
    EpsSeries one = EpsSeries::constant(Rational(1), 3);
    EpsSeries den = EpsSeries::from_poly(parse_poly("1-ep", Var::ep), 3);
    EpsSeries geo = one / den;
    CHECK(geo.lo() == 0);
    CHECK(geo.hi() == 3);
    for (int k = 0; k <= 3; ++k)
        CHECK(geo.coeff(k) == 1);

    // shift(1 + ep, u = -2) -> ep^-2 + ep^-1
    EpsSeries b(0, {Rational(1), Rational(1)});
    EpsSeries c = eps_series_arith(b, b, EpsOp::shift, -2);
    CHECK(c.lo() == -2);
    CHECK(c.hi() == -1);
    CHECK(c.coeff(-2) == 1);
    CHECK(c.coeff(-1) == 1);
    CHECK_THROWS_AS(c.coeff(0), Error);  // above the window: unknown, not zero
}

TEST_CASE("eps series div(mul(a,b), a) == b on the common window") {
    for (int it = 0; it < 100; ++it) {
        std::uniform_int_distribution<int> lo_dist(-3, 1), len_dist(1, 5);
        int lo_a = lo_dist(rng), len_a = len_dist(rng);
        int lo_b = lo_dist(rng), len_b = len_dist(rng);
        std::vector<Rational> ca, cb;
        for (int i = 0; i < len_a; ++i)
            ca.push_back(random_rational(9));
        if (ca[0] == 0)
            ca[0] = Rational(1);  // a needs a nonzero leading coefficient
        for (int i = 0; i < len_b; ++i)
            cb.push_back(random_rational(9));
        EpsSeries a(lo_a, ca), b(lo_b, cb);
        EpsSeries round = (a * b) / a;
        CHECK(round.lo() <= b.lo());
        int hi = std::min(round.hi(), b.hi());
        REQUIRE(hi >= b.lo());
        for (int k = round.lo(); k <= hi; ++k)
            CHECK(round.coeff(k) == b.coeff(k));
    }
}

TEST_CASE("division by a window of zeros fails") {
    EpsSeries a = EpsSeries::constant(Rational(1), 2);
    EpsSeries z = EpsSeries::zero(0, 2);
    CHECK_THROWS_AS(a / z, Error);
}

TEST_CASE("rational reconstruction examples") {
    auto r1 = rational_reconstruct(Int(65), Int(97));
    REQUIRE(r1.has_value());
    CHECK(*r1 == make_rational(1, 3));

    auto r2 = rational_reconstruct(Int(96), Int(97));
    REQUIRE(r2.has_value());
    CHECK(*r2 == Rational(-1));

    // CRT of (2 mod 5, 3 mod 7) is 17 mod 35
    Int combined = crt_combine({{Int(2), Int(5)}, {Int(3), Int(7)}});
    CHECK(combined == 17);
    // 17 exceeds the bound sqrt(35/2), so 17 itself is not recoverable yet
    auto r3 = rational_reconstruct(Int(17), Int(35));
    if (r3)
        CHECK(*r3 != Rational(17));
    // with more primes the integer 17 comes back
    Int big = crt_combine({{Int(17 % 5), Int(5)}, {Int(17 % 7), Int(7)}, {Int(17 % 11), Int(11)},
                           {Int(17 % 13), Int(13)}});
    auto r4 = rational_reconstruct(big, Int(5 * 7 * 11 * 13));
    REQUIRE(r4.has_value());
    CHECK(*r4 == Rational(17));
}

TEST_CASE("rational reconstruction recovers small fractions") {
    PrimeStream primes(62, 0);
    std::vector<std::uint64_t> ps{primes.next(), primes.next()};
    Int modulus = Int(ps[0]) * Int(ps[1]);
    Int bound = isqrt((modulus - 1) / 2);
    for (int it = 0; it < 1000; ++it) {
        Rational pq = random_rational(1000);
        Int residue = 0;
        {
            std::vector<std::pair<Int, Int>> parts;
            bool bad = false;
            for (std::uint64_t p : ps) {
                auto m = rational_mod(pq, p);
                if (!m) {
                    bad = true;
                    break;
                }
                parts.emplace_back(Int(*m), Int(p));
            }
            if (bad)
                continue;
            residue = crt_combine(parts);
        }
        auto back = rational_reconstruct(residue, modulus);
        REQUIRE(back.has_value());
        CHECK(*back == pq);
    }
}

TEST_CASE("ratfunc arithmetic and equality") {
    RatFunc a = parse_ratfunc("1/(1-x)^2", Var::x);
    RatFunc b = parse_ratfunc("(1+x)/(1-x)^2 - x/(1-x)^2", Var::x);
    CHECK(a == b);
    RatFunc c = parse_ratfunc("(x^2-1)/(x-1)", Var::x);
    CHECK(c == parse_ratfunc("x+1", Var::x));
}

TEST_CASE("parser rejects zero denominators and unknown variables") {
    CHECK_THROWS_AS(parse_ratfunc("1/(x-x)", Var::x), Error);
    CHECK_THROWS_AS(parse_ratfunc("y+1", Var::x), Error);
    CHECK_THROWS_AS(parse_ratfunc("n+1", Var::x), Error);
    CHECK(parse_ratfunc("n+1", Var::n).is_polynomial());
}

TEST_CASE("bipoly print parse round trip") {
    for (int it = 0; it < 40; ++it) {
        BiPoly p(Var::x);
        std::uniform_int_distribution<int> deg(0, 3);
        int dx = deg(rng), de = deg(rng);
        for (int a = 0; a <= dx; ++a)
            for (int e = 0; e <= de; ++e)
                p += BiPoly::monomial(Var::x, a, e, random_rational(5));
        if (p.is_zero())
            continue;
        BiPoly back = parse_bipoly(p.str(), Var::x);
        CHECK(back == p);
    }
}

TEST_CASE("poly shifted_arg matches evaluation") {
    for (int it = 0; it < 40; ++it) {
        Poly p = random_poly(Var::n, 4);
        Rational s = random_rational(5);
        Poly q = p.shifted_arg(s);
        for (long v = -3; v <= 3; ++v)
            CHECK(q.eval_int(v) == p.eval(Rational(v) + s));
    }
}
