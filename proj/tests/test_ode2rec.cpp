#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "momenta/expr.hpp"
#include "momenta/ode2rec.hpp"

using namespace momenta;

namespace {

std::mt19937_64 rng(7321);

ScalarStage make_stage(const std::vector<std::string>& alphas) {
    ScalarStage st;
    st.component = 1;
    st.order = static_cast<int>(alphas.size()) - 1;
    for (const std::string& a : alphas)
        st.alpha.push_back(a == "0" ? BiPoly(Var::x) : parse_bipoly(a, Var::x));
    return st;
}

Rational random_rational(long bound = 5) {
    std::uniform_int_distribution<long> num(-bound, bound);
    std::uniform_int_distribution<long> den(1, 3);
    return make_rational(Int(num(rng)), Int(den(rng)));
}

Poly random_poly_deg(Var v, int deg, bool exact_degree) {
    std::vector<Rational> c;
    for (int i = 0; i <= deg; ++i)
        c.push_back(random_rational());
    if (exact_degree && c.back() == 0)
        c.back() = Rational(1);
    return Poly(v, std::move(c));
}

// apply the recurrence to a stream: returns the aligned relation values
std::vector<Rational> apply_recurrence(const EpsRecurrence& rec,
                                       const std::vector<Rational>& f, long rels) {
    std::vector<Rational> out;
    for (long n = 0; n < rels; ++n) {
        Rational acc(0);
        for (int i = 0; i <= rec.order(); ++i)
            acc += rec.a[static_cast<std::size_t>(i)].at_eps0().eval_int(n) *
                   f[static_cast<std::size_t>(n + i)];
        out.push_back(acc);
    }
    return out;
}

} // namespace

TEST_CASE("normalize_stage examples") {
    // (x-2) D f - (x-2) f = 0
    auto [st1, rec1] = normalize_stage(make_stage({"-(x-2)", "x-2"}));
    CHECK(rec1.u == 0);
    CHECK(rec1.k == 0);
    CHECK(rec1.p == parse_poly("x-2", Var::x));
    CHECK(st1.alpha[1] == parse_bipoly("1", Var::x));
    CHECK(st1.alpha[0] == parse_bipoly("-1", Var::x));
    CHECK(st1.rhs.empty());

    // ep^2 (D f - f) = 0
    auto [st2, rec2] = normalize_stage(make_stage({"-ep^2", "ep^2"}));
    CHECK(rec2.u == 2);
    CHECK(rec2.p == Poly::constant(Var::x, 1));
    CHECK(st2.alpha[1] == parse_bipoly("1", Var::x));

    // x (D f - f) = 0
    auto [st3, rec3] = normalize_stage(make_stage({"-x", "x"}));
    CHECK(rec3.k == 1);
    CHECK(rec3.p == Poly::constant(Var::x, 1));
    CHECK(st3.alpha[1] == parse_bipoly("1", Var::x));

    CHECK_THROWS_AS(normalize_stage(make_stage({"0", "0"})), Error);
}

TEST_CASE("normalize_stage moves the ep tail to the component's own layers") {
    // (1 + ep x) D f - f = 0
    auto [st, rec] = normalize_stage(make_stage({"-1", "1+ep*x"}));
    CHECK(rec.u == 0);
    CHECK(st.alpha[1] == parse_bipoly("1", Var::x));
    REQUIRE(st.rhs.size() == 1);
    CHECK(st.rhs[0].src.kind == Source::Kind::component);
    CHECK(st.rhs[0].src.index == 1);
    CHECK(st.rhs[0].dx == 1);
    CHECK(st.rhs[0].coeff == parse_ratfunc("-ep*x", Var::x));
    CHECK(st.rhs[0].coeff.num().eps_valuation() >= 1);
}

TEST_CASE("ode_to_recurrence examples") {
    // D f - f = 0  ->  (n+1) F(n+1) - F(n) = 0
    auto [rec1, meta1] = ode_to_recurrence(make_stage({"-1", "1"}));
    CHECK(meta1.d == 1);
    CHECK(rec1.rhs_offset == 0);
    CHECK(rec1.a[1].at_eps0() == parse_poly("n+1", Var::n));
    CHECK(rec1.a[0].at_eps0() == parse_poly("-1", Var::n));

    // (1-x) D f - f = 0  ->  (n+1) F(n+1) - (n+1) F(n) = 0
    auto [rec2, meta2] = ode_to_recurrence(make_stage({"-1", "1-x"}));
    CHECK(meta2.d == 1);
    CHECK(rec2.a[1].at_eps0() == parse_poly("n+1", Var::n));
    CHECK(rec2.a[0].at_eps0() == parse_poly("-n-1", Var::n));

    // x^2 D^2 f = 0 contributes n(n-1) F(n) at shift 0
    auto [rec3, meta3] = ode_to_recurrence(make_stage({"0", "0", "x^2"}));
    CHECK(meta3.d == 0);
    CHECK(rec3.rhs_offset == 0);
    CHECK(rec3.a[0].at_eps0() == parse_poly("n*(n-1)", Var::n));
}

TEST_CASE("recurrence_meta examples") {
    auto [rec1, meta1] = ode_to_recurrence(make_stage({"-1", "1"}));
    CHECK(meta1.d_prime == 1);
    CHECK(meta1.delta == 0);
    CHECK(meta1.required_initial_count == 1);

    EpsRecurrence rec;
    rec.a.push_back(parse_bipoly("1", Var::n));
    rec.a.push_back(parse_bipoly("n-3", Var::n));
    rec.a.push_back(parse_bipoly("ep*(n+1)", Var::n));
    RecurrenceMeta meta = recurrence_meta(rec);
    CHECK(meta.d == 2);
    CHECK(meta.d_prime == 1);
    CHECK(meta.delta == 4);
    CHECK(meta.required_initial_count == 4);

    auto [rec3, meta3] = ode_to_recurrence(make_stage({"-1", "1-x"}));
    CHECK(meta3.d_prime == 1);
    CHECK(meta3.delta == 0);
    CHECK(meta3.required_initial_count == 1);
}

TEST_CASE("order_bound examples") {
    // order-4 stage carrying a common degree-13 factor: bound 4 + 13 - 13 = 4
    ScalarStage big = make_stage({"-(1+x)^13", "0", "0", "0", "(1+x)^13"});
    auto [nbig, rbig] = normalize_stage(big);
    CHECK(rbig.p.degree() + rbig.k == 13);
    CHECK(order_bound(big, rbig) == 4);
    auto [rec_big, meta_big] = ode_to_recurrence(nbig);
    CHECK(meta_big.d <= 4);

    // o = 1, max deg 1, deg p = 0 -> 2
    NormalizationRecord trivial;
    CHECK(order_bound(make_stage({"-1", "1-x"}), trivial) == 2);
}

TEST_CASE("known series satisfy their recurrences for n <= 500") {
    const long mu = 505;
    // exp: D f - f = 0, F(n) = 1/n!
    {
        auto [rec, meta] = ode_to_recurrence(make_stage({"-1", "1"}));
        std::vector<Rational> f{Rational(1)};
        for (long n = 1; n <= mu; ++n)
            f.push_back(f.back() / Rational(n));
        for (const Rational& v : apply_recurrence(rec, f, mu - rec.order()))
            REQUIRE(v == 0);
    }
    // geometric: (1-x) D f - f = 0, F(n) = 1
    {
        auto [rec, meta] = ode_to_recurrence(make_stage({"-1", "1-x"}));
        std::vector<Rational> f(static_cast<std::size_t>(mu) + 1, Rational(1));
        for (const Rational& v : apply_recurrence(rec, f, mu - rec.order()))
            REQUIRE(v == 0);
    }
    // harmonic generating function: (1-x)^2 D f - (1-x) f = 1, F(n) = H_n
    {
        auto [rec, meta] = ode_to_recurrence(make_stage({"-(1-x)", "(1-x)^2"}));
        CHECK(rec.rhs_offset == -1);
        CHECK(meta.d == 2);
        std::vector<Rational> h{Rational(0)};
        for (long n = 1; n <= mu; ++n)
            h.push_back(h.back() + make_rational(1, Int(n)));
        // rhs stream is (1, 0, 0, ...), aligned access R(n - rhs_offset) = R(n+1) = 0
        auto rels = apply_recurrence(rec, h, mu - rec.order());
        for (const Rational& v : rels)
            REQUIRE(v == 0);
    }
}

TEST_CASE("normalization shrinks the order by exactly deg p") {
    std::uniform_int_distribution<int> pdeg_dist(1, 4);
    for (int it = 0; it < 30; ++it) {
        // base: order 2, alpha_0 of exact degree 2, alpha_2(0) != 0
        Poly a0 = random_poly_deg(Var::x, 2, true);
        Poly a1 = random_poly_deg(Var::x, 2, false);
        Poly a2 = random_poly_deg(Var::x, 2, false);
        {
            std::vector<Rational> c{Rational(1)};
            for (int i = 1; i <= a2.degree(); ++i)
                c.push_back(a2.coeff(i));
            a2 = Poly(Var::x, std::move(c));  // force alpha_2(0) = 1
        }
        int pd = pdeg_dist(rng);
        Poly p = random_poly_deg(Var::x, pd, true);
        std::vector<Rational> pc{Rational(1)};
        for (int i = 1; i <= p.degree(); ++i)
            pc.push_back(p.coeff(i));
        p = Poly(Var::x, std::move(pc));  // p(0) = 1

        ScalarStage base = make_stage({a0.str(), a1.str(), a2.str()});
        ScalarStage scaled = base;
        for (BiPoly& a : scaled.alpha)
            a = a * BiPoly::from_outer(p);

        // the base must not itself carry removable content for the exact count
        auto [nbase, rbase] = normalize_stage(base);
        if (rbase.p.degree() + rbase.k != 0)
            continue;

        auto [rec_plain, meta_plain] = ode_to_recurrence(scaled);
        auto [nstage, record] = normalize_stage(scaled);
        CHECK(record.p.degree() + record.k == p.degree());
        auto [rec_norm, meta_norm] = ode_to_recurrence(nstage);
        CHECK(meta_plain.d - meta_norm.d == p.degree());
        CHECK(meta_norm.d <= order_bound(scaled, record));
    }
}

TEST_CASE("order never exceeds the bound") {
    for (int it = 0; it < 40; ++it) {
        std::uniform_int_distribution<int> odist(0, 3), ddist(0, 3);
        int o = odist(rng);
        std::vector<std::string> alphas;
        bool nonzero = false;
        for (int i = 0; i <= o; ++i) {
            Poly a = random_poly_deg(Var::x, ddist(rng), false);
            if (i == o && a.is_zero())
                a = Poly::constant(Var::x, 1);
            nonzero = nonzero || !a.is_zero();
            alphas.push_back(a.is_zero() ? "0" : a.str());
        }
        if (!nonzero)
            continue;
        ScalarStage st = make_stage(alphas);
        auto [nstage, record] = normalize_stage(st);
        auto [rec, meta] = ode_to_recurrence(nstage);
        CHECK(meta.d <= order_bound(st, record));
    }
}
