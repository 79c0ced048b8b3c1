#include "momenta/ode2rec.hpp"

#include <algorithm>
#include <map>

namespace momenta {

std::pair<ScalarStage, NormalizationRecord> normalize_stage(const ScalarStage& stage) {
    NormalizationRecord record;
    bool all_zero = true;
    for (const BiPoly& a : stage.alpha)
        all_zero = all_zero && a.is_zero();
    if (all_zero)
        fail(ErrorClass::degenerate_input,
             "stage for f" + std::to_string(stage.component) + " has no coefficients");

    // common ep-power
    int u = -1;
    for (const BiPoly& a : stage.alpha) {
        if (a.is_zero())
            continue;
        int v = a.eps_valuation();
        u = u < 0 ? v : std::min(u, v);
    }
    record.u = std::max(u, 0);

    ScalarStage out;
    out.component = stage.component;
    out.order = stage.order;
    std::vector<BiPoly> divided;
    divided.reserve(stage.alpha.size());
    for (const BiPoly& a : stage.alpha)
        divided.push_back(a.is_zero() ? a : a.divide_eps_power(record.u));

    // content of the ep-free parts
    std::vector<Poly> eps0;
    eps0.reserve(divided.size());
    for (const BiPoly& a : divided)
        eps0.push_back(a.at_eps0());
    Poly content = poly_content(eps0);
    record.k = content.valuation();
    record.p = record.k > 0
                   ? poly_divexact(content, Poly::variable(Var::x).pow(static_cast<unsigned>(record.k)))
                   : content;

    Poly divisor = record.p.mul_power(record.k);  // x^k p(x)
    RatFunc divisor_inv =
        RatFunc(BiPoly::constant(Var::x, 1), BiPoly::from_outer(divisor));
    RatFunc eps_shift = record.u > 0
                            ? RatFunc(BiPoly::constant(Var::x, 1),
                                      BiPoly::monomial(Var::x, 0, record.u, Rational(1)))
                            : RatFunc::constant(Var::x, 1);

    out.alpha.reserve(divided.size());
    for (std::size_t i = 0; i < divided.size(); ++i) {
        out.alpha.push_back(BiPoly::from_outer(poly_divexact(eps0[i], divisor)));
        BiPoly tail = divided[i] - BiPoly::from_outer(eps0[i]);
        if (!tail.is_zero()) {
            // ep-dependent remainder acts on the component's own lower layers
            RatFunc coeff = -(RatFunc::from_poly(tail) * divisor_inv);
            out.rhs.push_back({std::move(coeff), static_cast<int>(i),
                               {Source::Kind::component, stage.component}});
        }
    }
    for (const LinOpTerm& term : stage.rhs) {
        LinOpTerm t = term;
        t.coeff = t.coeff * divisor_inv * eps_shift;
        out.rhs.push_back(std::move(t));
    }
    return {std::move(out), std::move(record)};
}

std::pair<EpsRecurrence, RecurrenceMeta> ode_to_recurrence(const ScalarStage& stage) {
    // collect shift contributions: shift s = b - a gets c ep^e ff(n) with
    // ff(n) = (n-a+1)...(n-a+b)
    int s_min = 0, s_max = 0;
    bool any = false;
    std::map<int, BiPoly> by_shift;
    for (int b = 0; b <= stage.order; ++b) {
        const BiPoly& a_poly = stage.alpha[static_cast<std::size_t>(b)];
        if (a_poly.is_zero())
            continue;
        a_poly.for_each_monomial([&](int a, int e, const Rational& c) {
            int s = b - a;
            Poly ff = Poly::constant(Var::n, c);
            for (int t = 1; t <= b; ++t)
                ff *= Poly(Var::n, {Rational(t - a), Rational(1)});  // (n - a + t)
            if (ff.is_zero())
                return;
            BiPoly contrib = BiPoly::from_outer(ff) * BiPoly::monomial(Var::n, 0, e, Rational(1));
            auto it = by_shift.find(s);
            if (it == by_shift.end())
                by_shift.emplace(s, std::move(contrib));
            else
                it->second += contrib;
            if (!any) {
                s_min = s_max = s;
                any = true;
            } else {
                s_min = std::min(s_min, s);
                s_max = std::max(s_max, s);
            }
        });
    }
    if (!any)
        fail(ErrorClass::degenerate_input, "stage has identically zero coefficients");
    // trim shifts whose contributions cancelled
    auto shift_zero = [&](int s) {
        auto it = by_shift.find(s);
        return it == by_shift.end() || it->second.is_zero();
    };
    while (s_min < s_max && shift_zero(s_min))
        ++s_min;
    while (s_max > s_min && shift_zero(s_max))
        --s_max;

    EpsRecurrence rec;
    rec.rhs_offset = s_min;
    rec.a.reserve(static_cast<std::size_t>(s_max - s_min) + 1);
    for (int s = s_min; s <= s_max; ++s) {
        auto it = by_shift.find(s);
        if (it == by_shift.end()) {
            rec.a.push_back(BiPoly(Var::n));
            continue;
        }
        rec.a.push_back(it->second.shifted_outer(Rational(-s_min)));
    }
    RecurrenceMeta meta = recurrence_meta(rec);
    return {std::move(rec), meta};
}

int order_bound(const ScalarStage& stage, const NormalizationRecord& record) {
    int maxdeg = 0;
    for (const BiPoly& a : stage.alpha)
        maxdeg = std::max(maxdeg, a.degree_outer());
    return stage.order + maxdeg - (record.p.degree() + record.k);
}

} // namespace momenta
