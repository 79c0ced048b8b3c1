#include <climits>

#include "momenta/eps_series.hpp"
#include "momenta/pipeline.hpp"

namespace momenta {

namespace {

struct ClearedRow {
    BiPoly lead;                 // H_i(x, ep), cleared lhs multiplier
    std::vector<BiPoly> matrix;  // cleared row entries
    BiPoly g_coeff;              // multiplier on the provider stream
};

BiPoly clear_by(const RatFunc& r, const BiPoly& q) {
    auto quot = bipoly_try_divexact(q, r.den());
    if (!quot)
        fail(ErrorClass::internal, "row clearing failed");
    return r.num() * *quot;
}

} // namespace

std::vector<LayeredMoments> direct_oracle(const CoupledSystem& sys, const InitialValues& init,
                                          const std::vector<EpsWindow>& windows, long mu) {
    if (static_cast<int>(windows.size()) != sys.lambda)
        fail(ErrorClass::degenerate_input, "one ep-window per component required");
    const int lambda = sys.lambda;
    int wlo = INT_MAX, whi = INT_MIN;
    for (const EpsWindow& w : windows) {
        wlo = std::min(wlo, w.lo);
        whi = std::max(whi, w.hi);
    }
    const int prec = whi - wlo;  // relative precision carried through

    // clear each row's denominators
    std::vector<ClearedRow> rows;
    for (int i = 1; i <= lambda; ++i) {
        ClearedRow row;
        BiPoly q = BiPoly::constant(Var::x, 1);
        auto add_den = [&](const RatFunc& r) {
            if (r.den().is_constant() || bipoly_try_divexact(q, r.den()))
                return;
            q = q * r.den();
        };
        add_den(sys.lhs[static_cast<std::size_t>(i - 1)]);
        for (int j = 1; j <= lambda; ++j)
            add_den(sys.entry(i, j));
        row.lead = clear_by(sys.lhs[static_cast<std::size_t>(i - 1)], q);
        for (int j = 1; j <= lambda; ++j)
            row.matrix.push_back(clear_by(sys.entry(i, j), q));
        row.g_coeff = q;
        const Poly h0 = row.lead.at_outer0();
        if (h0.is_zero() || h0.valuation() > 0)
            fail(ErrorClass::singular_point,
                 "row " + std::to_string(i) +
                     " is singular at the expansion point x = 0 (cleared lhs vanishes)");
        rows.push_back(std::move(row));
    }

    // provider contributions as layered streams, scaled by the row multiplier
    std::vector<LayeredStream> g_streams;
    for (int i = 1; i <= lambda; ++i) {
        const MomentProvider& p = sys.rhs[static_cast<std::size_t>(i - 1)];
        const BiPoly& q = rows[static_cast<std::size_t>(i - 1)].g_coeff;
        int hi_needed = whi - q.eps_valuation();
        int lo = p.window() ? p.window()->lo : hi_needed;
        if (p.window() && p.window()->hi < hi_needed)
            fail(ErrorClass::window_shortfall,
                 "provider g" + std::to_string(i) + " covers ep-orders up to " +
                     std::to_string(p.window()->hi) + ", the oracle needs " +
                     std::to_string(hi_needed));
        LayeredStream raw;
        raw.lo = lo;
        for (int k = lo; k <= hi_needed; ++k) {
            if (mu > p.capacity(k))
                fail(ErrorClass::capacity_shortfall,
                     "provider g" + std::to_string(i) + " holds " +
                         std::to_string(p.capacity(k) + 1) + " moments at ep-order " +
                         std::to_string(k) + ", the oracle needs " + std::to_string(mu + 1));
            raw.layers.push_back(p.moments(k, mu));
        }
        LinOpTerm scale{RatFunc::from_poly(q), 0, {Source::Kind::provider, i}};
        LayeredStream scaled = apply_linop_term(scale, raw);
        for (int k = scaled.lo; k < wlo; ++k)
            for (const Rational& v : scaled.layer(k))
                if (v != 0)
                    fail(ErrorClass::window_shortfall,
                         "provider g" + std::to_string(i) + " contributes at ep-order " +
                             std::to_string(k) + " below the requested windows");
        g_streams.push_back(std::move(scaled));
    }

    auto g_series = [&](int i, long n) {
        const LayeredStream& s = g_streams[static_cast<std::size_t>(i - 1)];
        std::vector<Rational> coeffs(static_cast<std::size_t>(whi - wlo) + 1, Rational(0));
        for (int k = std::max(s.lo, wlo); k <= whi; ++k) {
            if (k > s.hi())
                fail(ErrorClass::window_shortfall, "oracle provider stream window too small");
            const auto& row = s.layer(k);
            if (n >= static_cast<long>(row.size()))
                fail(ErrorClass::internal, "oracle provider stream too short");
            coeffs[static_cast<std::size_t>(k - wlo)] = row[static_cast<std::size_t>(n)];
        }
        return EpsSeries(wlo, std::move(coeffs));
    };

    // initial values: one ep-series per component at n = 0
    std::vector<std::vector<EpsSeries>> f(static_cast<std::size_t>(lambda));
    for (int j = 1; j <= lambda; ++j) {
        std::vector<Rational> coeffs;
        for (int k = wlo; k <= whi; ++k) {
            auto vals = init.get(j, k);
            const EpsWindow& w = windows[static_cast<std::size_t>(j - 1)];
            if (k < w.lo) {
                coeffs.emplace_back(0);
                continue;
            }
            if (vals.empty())
                fail(ErrorClass::init_shortfall,
                     "oracle needs F" + std::to_string(j) + "(0) at ep-order " + std::to_string(k));
            coeffs.push_back(vals[0]);
        }
        f[static_cast<std::size_t>(j - 1)].push_back(EpsSeries(wlo, std::move(coeffs)));
    }

    // series inverses of H_i(0, ep), exact polynomials so full precision
    std::vector<EpsSeries> lead0_inv;
    for (const ClearedRow& row : rows) {
        EpsSeries num = EpsSeries::constant(Rational(1), prec);
        EpsSeries den = EpsSeries::from_poly(row.lead.at_outer0(), prec);
        lead0_inv.push_back(num / den);
    }

    for (long n = 0; n < mu; ++n) {
        for (int i = 1; i <= lambda; ++i) {
            const ClearedRow& row = rows[static_cast<std::size_t>(i - 1)];
            EpsSeries acc = g_series(i, n);
            for (int j = 1; j <= lambda; ++j) {
                const BiPoly& a = row.matrix[static_cast<std::size_t>(j - 1)];
                if (a.is_zero())
                    continue;
                const auto& fj = f[static_cast<std::size_t>(j - 1)];
                a.for_each_monomial([&](int xa, int e, const Rational& c) {
                    long m = n - xa;
                    if (m < 0)
                        return;
                    EpsSeries term = fj[static_cast<std::size_t>(m)].shift(e);
                    std::vector<Rational> scaled;
                    for (int k = term.lo(); k <= term.hi(); ++k)
                        scaled.push_back(term.coeff(k) * c);
                    acc = acc + EpsSeries(term.lo(), std::move(scaled)).restricted(wlo, whi);
                });
            }
            // subtract lhs contributions from x^a, a >= 1
            const auto& fi = f[static_cast<std::size_t>(i - 1)];
            row.lead.for_each_monomial([&](int xa, int e, const Rational& c) {
                if (xa == 0)
                    return;
                long m = n + 1 - xa;
                if (m < 0)
                    return;
                Rational factor = c * Rational(m);
                if (factor == 0)
                    return;
                EpsSeries term = fi[static_cast<std::size_t>(m)].shift(e);
                std::vector<Rational> scaled;
                for (int k = term.lo(); k <= term.hi(); ++k)
                    scaled.push_back(term.coeff(k) * factor);
                acc = acc - EpsSeries(term.lo(), std::move(scaled)).restricted(wlo, whi);
            });
            EpsSeries next =
                (acc * lead0_inv[static_cast<std::size_t>(i - 1)]).restricted(wlo, whi);
            std::vector<Rational> scaled;
            Rational inv_n1 = Rational(1) / Rational(n + 1);
            for (int k = wlo; k <= whi; ++k)
                scaled.push_back(next.coeff(k) * inv_n1);
            f[static_cast<std::size_t>(i - 1)].push_back(EpsSeries(wlo, std::move(scaled)));
        }
    }

    std::vector<LayeredMoments> out;
    for (int j = 1; j <= lambda; ++j) {
        const EpsWindow& w = windows[static_cast<std::size_t>(j - 1)];
        LayeredMoments lm;
        lm.component = j;
        lm.stream.lo = w.lo;
        lm.stream.layers.assign(static_cast<std::size_t>(w.span()),
                                std::vector<Rational>(static_cast<std::size_t>(mu) + 1));
        for (long n = 0; n <= mu; ++n) {
            const EpsSeries& s = f[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(n)];
            for (int k = w.lo; k <= w.hi; ++k)
                lm.stream.layers[static_cast<std::size_t>(k - w.lo)][static_cast<std::size_t>(n)] =
                    s.coeff(k);
        }
        out.push_back(std::move(lm));
    }
    return out;
}

} // namespace momenta
