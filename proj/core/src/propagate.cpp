#include "momenta/propagate.hpp"

#include <algorithm>

namespace momenta {

LayeredStream LayeredStream::zeros(EpsWindow w, long len) {
    LayeredStream s;
    s.lo = w.lo;
    s.layers.assign(static_cast<std::size_t>(w.span()),
                    std::vector<Rational>(static_cast<std::size_t>(len), Rational(0)));
    return s;
}

const std::vector<Rational>& LayeredStream::layer(int k) const {
    static const std::vector<Rational> empty;
    if (k < lo) {
        // below the window: exactly zero; callers treat an empty vector as such
        return empty;
    }
    if (k > hi())
        fail(ErrorClass::window_shortfall,
             "ep-order " + std::to_string(k) + " above stream window [" + std::to_string(lo) +
                 ", " + std::to_string(hi()) + "]");
    return layers[static_cast<std::size_t>(k - lo)];
}

LayeredStream LayeredStream::restricted(EpsWindow w, long len) const {
    LayeredStream out;
    out.lo = w.lo;
    for (int k = w.lo; k <= w.hi; ++k) {
        const auto& src = layer(k);
        std::vector<Rational> row(static_cast<std::size_t>(len), Rational(0));
        if (static_cast<long>(src.size()) < len && k >= lo)
            fail(ErrorClass::capacity_shortfall,
                 "stream layer " + std::to_string(k) + " has " + std::to_string(src.size()) +
                     " moments, needs " + std::to_string(len));
        for (long n = 0; n < len && n < static_cast<long>(src.size()); ++n)
            row[static_cast<std::size_t>(n)] = src[static_cast<std::size_t>(n)];
        out.layers.push_back(std::move(row));
    }
    return out;
}

std::vector<Rational> propagate(const Recurrence& rec,
                                std::span<const Rational> rhs,
                                std::span<const Rational> init,
                                long mu) {
    if (rec.a.empty() || rec.a.back().is_zero())
        fail(ErrorClass::degenerate_input, "recurrence with zero leading coefficient");
    const int d = rec.order();
    const int delta = start_index_delta(rec.a.back());
    const long required = std::min<long>(std::max(d, delta), mu + 1);
    if (static_cast<long>(init.size()) < required)
        fail(ErrorClass::init_shortfall,
             "recurrence needs " + std::to_string(required) + " initial values, got " +
                 std::to_string(init.size()));

    std::vector<Rational> f;
    f.reserve(static_cast<std::size_t>(mu) + 1);
    for (long i = 0; i < static_cast<long>(init.size()) && i <= mu; ++i)
        f.push_back(init[static_cast<std::size_t>(i)]);

    auto rhs_at = [&](long n) -> Rational {
        if (rhs.empty() || n < rec.rhs_offset)
            return Rational(0);  // empty rhs means homogeneous
        long idx = n - rec.rhs_offset;
        if (idx >= static_cast<long>(rhs.size()))
            fail(ErrorClass::capacity_shortfall,
                 "right-hand side stream too short: need relation index " + std::to_string(n) +
                     ", have " + std::to_string(rhs.size()) + " entries past offset " +
                     std::to_string(rec.rhs_offset));
        return rhs[static_cast<std::size_t>(idx)];
    };

    // verify relations fully determined by supplied values
    for (long n = 0; n + d < static_cast<long>(f.size()); ++n) {
        Rational acc(0);
        for (int i = 0; i <= d; ++i)
            acc += rec.a[static_cast<std::size_t>(i)].eval_int(n) *
                   f[static_cast<std::size_t>(n + i)];
        if (acc != rhs_at(n))
            fail(ErrorClass::init_shortfall,
                 "initial values conflict with the recurrence at relation n = " + std::to_string(n));
    }

    const Poly& lead = rec.a.back();
    while (static_cast<long>(f.size()) <= mu) {
        long target = static_cast<long>(f.size());
        long n = target - d;
        Rational lc = lead.eval_int(n);
        if (lc == 0)
            fail(ErrorClass::init_shortfall,
                 "leading coefficient vanishes at n = " + std::to_string(n) +
                     "; value F(" + std::to_string(target) + ") is undetermined, supply initial values through that index");
        Rational acc = rhs_at(n);
        for (int i = 0; i < d; ++i)
            acc -= rec.a[static_cast<std::size_t>(i)].eval_int(n) *
                   f[static_cast<std::size_t>(n + i)];
        f.push_back(acc / lc);
    }
    return f;
}

RecurrenceMeta recurrence_meta(const EpsRecurrence& rec) {
    RecurrenceMeta meta;
    meta.d = rec.order();
    int dp = -1;
    for (int i = meta.d; i >= 0; --i) {
        if (!rec.a[static_cast<std::size_t>(i)].at_eps0().is_zero()) {
            dp = i;
            break;
        }
    }
    if (dp < 0)
        fail(ErrorClass::degenerate_input,
             "all recurrence coefficients vanish at ep = 0 (divide out the ep content first)");
    meta.d_prime = dp;
    meta.delta = start_index_delta(rec.a[static_cast<std::size_t>(dp)].at_eps0());
    meta.required_initial_count = std::max(meta.d_prime, meta.delta);
    return meta;
}

Recurrence layer_recurrence(const EpsRecurrence& rec) {
    RecurrenceMeta meta = recurrence_meta(rec);
    Recurrence out;
    out.rhs_offset = rec.rhs_offset;
    for (int i = 0; i <= meta.d_prime; ++i)
        out.a.push_back(rec.a[static_cast<std::size_t>(i)].at_eps0());
    return out;
}

EpsRecurrence lift_recurrence(const Recurrence& rec) {
    EpsRecurrence out;
    out.rhs_offset = rec.rhs_offset;
    for (const Poly& p : rec.a)
        out.a.push_back(BiPoly::from_outer(p));
    return out;
}

LayeredStream eps_layered_propagate(const EpsRecurrence& rec,
                                    const LayeredStream& rhs,
                                    const LayerInitLookup& init,
                                    EpsWindow window,
                                    long mu) {
    if (window.hi < window.lo)
        fail(ErrorClass::degenerate_input, "empty ep-window");
    RecurrenceMeta meta = recurrence_meta(rec);
    Recurrence base = layer_recurrence(rec);
    const int d = meta.d, dp = meta.d_prime;

    // lower layers must extend past mu when the ep-part of the coefficients
    // reaches shifts above d'
    const long growth = std::max(0, d - dp);
    std::vector<long> len(static_cast<std::size_t>(window.span()));
    for (int k = window.hi; k >= window.lo; --k)
        len[static_cast<std::size_t>(k - window.lo)] =
            mu + 1 + growth * static_cast<long>(window.hi - k);

    LayeredStream out;
    out.lo = window.lo;
    for (int k = window.lo; k <= window.hi; ++k) {
        const long want = len[static_cast<std::size_t>(k - window.lo)];
        // layer right-hand side: rhs layer k minus ep-tail contributions of
        // the already computed layers
        const long rels = std::max<long>(want - dp, 0);
        std::vector<Rational> b(static_cast<std::size_t>(rels), Rational(0));
        const auto& row = rhs.layer(k);  // throws above the rhs window; empty below it
        for (long n = 0; n < rels; ++n) {
            long raw = n - rec.rhs_offset;  // aligned access into rhs layer
            if (raw < 0 || row.empty())
                continue;
            if (raw >= static_cast<long>(row.size()))
                fail(ErrorClass::capacity_shortfall,
                     "rhs layer " + std::to_string(k) + " has " + std::to_string(row.size()) +
                         " entries, relation " + std::to_string(n) + " needs index " +
                         std::to_string(raw));
            b[static_cast<std::size_t>(n)] = row[static_cast<std::size_t>(raw)];
        }
        for (int e = 1; e <= k - window.lo; ++e) {
            const auto& lower = out.layers[static_cast<std::size_t>(k - e - window.lo)];
            for (int i = 0; i <= d; ++i) {
                Poly ce = rec.a[static_cast<std::size_t>(i)].eps_coeff(e);
                if (ce.is_zero())
                    continue;
                for (long n = 0; n < rels; ++n) {
                    long idx = n + i;
                    if (idx >= static_cast<long>(lower.size()))
                        fail(ErrorClass::internal, "layer length bookkeeping failed");
                    b[static_cast<std::size_t>(n)] -=
                        ce.eval_int(n) * lower[static_cast<std::size_t>(idx)];
                }
            }
        }
        Recurrence aligned = base;
        aligned.rhs_offset = 0;  // b above is already relation-indexed
        auto iv = init(k);
        try {
            out.layers.push_back(propagate(aligned, b, iv, want - 1));
        } catch (const Error& e) {
            fail(e.cls(), std::string(e.what()) + " (ep-order " + std::to_string(k) + ")");
        }
    }
    // trim to the requested length
    for (auto& layer : out.layers)
        layer.resize(static_cast<std::size_t>(mu) + 1);
    return out;
}

} // namespace momenta
