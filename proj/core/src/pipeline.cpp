#include "momenta/pipeline.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <sstream>

namespace momenta {

PreparedStages prepare_stages(const CoupledSystem& sys) {
    PreparedStages st;
    st.raw = gauss_uncouple(sys);
    for (const ScalarStage& stage : st.raw.stages) {
        auto [normalized, record] = normalize_stage(stage);
        auto [rec, meta] = ode_to_recurrence(normalized);
        st.bounds.push_back(order_bound(stage, record));
        if (meta.d > st.bounds.back())
            fail(ErrorClass::internal,
                 "recurrence order " + std::to_string(meta.d) + " exceeds its bound " +
                     std::to_string(st.bounds.back()));
        st.normalized.push_back(std::move(normalized));
        st.records.push_back(std::move(record));
        st.recurrences.push_back(std::move(rec));
        st.metas.push_back(meta);
    }
    return st;
}

namespace {

// relation count needed to propagate one layer of stage j to length len
long rhs_need(const PreparedStages& st, int j, long len) {
    const auto& meta = st.metas[static_cast<std::size_t>(j - 1)];
    const auto& rec = st.recurrences[static_cast<std::size_t>(j - 1)];
    return std::max<long>(len - meta.d_prime - rec.rhs_offset, 0);
}

} // namespace

Requirements compute_requirements(const PreparedStages& st,
                                  const std::vector<EpsWindow>& requested, long mu) {
    const int lambda = static_cast<int>(st.normalized.size());
    Requirements req;
    req.component_window = requested;
    req.component_len.assign(static_cast<std::size_t>(lambda), mu + 1);
    req.component_growth.assign(static_cast<std::size_t>(lambda), 0);
    int providers = lambda;
    req.provider_hi.assign(static_cast<std::size_t>(providers), INT_MIN);
    req.provider_len.assign(static_cast<std::size_t>(providers), 0);

    for (int j = lambda; j >= 1; --j) {
        const ScalarStage& stage = st.normalized[static_cast<std::size_t>(j - 1)];
        const auto& meta = st.metas[static_cast<std::size_t>(j - 1)];
        EpsWindow& window = req.component_window[static_cast<std::size_t>(j - 1)];

        // self terms stretch lower layers
        long growth = 0;
        for (const LinOpTerm& t : stage.rhs) {
            if (t.src.kind == Source::Kind::component && t.src.index == j) {
                TermCost cost = linop_term_cost(t);
                long delta = -cost.len_delta;  // length consumed by the term
                growth = std::max(growth,
                                  delta - meta.d_prime -
                                      st.recurrences[static_cast<std::size_t>(j - 1)].rhs_offset);
            }
        }
        req.component_growth[static_cast<std::size_t>(j - 1)] = growth;

        const long len_low =
            req.component_len[static_cast<std::size_t>(j - 1)] +
            growth * static_cast<long>(window.span() - 1);
        const long need_b = rhs_need(st, j, len_low);

        for (const LinOpTerm& t : stage.rhs) {
            TermCost cost = linop_term_cost(t);
            if (t.src.kind == Source::Kind::component) {
                if (t.src.index == j)
                    continue;  // self terms handled by growth
                auto idx = static_cast<std::size_t>(t.src.index - 1);
                req.component_window[idx].hi =
                    std::max(req.component_window[idx].hi, window.hi - cost.eps_shift);
                req.component_len[idx] =
                    std::max(req.component_len[idx], need_b - cost.len_delta);
            } else {
                auto idx = static_cast<std::size_t>(t.src.index - 1);
                req.provider_hi[idx] = std::max(req.provider_hi[idx], window.hi - cost.eps_shift);
                req.provider_len[idx] = std::max(req.provider_len[idx], need_b - cost.len_delta);
            }
        }
    }
    return req;
}

namespace {

struct ProviderStream {
    LayeredStream stream;
    bool used = false;
};

LayeredStream materialize_provider(const MomentProvider& p, int provider_index, int hi_needed,
                                   long len_needed) {
    int lo;
    if (p.window())
        lo = p.window()->lo;
    else
        lo = hi_needed;  // unbounded provider: orders below never asked explicitly
    if (p.window() && p.window()->hi < hi_needed)
        fail(ErrorClass::window_shortfall,
             "provider g" + std::to_string(provider_index) + " covers ep-orders up to " +
                 std::to_string(p.window()->hi) + ", the run needs " + std::to_string(hi_needed));
    LayeredStream s;
    s.lo = lo;
    for (int k = lo; k <= hi_needed; ++k) {
        if (len_needed - 1 > p.capacity(k))
            fail(ErrorClass::capacity_shortfall,
                 "provider g" + std::to_string(provider_index) + " holds " +
                     std::to_string(p.capacity(k) + 1) + " moments at ep-order " +
                     std::to_string(k) + ", the run needs " + std::to_string(len_needed));
        s.layers.push_back(p.moments(k, len_needed - 1));
    }
    return s;
}

} // namespace

PipelineResult pipeline_moments(const CoupledSystem& sys, const InitialValues& init,
                                const std::vector<EpsWindow>& windows, long mu,
                                const PipelineOptions& options) {
    if (static_cast<int>(windows.size()) != sys.lambda)
        fail(ErrorClass::degenerate_input, "one ep-window per component required");
    if (mu < 0)
        fail(ErrorClass::degenerate_input, "mu must be nonnegative");

    PreparedStages st = prepare_stages(sys);
    const int lambda = sys.lambda;

    auto run = [&](long slack) {
        Requirements req = compute_requirements(st, windows, mu);
        if (slack > 0) {
            // widen everything that does not need extra initial values:
            // stream lengths and provider pulls
            for (auto& l : req.component_len)
                l += slack;
        }

        // init availability check, fail fast with the stage and layer
        for (int j = 1; j <= lambda; ++j) {
            const auto& meta = st.metas[static_cast<std::size_t>(j - 1)];
            const EpsWindow& w = req.component_window[static_cast<std::size_t>(j - 1)];
            long required = std::min<long>(meta.required_initial_count, mu + 1);
            if (required == 0)
                continue;
            for (int k = w.lo; k <= w.hi; ++k) {
                auto have = init.get(j, k);
                if (static_cast<long>(have.size()) < required)
                    fail(ErrorClass::init_shortfall,
                         "stage f" + std::to_string(j) + " ep-order " + std::to_string(k) +
                             " needs " + std::to_string(required) + " initial values, found " +
                             std::to_string(have.size()));
            }
        }

        // provider streams
        std::vector<ProviderStream> provider_streams(static_cast<std::size_t>(lambda));
        for (int i = 1; i <= lambda; ++i) {
            auto idx = static_cast<std::size_t>(i - 1);
            if (req.provider_hi[idx] == INT_MIN || req.provider_len[idx] <= 0)
                continue;  // provider is never read (for example at mu = 0)
            provider_streams[idx].used = true;
            provider_streams[idx].stream = materialize_provider(
                sys.rhs[idx], i, req.provider_hi[idx], req.provider_len[idx] + slack);
        }

        // per-component internal streams (ragged: lower layers longer)
        std::vector<LayeredStream> internal(static_cast<std::size_t>(lambda));
        std::vector<LayeredMoments> outputs;
        std::vector<StageReport> reports;

        for (int j = 1; j <= lambda; ++j) {
            auto idx = static_cast<std::size_t>(j - 1);
            const ScalarStage& stage = st.normalized[idx];
            const auto& meta = st.metas[idx];
            const auto& rec = st.recurrences[idx];
            const EpsWindow window = req.component_window[idx];
            const long growth = req.component_growth[idx];

            LinOpCombination cross, self;
            for (const LinOpTerm& t : stage.rhs) {
                if (t.src.kind == Source::Kind::component && t.src.index == j)
                    self.push_back(t);
                else
                    cross.push_back(t);
            }

            auto layer_len = [&](int k) {
                return req.component_len[idx] + growth * static_cast<long>(window.hi - k);
            };
            const long b_len = rhs_need(st, j, layer_len(window.lo));

            SourceLookup lookup = [&](const Source& src) -> const LayeredStream& {
                if (src.kind == Source::Kind::provider)
                    return provider_streams[static_cast<std::size_t>(src.index - 1)].stream;
                return internal[static_cast<std::size_t>(src.index - 1)];
            };
            LayeredStream cross_b = b_len > 0 ? apply_linop(cross, lookup, window, b_len)
                                              : LayeredStream::zeros(window, 0);

            // content below the requested window means the window was wrong
            for (int k = cross_b.lo; k < window.lo; ++k) {
                const auto& row = cross_b.layer(k);
                for (const Rational& v : row)
                    if (v != 0)
                        fail(ErrorClass::window_shortfall,
                             "component f" + std::to_string(j) +
                                 " has nonzero content at ep-order " + std::to_string(k) +
                                 " below the requested window; extend the window downwards");
            }

            Recurrence base = layer_recurrence(rec);
            base.rhs_offset = 0;  // layer right-hand sides below are relation-indexed

            LayeredStream own;
            own.lo = window.lo;
            for (int k = window.lo; k <= window.hi; ++k) {
                const long want = layer_len(k);
                // b is relation-indexed: entry n backs the relation at n and
                // reads the raw coefficient stream at n - rhs_offset
                const long rels = std::max<long>(want - meta.d_prime, 0);
                std::vector<Rational> b(static_cast<std::size_t>(rels), Rational(0));
                if (cross_b.has_layer(k)) {
                    const auto& row = cross_b.layer(k);
                    for (long n = 0; n < rels; ++n) {
                        long raw = n - rec.rhs_offset;
                        if (raw < 0)
                            continue;
                        if (raw >= static_cast<long>(row.size()))
                            fail(ErrorClass::internal, "rhs length bookkeeping failed");
                        b[static_cast<std::size_t>(n)] = row[static_cast<std::size_t>(raw)];
                    }
                }
                if (!self.empty() && k > window.lo) {
                    LayeredStream partial = own;  // layers lo..k-1
                    long partial_len = layer_len(k - 1);
                    for (auto& layer : partial.layers)
                        layer.resize(static_cast<std::size_t>(partial_len));
                    for (const LinOpTerm& t : self) {
                        LayeredStream contrib = apply_linop_term(t, partial);
                        if (!contrib.has_layer(k))
                            continue;
                        const auto& row = contrib.layer(k);
                        for (long n = 0; n < rels; ++n) {
                            long raw = n - rec.rhs_offset;
                            if (raw < 0)
                                continue;
                            if (raw >= static_cast<long>(row.size()))
                                fail(ErrorClass::internal, "self-term length bookkeeping failed");
                            b[static_cast<std::size_t>(n)] += row[static_cast<std::size_t>(raw)];
                        }
                    }
                }
                auto have = init.get(j, k);
                try {
                    own.layers.push_back(propagate(base, b, have, want - 1));
                } catch (const Error& e) {
                    fail(e.cls(), std::string(e.what()) + " (stage f" + std::to_string(j) +
                                      ", ep-order " + std::to_string(k) + ")");
                }
            }
            internal[idx] = std::move(own);

            StageReport report;
            report.component = j;
            report.order = st.raw.stages[idx].order;
            report.norm = st.records[idx];
            report.rec_order = meta.d;
            report.d_prime = meta.d_prime;
            report.delta = meta.delta;
            report.init_required = meta.required_initial_count;
            report.bound = st.bounds[idx];
            report.recurrence = rec;
            reports.push_back(std::move(report));
        }

        // trim to the requested windows and length
        for (int j = 1; j <= lambda; ++j) {
            LayeredMoments lm;
            lm.component = j;
            lm.stream = internal[static_cast<std::size_t>(j - 1)].restricted(
                windows[static_cast<std::size_t>(j - 1)], mu + 1);
            outputs.push_back(std::move(lm));
        }
        return std::pair(std::move(outputs), std::move(reports));
    };

    auto [outputs, reports] = run(0);
    if (options.verify_window) {
        auto [wider, wider_reports] = run(1);
        auto mismatch = compare_moments(outputs, wider, windows, mu);
        if (mismatch)
            fail(ErrorClass::window_shortfall,
                 "window verification failed, results change when requirements widen: " + *mismatch);
    }

    PipelineResult result;
    result.components = std::move(outputs);
    result.reports = std::move(reports);
    return result;
}

std::optional<std::string> compare_moments(const std::vector<LayeredMoments>& a,
                                           const std::vector<LayeredMoments>& b,
                                           const std::vector<EpsWindow>& windows, long mu) {
    if (a.size() != b.size())
        return "component count differs";
    for (std::size_t j = 0; j < a.size(); ++j) {
        const EpsWindow& w = windows[j];
        for (int k = w.lo; k <= w.hi; ++k) {
            const auto& ra = a[j].stream.layer(k);
            const auto& rb = b[j].stream.layer(k);
            for (long n = 0; n <= mu; ++n) {
                Rational va =
                    n < static_cast<long>(ra.size()) ? ra[static_cast<std::size_t>(n)] : Rational(0);
                Rational vb =
                    n < static_cast<long>(rb.size()) ? rb[static_cast<std::size_t>(n)] : Rational(0);
                if (va != vb) {
                    std::ostringstream os;
                    os << "component f" << (j + 1) << " ep-order " << k << " at n = " << n << ": "
                       << rational_str(va) << " vs " << rational_str(vb);
                    return os.str();
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace momenta
