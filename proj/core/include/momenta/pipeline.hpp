#pragma once

#include "momenta/ode2rec.hpp"
#include "momenta/propagate.hpp"
#include "momenta/system.hpp"
#include "momenta/uncouple.hpp"

namespace momenta {

struct StageReport {
    int component = 1;
    int order = 0;
    NormalizationRecord norm;
    int rec_order = 0;  // d of the produced recurrence
    int d_prime = 0;
    int delta = 0;
    long init_required = 0;
    int bound = 0;  // order bound from the unnormalized stage
    EpsRecurrence recurrence;
};

struct PipelineOptions {
    /// Recompute with all internal window/length requirements widened by one
    /// and compare; catches under-computed requirements.
    bool verify_window = false;
};

/// Engine-computed needs: how far each component and provider stream must
/// reach so that the requested windows and mu are attainable.
struct Requirements {
    std::vector<EpsWindow> component_window;  // per component (index-1), raised
    std::vector<long> component_len;          // uniform consumer-facing length
    std::vector<long> component_growth;       // extra length per layer downwards
    std::vector<int> provider_hi;             // highest ep-order pulled, INT_MIN if unused
    std::vector<long> provider_len;           // moments pulled per layer
};

struct PreparedStages {
    UncoupledSystem raw;
    std::vector<ScalarStage> normalized;   // by component
    std::vector<NormalizationRecord> records;
    std::vector<EpsRecurrence> recurrences;
    std::vector<RecurrenceMeta> metas;
    std::vector<int> bounds;
};

PreparedStages prepare_stages(const CoupledSystem& sys);

Requirements compute_requirements(const PreparedStages& st,
                                  const std::vector<EpsWindow>& requested, long mu);

struct PipelineResult {
    std::vector<LayeredMoments> components;
    std::vector<StageReport> reports;
};

/// Full run: uncouple, normalize, convert, then propagate components in
/// ascending stage order with right-hand sides assembled from providers and
/// the already computed components.
PipelineResult pipeline_moments(const CoupledSystem& sys, const InitialValues& init,
                                const std::vector<EpsWindow>& windows, long mu,
                                const PipelineOptions& options = {});

/// Independent check: forward coefficient recursion on the coupled system
/// itself with truncated ep-series arithmetic; needs one initial value per
/// component and ep-order, and x = 0 ordinary (cleared lhs nonzero at x=0).
std::vector<LayeredMoments> direct_oracle(const CoupledSystem& sys, const InitialValues& init,
                                          const std::vector<EpsWindow>& windows, long mu);

/// Exact comparison on the requested windows; returns a human-readable
/// mismatch description or nullopt when equal.
std::optional<std::string> compare_moments(const std::vector<LayeredMoments>& a,
                                           const std::vector<LayeredMoments>& b,
                                           const std::vector<EpsWindow>& windows, long mu);

} // namespace momenta
