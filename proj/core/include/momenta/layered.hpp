#pragma once

#include <string>
#include <vector>

#include "momenta/rational.hpp"

namespace momenta {

/// Inclusive range of ep-orders.
struct EpsWindow {
    int lo = 0;
    int hi = 0;

    int span() const { return hi - lo + 1; }
    bool contains(int k) const { return lo <= k && k <= hi; }
    bool operator==(const EpsWindow&) const = default;
};

/// Per-ep-order moment streams.  Orders below lo are exactly zero, orders
/// above the window are unknown.  All layers share one length.
struct LayeredStream {
    int lo = 0;
    std::vector<std::vector<Rational>> layers;

    static LayeredStream zeros(EpsWindow w, long len);

    int hi() const { return lo + static_cast<int>(layers.size()) - 1; }
    EpsWindow window() const { return {lo, hi()}; }
    long len() const { return layers.empty() ? 0 : static_cast<long>(layers.front().size()); }

    bool has_layer(int k) const { return k >= lo && k <= hi(); }
    /// Layer k; error above the window, an all-zero stream below it.
    const std::vector<Rational>& layer(int k) const;

    /// Drop layers outside [w.lo, w.hi] and truncate every layer to len.
    LayeredStream restricted(EpsWindow w, long len) const;

    bool operator==(const LayeredStream& o) const { return lo == o.lo && layers == o.layers; }
};

/// Moments of one component of the coupled system.
struct LayeredMoments {
    int component = 1;
    LayeredStream stream;
};

} // namespace momenta
