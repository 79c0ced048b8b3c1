#pragma once

#include <functional>
#include <span>

#include "momenta/layered.hpp"
#include "momenta/recurrence.hpp"

namespace momenta {

/// Forward propagation of sum_i a_i(n) F(n+i) = b(n) up to F(mu) in linear
/// time.  `rhs` is the aligned right-hand side accessed at relation index n
/// (entries below rec.rhs_offset are implicitly zero, see EpsRecurrence).
/// `init` must supply min(max(d, delta), mu+1) leading values; relations that
/// are fully determined by the supplied values are verified and a conflict
/// reported with its relation index.
std::vector<Rational> propagate(const Recurrence& rec,
                                std::span<const Rational> rhs,
                                std::span<const Rational> init,
                                long mu);

/// Initial values per ep-order for one component.
using LayerInitLookup = std::function<std::span<const Rational>(int layer)>;

/// Layer-by-layer propagation of an ep-recurrence: for k = window.lo..hi the
/// layer right-hand side is built from rhs layer k minus the contributions of
/// all previously computed layers through the ep-dependent part of the
/// coefficients, then propagated with the ep-free layer recurrence.
/// Lower layers are computed long enough to feed higher ones; the result is
/// trimmed to mu+1.
LayeredStream eps_layered_propagate(const EpsRecurrence& rec,
                                    const LayeredStream& rhs,
                                    const LayerInitLookup& init,
                                    EpsWindow window,
                                    long mu);

} // namespace momenta
