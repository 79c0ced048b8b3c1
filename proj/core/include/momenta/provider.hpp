#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "momenta/expr.hpp"
#include "momenta/harmonic.hpp"
#include "momenta/layered.hpp"
#include "momenta/poly.hpp"
#include "momenta/recurrence.hpp"

namespace momenta {

/// A source of per-ep-order moment streams for one inhomogeneous component.
/// Immutable after construction; safe for concurrent reads.
///
/// Orders inside the window that the payload does not mention are zero
/// streams (the window is the declaration of what the provider knows);
/// orders outside the window are an error.  An absent window means the
/// provider can answer any order.
class MomentProvider {
public:
    enum class Kind { constant, harmonic, file, recurrence, composite };

    struct RecurrenceLayer {
        Recurrence rec;
        std::vector<Rational> init;
        std::vector<Rational> rhs;  // aligned stream; empty = homogeneous
    };

    static MomentProvider zero();
    static MomentProvider constant(std::map<int, Rational> values,
                                   std::optional<EpsWindow> window);
    static MomentProvider harmonic(std::map<int, HarmonicExpr> expressions,
                                   std::optional<EpsWindow> window);
    static MomentProvider from_files(std::vector<std::string> paths,
                                     std::optional<EpsWindow> window);
    static MomentProvider recurrence_backed(std::map<int, RecurrenceLayer> layers,
                                            std::optional<EpsWindow> window);
    static MomentProvider composite(
        std::vector<std::pair<PolyFrac, MomentProvider>> terms,
        std::optional<EpsWindow> window);

    Kind kind() const;
    const std::optional<EpsWindow>& window() const;

    /// Largest moment index available at order k (mu may be at most this).
    long capacity(int k) const;

    /// Exact moments G(0..mu) at ep-order k.  Deterministic and repeatable.
    std::vector<Rational> moments(int k, long mu) const;

    std::string describe() const;

    struct Impl;

private:
    explicit MomentProvider(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

} // namespace momenta
