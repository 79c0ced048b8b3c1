#pragma once

#include <span>
#include <vector>

#include "momenta/rational.hpp"

namespace momenta {

/// Nested harmonic sum S_{a1,...,ak}(n) =
///   sum_{i=1}^{n} sign(a1)^i / i^|a1| * S_{a2,...,ak}(i),   S_{}(n) = 1.
/// Indices must be nonzero; S of a nonempty index list at n = 0 is 0.
Rational harmonic_sum(std::span<const long> indices, long n);

/// Values S(0), S(1), ..., S(mu) computed incrementally in O(k * mu).
std::vector<Rational> harmonic_sum_stream(std::span<const long> indices, long mu);

} // namespace momenta
