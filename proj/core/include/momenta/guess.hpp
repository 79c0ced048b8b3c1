#pragma once

#include <optional>
#include <span>

#include "momenta/recurrence.hpp"

namespace momenta {

struct GuessConfig {
    int max_order = 3;
    int max_degree = 3;
    int holdout = 50;      // moments reserved for verification
    unsigned prime_bits = 62;
    unsigned prime_salt = 0;  // disjoint prime streams for independence checks
};

/// Searches (order, degree) cells by unknown count, then order, for a
/// homogeneous recurrence sum_i a_i(n) F(n+i) = 0 annihilating the whole
/// stream (holdout included).  Each cell is solved modulo word-size primes,
/// combined by CRT, reconstructed over Q and certified exactly.  The result
/// is normalized to content-free integer coefficients with a positive
/// leading coefficient; nullopt when no cell admits a certified solution.
std::optional<Recurrence> guess_recurrence(std::span<const Rational> moments,
                                           const GuessConfig& cfg);

/// Exact check of sum_i a_i(n) F(n+i) = 0 for every applicable n; on failure
/// the first violated relation index is returned.
std::pair<bool, std::optional<long>> verify_annihilates(const Recurrence& rec,
                                                        std::span<const Rational> moments);

} // namespace momenta
