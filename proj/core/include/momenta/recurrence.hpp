#pragma once

#include <vector>

#include "momenta/bipoly.hpp"

namespace momenta {

/// Linear recurrence sum_i a_i(n, ep) F(n+i, ep) = b(n, ep) in shift-normal
/// form: coefficients cover shifts 0..d.  `rhs_offset` records the original
/// shift support minimum s_min: the aligned right-hand side is
/// b_aligned(n) = B(n - rhs_offset), zero for n < rhs_offset, where B is the
/// raw coefficient-extraction stream of the source equation.
struct EpsRecurrence {
    std::vector<BiPoly> a;  // outer var n; a.front() and a.back() not both zero
    int rhs_offset = 0;

    int order() const { return static_cast<int>(a.size()) - 1; }
};

/// The ep-free specialization sum_i a_i(n) F(n+i) = b(n).
struct Recurrence {
    std::vector<Poly> a;  // var n; a.back() nonzero
    int rhs_offset = 0;

    int order() const { return static_cast<int>(a.size()) - 1; }
};

struct RecurrenceMeta {
    int d = 0;        // order of the ep-recurrence
    int d_prime = 0;  // maximal i with a_i(n, 0) != 0
    int delta = 0;    // start index for the leading ep-free coefficient
    long required_initial_count = 0;  // max(d_prime, delta)
};

RecurrenceMeta recurrence_meta(const EpsRecurrence& rec);

/// The ep-free layer recurrence a_i(n,0), i = 0..d'.
Recurrence layer_recurrence(const EpsRecurrence& rec);

/// Embed an ep-free recurrence.
EpsRecurrence lift_recurrence(const Recurrence& rec);

} // namespace momenta
