#pragma once

#include "momenta/recurrence.hpp"
#include "momenta/uncouple.hpp"

namespace momenta {

/// What was divided out of a stage: the common ep-power u, the monic content
/// p(x) of the ep-free coefficient parts with p(0) != 0, and the x-power k
/// extracted from that content.
struct NormalizationRecord {
    int u = 0;
    Poly p{Var::x};
    int k = 0;

    NormalizationRecord() : p(Poly::constant(Var::x, 1)) {}
};

/// Divides the stage equation by ep^u and by x^k p(x); the remaining
/// ep-dependent coefficient parts (alpha_i(x,ep) - alpha_i(x,0)) / (x^k p(x))
/// move to the right-hand side as operators on the component's own lower
/// ep-layers.  The returned stage has ep-free coefficients.
std::pair<ScalarStage, NormalizationRecord> normalize_stage(const ScalarStage& stage);

/// Coefficient comparison at x^n: each monomial c x^a ep^e D^b contributes
/// c ep^e (n+b-a)(n+b-a-1)...(n-a+1) F(n+b-a).  The shift support is
/// re-indexed to 0..d; the right-hand side stream is consumed with the
/// recorded offset.
std::pair<EpsRecurrence, RecurrenceMeta> ode_to_recurrence(const ScalarStage& stage);

/// Upper bound o_j + max_i deg_x(alpha_i) - deg_x(x^k p) for the recurrence
/// order of the normalized stage; `stage` is the stage as it was before
/// normalization.
int order_bound(const ScalarStage& stage, const NormalizationRecord& record);

} // namespace momenta
