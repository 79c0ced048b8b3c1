#pragma once

#include <functional>
#include <string>
#include <vector>

#include "momenta/layered.hpp"
#include "momenta/ratfunc.hpp"
#include "momenta/system.hpp"

namespace momenta {

struct Source {
    enum class Kind { provider, component };
    Kind kind = Kind::provider;
    int index = 1;  // 1-based

    bool operator==(const Source&) const = default;
    bool operator<(const Source& o) const {
        return std::pair(kind, index) < std::pair(o.kind, o.index);
    }
    std::string str() const;
};

/// One term coeff(x,ep) * D_x^dx applied to a moment-stream source.
struct LinOpTerm {
    RatFunc coeff;
    int dx = 0;
    Source src;
};

using LinOpCombination = std::vector<LinOpTerm>;

/// Scalar stage sum_i alpha_i(x,ep) D_x^i f_j = rhs.  Stage coefficients are
/// denominator-cleared polynomials; rhs terms keep rational coefficients and
/// reference providers and components solved before j (after normalization
/// also f_j itself, restricted to lower ep-layers).
struct ScalarStage {
    int component = 1;
    int order = 0;
    std::vector<BiPoly> alpha;  // size order+1, outer Var::x
    LinOpCombination rhs;

    std::string str() const;
};

/// Triangular stages indexed by component, solvable in ascending order:
/// stage j references only components < j (stage 1 references providers only).
struct UncoupledSystem {
    std::vector<ScalarStage> stages;
};

/// Staged Gauss uncoupling over K(x,ep): components lambda..2 are eliminated
/// in turn by right-division of the operator parts; the surviving equation
/// containing f_k becomes its stage.  Pivots prefer the lowest operator
/// order, then the smallest total coefficient degree, then the lowest row.
UncoupledSystem gauss_uncouple(const CoupledSystem& sys);

/// Exact division a / b in K(ep)[x]; nullopt when not divisible.
std::optional<BiPoly> bipoly_try_divexact(const BiPoly& a, const BiPoly& b);

using SourceLookup = std::function<const LayeredStream&(const Source&)>;

/// Window shift and length cost of one operator term: the output of the term
/// is reliable on src.window + eps_shift with src.len + len_delta entries.
struct TermCost {
    int eps_shift = 0;
    long len_delta = 0;
};
TermCost linop_term_cost(const LinOpTerm& term);

/// Applies one term to a source stream.  The coefficient denominator is
/// factored as x^k * ep^v * q with q(0,0) != 0; x^k becomes an index shift,
/// ep^v a window shift and 1/q a power-series expansion.
LayeredStream apply_linop_term(const LinOpTerm& term, const LayeredStream& src);

/// Sum of all terms.  The result is reliable on the intersection of the
/// per-term windows and lengths; an error names the missing amount when it
/// cannot cover `want_window` x `want_len`.
LayeredStream apply_linop(const LinOpCombination& op, const SourceLookup& sources,
                          EpsWindow want_window, long want_len);

} // namespace momenta
