#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>

#include "momenta/layered.hpp"
#include "momenta/recurrence.hpp"

namespace momenta {

/// A sequence given by a rational expression in n valid from `valid_from` on,
/// with the finitely many earlier values listed explicitly.
struct RationalSeq {
    PolyFrac expr{Var::n};
    long valid_from = 0;
    std::vector<Rational> prefix;  // values at 0..valid_from-1

    static RationalSeq zero();
    static RationalSeq from_expr(PolyFrac f);

    Rational at(long n) const;
    std::vector<Rational> stream(long mu) const;
    std::string str() const;
};

struct SolutionExpr {
    enum class Kind { rational, moments };
    Kind kind = Kind::rational;
    RationalSeq seq;                // kind == rational
    std::vector<Rational> values;   // kind == moments
};

struct LayeredSolution {
    int lo = 0;
    std::vector<SolutionExpr> layers;
    int lambda_max = 0;  // highest ep-order solved in closed form; lo-1 if none
};

/// Rational-solution solver for sum_i a_i(n) F(n+i) = rhs(n): universal
/// denominator from the integer-root dispersion of the outer coefficients,
/// polynomial solutions by degree bound and exact linear algebra, then
/// matching of the initial values.  A result of kind `moments` means no
/// member of the rational class matches; it carries no values (the caller
/// decides how to materialize the stream).
std::optional<RationalSeq> solve_rational(const Recurrence& rec, const RationalSeq& rhs,
                                          std::span<const Rational> init);

/// Per-layer right-hand side: closed form, plain stream, or zero.
struct LayerRhs {
    enum class Kind { zero, closed, stream };
    Kind kind = Kind::zero;
    RationalSeq closed;
    std::vector<Rational> values;
};

struct EpsSolveOptions {
    long fallback_mu = 200;  // length of moment-fallback layers
};

using LayerInits = std::function<std::span<const Rational>(int layer)>;

/// Layer-by-layer solving: each layer's equation uses the ep-free coefficient
/// part; a solved layer updates the next right-hand side symbolically.  The
/// first layer without a rational solution (or with a stream-only right-hand
/// side) switches that layer and everything above to moment fallback.
LayeredSolution eps_layer_solve(const EpsRecurrence& rec, const std::map<int, LayerRhs>& rhs,
                                const LayerInits& init, EpsWindow window,
                                const EpsSolveOptions& options = {});

/// Dispersion-style resultant helper: Res_n(a(n), b(n+h)) as a polynomial in
/// h, by evaluation and interpolation.
Poly shift_resultant(const Poly& a, const Poly& b);

/// Resultant of two univariate rational-coefficient polynomials.
Rational resultant(const Poly& f, const Poly& g);

} // namespace momenta
