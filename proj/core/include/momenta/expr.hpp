#pragma once

#include <memory>
#include <string>
#include <vector>

#include "momenta/ratfunc.hpp"

namespace momenta {

/// Parses an arithmetic expression in the outer variable and `ep` into a
/// rational function.  Grammar: + - * / ^ with parentheses; integer literals
/// of arbitrary size; `^` takes an (optionally negative) integer exponent.
RatFunc parse_ratfunc(const std::string& text, Var outer);

/// Same, but requires the result to be polynomial.
BiPoly parse_bipoly(const std::string& text, Var outer);

/// Univariate in the outer variable (no ep allowed).
Poly parse_poly(const std::string& text, Var outer);

/// Univariate rational function in the outer variable.
PolyFrac parse_polyfrac(const std::string& text, Var outer);

/// Expression in n extended with harmonic-sum atoms S(a1,...,ak), evaluated
/// exactly at integer points.  Streams share the incremental prefix sums, so
/// evaluating 0..mu costs O(mu) per distinct sum.
class HarmonicExpr {
public:
    static HarmonicExpr parse(const std::string& text);

    Rational eval(long n) const;
    std::vector<Rational> eval_stream(long mu) const;

    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

} // namespace momenta
