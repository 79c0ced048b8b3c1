#pragma once

#include <string>

#include "momenta/bipoly.hpp"

namespace momenta {

/// Rational function num/den over K[outer, ep].  Kept reduced by rational
/// content, common monomial factors and same-variable univariate gcd; full
/// bivariate gcd reduction is deliberately not attempted.
class RatFunc {
public:
    explicit RatFunc(Var outer = Var::x)
        : num_(outer), den_(BiPoly::constant(outer, 1)) {}
    RatFunc(BiPoly num, BiPoly den);

    static RatFunc constant(Var outer, Rational c);
    static RatFunc from_poly(BiPoly p);

    const BiPoly& num() const { return num_; }
    const BiPoly& den() const { return den_; }
    Var outer() const { return num_.outer(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_constant(); }
    /// The numerator scaled by the constant denominator; error when not polynomial.
    BiPoly as_poly() const;

    RatFunc operator-() const;
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    /// Exact equality (cross multiplication).
    bool equals(const RatFunc& o) const;
    bool operator==(const RatFunc& o) const { return equals(o); }

    RatFunc derivative_outer() const;

    /// Total degree (outer + eps, num + den): the pivot-size measure.
    int total_degree() const;

    std::string str() const;

private:
    void reduce();

    BiPoly num_, den_;
};

} // namespace momenta
