#pragma once

#include <functional>
#include <string>
#include <vector>

#include "momenta/poly.hpp"

namespace momenta {

/// Bivariate polynomial in (outer, ep): dense in the outer variable, each
/// outer coefficient a Poly in ep.  Canonical (no trailing zero outer
/// coefficients).
class BiPoly {
public:
    explicit BiPoly(Var outer = Var::x) : outer_(outer) {}
    BiPoly(Var outer, std::vector<Poly> coeffs);

    static BiPoly constant(Var outer, Rational c);
    static BiPoly from_outer(const Poly& p);                 // poly in outer var
    static BiPoly from_eps(Var outer, const Poly& p_in_eps);
    static BiPoly monomial(Var outer, int a, int e, Rational c);

    Var outer() const { return outer_; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1 && (c_.empty() || c_[0].is_constant()); }
    bool is_one() const;
    int degree_outer() const { return static_cast<int>(c_.size()) - 1; }
    int degree_eps() const;

    /// Coefficient of outer^a as a Poly in ep (zero poly outside range).
    const Poly& outer_coeff(int a) const;
    /// Coefficient of ep^e as a Poly in the outer variable.
    Poly eps_coeff(int e) const;
    /// Evaluation at ep = 0, as a Poly in the outer variable.
    Poly at_eps0() const { return eps_coeff(0); }
    /// Evaluation at outer = 0, as a Poly in ep.
    Poly at_outer0() const;

    int eps_valuation() const;    // min over monomials; 0 for the zero poly
    int outer_valuation() const;  // largest k with outer^k | p; 0 for zero

    BiPoly operator-() const;
    BiPoly& operator+=(const BiPoly& o);
    BiPoly& operator-=(const BiPoly& o);
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
    BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }
    BiPoly& operator*=(const Rational& s);
    bool operator==(const BiPoly& o) const { return outer_ == o.outer_ && c_ == o.c_; }

    BiPoly divide_eps_power(int u) const;
    BiPoly divide_outer_power(int k) const;
    BiPoly mul_outer_power(int k) const;
    /// Coefficient-wise exact division by a polynomial in the outer variable.
    BiPoly divexact_outer(const Poly& p) const;

    BiPoly derivative_outer() const;
    /// Substitute outer -> outer + s (used for recurrence re-indexing).
    BiPoly shifted_outer(const Rational& s) const;

    /// Joint rational content of all coefficients (positive), 0 for zero.
    Rational content() const;

    void for_each_monomial(const std::function<void(int a, int e, const Rational&)>& f) const;

    std::string str() const;

private:
    void trim();

    Var outer_;
    std::vector<Poly> c_;
};

} // namespace momenta
