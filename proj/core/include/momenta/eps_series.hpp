#pragma once

#include <string>
#include <vector>

#include "momenta/poly.hpp"

namespace momenta {

/// Truncated Laurent series in ep.  Coefficients are exact for orders
/// lo()..hi(); everything below lo() is exactly zero, everything above hi()
/// is unknown.  Arithmetic returns the provably correct window only.
class EpsSeries {
public:
    EpsSeries(int lo, std::vector<Rational> coeffs);

    static EpsSeries zero(int lo, int hi);
    static EpsSeries constant(const Rational& c, int hi);
    /// Exact polynomial in ep viewed as a series known through order hi.
    static EpsSeries from_poly(const Poly& p_in_eps, int hi);

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }

    /// Coefficient of ep^k: exact zero below the window, error above it.
    const Rational& coeff(int k) const;

    bool is_known_zero() const;
    /// Lowest order with a nonzero coefficient; hi()+1 when all stored
    /// coefficients vanish.
    int valuation() const;

    friend EpsSeries operator+(const EpsSeries& a, const EpsSeries& b);
    friend EpsSeries operator-(const EpsSeries& a, const EpsSeries& b);
    friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b);
    /// Division lowers the window by the valuation of b; error when b has no
    /// nonzero coefficient in its window.
    friend EpsSeries operator/(const EpsSeries& a, const EpsSeries& b);
    EpsSeries operator-() const;
    bool operator==(const EpsSeries& o) const { return lo_ == o.lo_ && c_ == o.c_; }

    /// Multiply by ep^u (u may be negative): pure index shift.
    EpsSeries shift(int u) const;

    /// Restrict to window [l, r] (within knowledge; zero-fill below lo).
    EpsSeries restricted(int l, int r) const;

    std::string str() const;

private:
    int lo_;
    std::vector<Rational> c_;
};

enum class EpsOp { add, mul, div, shift };

/// Dispatcher form of the series arithmetic; for shift, b is ignored and u
/// gives the power of ep.
EpsSeries eps_series_arith(const EpsSeries& a, const EpsSeries& b, EpsOp op, int u = 0);

} // namespace momenta
