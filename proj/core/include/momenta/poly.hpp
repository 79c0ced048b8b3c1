#pragma once

#include <span>
#include <string>
#include <vector>

#include "momenta/rational.hpp"

namespace momenta {

enum class Var { n, x, ep };

const char* var_name(Var v);

/// Dense univariate polynomial over the rationals, canonical
/// (no trailing zero coefficients; degree() == -1 for the zero polynomial).
class Poly {
public:
    explicit Poly(Var v = Var::x) : var_(v) {}
    Poly(Var v, std::vector<Rational> coeffs);

    static Poly constant(Var v, Rational c);
    static Poly variable(Var v);

    Var var() const { return var_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

    /// Coefficient of v^k (zero outside the stored range).
    const Rational& coeff(int k) const;
    Rational& leading();
    const Rational& leading() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rational& s);
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }

    bool operator==(const Poly& o) const { return var_ == o.var_ && c_ == o.c_; }

    Rational eval(const Rational& v) const;
    Rational eval_int(long v) const;

    /// p(v + shift)
    Poly shifted_arg(const Rational& shift) const;
    Poly derivative() const;
    Poly mul_power(int k) const;   // p * v^k
    int valuation() const;         // largest k with v^k | p; 0 for zero poly

    Poly pow(unsigned e) const;

    /// Rational content (gcd of numerators over lcm of denominators), positive.
    Rational content() const;
    Poly monic() const;

    std::string str() const;

private:
    void trim();

    Var var_;
    std::vector<Rational> c_;
};

/// Quotient, asserting exact division.
Poly poly_divexact(const Poly& a, const Poly& b);
/// (quotient, remainder) with deg r < deg b.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
/// Monic gcd.
Poly poly_gcd(Poly a, Poly b);

/// Monic gcd of a set of polynomials; 1 when the gcd is constant.
/// All-zero input is a degenerate ODE and raises an error.
Poly poly_content(std::span<const Poly> polys);

/// Ascending nonnegative integer roots.
std::vector<Int> nonneg_integer_roots(const Poly& p);

/// Smallest delta such that p(m) != 0 for every integer m >= delta,
/// i.e. 1 + the largest nonnegative integer root (0 when there is none).
int start_index_delta(const Poly& p);

/// Reduced univariate rational function (gcd-cancelled, monic denominator).
class PolyFrac {
public:
    explicit PolyFrac(Var v = Var::n) : num_(v), den_(Poly::constant(v, 1)) {}
    PolyFrac(Poly num, Poly den);

    static PolyFrac constant(Var v, Rational c);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    Var var() const { return num_.var(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    PolyFrac operator-() const;
    friend PolyFrac operator+(const PolyFrac& a, const PolyFrac& b);
    friend PolyFrac operator-(const PolyFrac& a, const PolyFrac& b);
    friend PolyFrac operator*(const PolyFrac& a, const PolyFrac& b);
    friend PolyFrac operator/(const PolyFrac& a, const PolyFrac& b);
    bool operator==(const PolyFrac& o) const { return num_ == o.num_ && den_ == o.den_; }

    /// Evaluation; error if the denominator vanishes.
    Rational eval_int(long v) const;
    bool has_pole_at(long v) const;

    PolyFrac shifted_arg(const Rational& shift) const;

    std::string str() const;

private:
    void reduce();

    Poly num_, den_;
};

} // namespace momenta
