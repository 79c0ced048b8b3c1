#include "momenta/ratfunc.hpp"

namespace momenta {

RatFunc::RatFunc(BiPoly num, BiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        fail(ErrorClass::degenerate_input, "rational function with zero denominator");
    reduce();
}

RatFunc RatFunc::constant(Var outer, Rational c) {
    return RatFunc(BiPoly::constant(outer, std::move(c)), BiPoly::constant(outer, 1));
}

RatFunc RatFunc::from_poly(BiPoly p) {
    Var v = p.outer();
    return RatFunc(std::move(p), BiPoly::constant(v, 1));
}

BiPoly RatFunc::as_poly() const {
    if (!is_polynomial())
        fail(ErrorClass::internal, "rational function is not polynomial");
    if (den_.is_one())
        return num_;
    Rational d = den_.at_outer0().coeff(0);
    BiPoly p = num_;
    p *= Rational(1) / d;
    return p;
}

void RatFunc::reduce() {
    if (num_.is_zero()) {
        den_ = BiPoly::constant(den_.outer(), 1);
        return;
    }
    if (num_ == den_) {
        num_ = BiPoly::constant(num_.outer(), 1);
        den_ = BiPoly::constant(num_.outer(), 1);
        return;
    }
    // common monomial factors
    int kx = std::min(num_.outer_valuation(), den_.outer_valuation());
    if (kx > 0) {
        num_ = num_.divide_outer_power(kx);
        den_ = den_.divide_outer_power(kx);
    }
    int ke = std::min(num_.eps_valuation(), den_.eps_valuation());
    if (ke > 0) {
        num_ = num_.divide_eps_power(ke);
        den_ = den_.divide_eps_power(ke);
    }
    // same-variable univariate gcd where cheap
    if (num_.degree_eps() <= 0 && den_.degree_eps() <= 0) {
        Poly pn = num_.at_eps0(), pd = den_.at_eps0();
        Poly g = poly_gcd(pn, pd);
        if (!g.is_constant()) {
            num_ = BiPoly::from_outer(poly_divexact(pn, g));
            den_ = BiPoly::from_outer(poly_divexact(pd, g));
        }
    } else if (num_.degree_outer() <= 0 && den_.degree_outer() <= 0) {
        Poly pn = num_.at_outer0(), pd = den_.at_outer0();
        Poly g = poly_gcd(pn, pd);
        if (!g.is_constant()) {
            num_ = BiPoly::from_eps(num_.outer(), poly_divexact(pn, g));
            den_ = BiPoly::from_eps(num_.outer(), poly_divexact(pd, g));
        }
    }
    // normalize: denominator integer-primitive with positive leading coefficient
    Rational cd = den_.content();
    const Poly& lead = den_.outer_coeff(den_.degree_outer());
    if (lead.leading() < 0)
        cd = -cd;
    if (cd != 1) {
        Rational inv = Rational(1) / cd;
        num_ *= inv;
        den_ *= inv;
    }
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_)
        return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_)
        return RatFunc(a.num_ - b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero())
        fail(ErrorClass::degenerate_input, "division by zero rational function");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

bool RatFunc::equals(const RatFunc& o) const {
    return num_ * o.den_ == o.num_ * den_;
}

RatFunc RatFunc::derivative_outer() const {
    if (is_polynomial()) {
        RatFunc r = *this;
        r.num_ = num_.derivative_outer();
        r.reduce();
        return r;
    }
    return RatFunc(num_.derivative_outer() * den_ - num_ * den_.derivative_outer(), den_ * den_);
}

int RatFunc::total_degree() const {
    auto deg = [](const BiPoly& p) {
        return std::max(p.degree_outer(), 0) + std::max(p.degree_eps(), 0);
    };
    return deg(num_) + deg(den_);
}

std::string RatFunc::str() const {
    if (is_polynomial())
        return as_poly().str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

} // namespace momenta
