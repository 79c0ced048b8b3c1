#include "momenta/eps_series.hpp"

#include <sstream>

namespace momenta {

EpsSeries::EpsSeries(int lo, std::vector<Rational> coeffs) : lo_(lo), c_(std::move(coeffs)) {
    if (c_.empty())
        fail(ErrorClass::internal, "empty eps-series window");
}

EpsSeries EpsSeries::zero(int lo, int hi) {
    if (hi < lo)
        fail(ErrorClass::internal, "empty eps-series window");
    return EpsSeries(lo, std::vector<Rational>(static_cast<std::size_t>(hi - lo) + 1, Rational(0)));
}

EpsSeries EpsSeries::constant(const Rational& c, int hi) {
    EpsSeries s = zero(0, hi);
    s.c_[0] = c;
    return s;
}

EpsSeries EpsSeries::from_poly(const Poly& p_in_eps, int hi) {
    if (p_in_eps.degree() > hi)
        fail(ErrorClass::internal, "polynomial exceeds requested series order");
    EpsSeries s = zero(0, hi);
    for (int k = 0; k <= p_in_eps.degree(); ++k)
        s.c_[static_cast<std::size_t>(k)] = p_in_eps.coeff(k);
    return s;
}

const Rational& EpsSeries::coeff(int k) const {
    static const Rational zero_rat(0);
    if (k < lo_)
        return zero_rat;
    if (k > hi())
        fail(ErrorClass::window_shortfall,
             "eps-order " + std::to_string(k) + " beyond series window [" +
                 std::to_string(lo_) + ", " + std::to_string(hi()) + "]");
    return c_[static_cast<std::size_t>(k - lo_)];
}

bool EpsSeries::is_known_zero() const {
    for (const auto& c : c_)
        if (c != 0)
            return false;
    return true;
}

int EpsSeries::valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0)
            return lo_ + static_cast<int>(i);
    return hi() + 1;
}

EpsSeries operator+(const EpsSeries& a, const EpsSeries& b) {
    int lo = std::min(a.lo_, b.lo_);
    int hi = std::min(a.hi(), b.hi());
    if (hi < lo)
        fail(ErrorClass::window_shortfall, "eps-series windows do not overlap in addition");
    EpsSeries r = EpsSeries::zero(lo, hi);
    for (int k = lo; k <= hi; ++k)
        r.c_[static_cast<std::size_t>(k - lo)] = a.coeff(k) + b.coeff(k);
    return r;
}

EpsSeries operator-(const EpsSeries& a, const EpsSeries& b) {
    return a + (-b);
}

EpsSeries EpsSeries::operator-() const {
    EpsSeries r = *this;
    for (auto& c : r.c_)
        c = -c;
    return r;
}

EpsSeries operator*(const EpsSeries& a, const EpsSeries& b) {
    int lo = a.lo_ + b.lo_;
    int hi = std::min(a.hi() + b.lo_, b.hi() + a.lo_);
    EpsSeries r = EpsSeries::zero(lo, hi);
    for (int i = a.lo_; i <= a.hi(); ++i) {
        const Rational& ai = a.coeff(i);
        if (ai == 0)
            continue;
        for (int j = b.lo_; j <= b.hi(); ++j) {
            int k = i + j;
            if (k > hi)
                break;
            if (b.coeff(j) == 0)
                continue;
            r.c_[static_cast<std::size_t>(k - lo)] += ai * b.coeff(j);
        }
    }
    return r;
}

EpsSeries operator/(const EpsSeries& a, const EpsSeries& b) {
    int v = b.valuation();
    if (v > b.hi())
        fail(ErrorClass::degenerate_input, "division by an eps-series that is zero on its window");
    // b = ep^v * u with u(0) != 0; invert u to its available relative order
    int prec = b.hi() - v;
    std::vector<Rational> u(static_cast<std::size_t>(prec) + 1);
    for (int k = 0; k <= prec; ++k)
        u[static_cast<std::size_t>(k)] = b.coeff(v + k);
    std::vector<Rational> w(u.size(), Rational(0));
    w[0] = Rational(1) / u[0];
    for (int k = 1; k <= prec; ++k) {
        Rational acc(0);
        for (int j = 1; j <= k; ++j)
            acc += u[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k - j)];
        w[static_cast<std::size_t>(k)] = -acc * w[0];
    }
    EpsSeries inv(-v, std::move(w));
    return a * inv;
}

EpsSeries EpsSeries::shift(int u) const {
    EpsSeries r = *this;
    r.lo_ += u;
    return r;
}

EpsSeries EpsSeries::restricted(int l, int r) const {
    if (r > hi())
        fail(ErrorClass::window_shortfall,
             "restriction to [" + std::to_string(l) + ", " + std::to_string(r) +
                 "] exceeds known window (hi = " + std::to_string(hi()) + ")");
    EpsSeries out = zero(l, r);
    for (int k = l; k <= r; ++k)
        out.c_[static_cast<std::size_t>(k - l)] = coeff(k);
    return out;
}

std::string EpsSeries::str() const {
    std::ostringstream os;
    os << "O(ep^" << (hi() + 1) << ") window [" << lo_ << "," << hi() << "]:";
    for (int k = lo_; k <= hi(); ++k)
        os << " " << rational_str(coeff(k)) << "*ep^" << k;
    return os.str();
}

EpsSeries eps_series_arith(const EpsSeries& a, const EpsSeries& b, EpsOp op, int u) {
    switch (op) {
        case EpsOp::add: return a + b;
        case EpsOp::mul: return a * b;
        case EpsOp::div: return a / b;
        case EpsOp::shift: return a.shift(u);
    }
    fail(ErrorClass::internal, "bad eps-series op");
}

} // namespace momenta
