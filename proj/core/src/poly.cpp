#include "momenta/poly.hpp"

#include <algorithm>
#include <sstream>

namespace momenta {

const char* var_name(Var v) {
    switch (v) {
        case Var::n: return "n";
        case Var::x: return "x";
        case Var::ep: return "ep";
    }
    return "?";
}

Poly::Poly(Var v, std::vector<Rational> coeffs) : var_(v), c_(std::move(coeffs)) {
    trim();
}

Poly Poly::constant(Var v, Rational c) {
    Poly p(v);
    if (c != 0)
        p.c_.push_back(std::move(c));
    return p;
}

Poly Poly::variable(Var v) {
    return Poly(v, {Rational(0), Rational(1)});
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

const Rational& Poly::coeff(int k) const {
    static const Rational zero(0);
    if (k < 0 || k >= static_cast<int>(c_.size()))
        return zero;
    return c_[static_cast<std::size_t>(k)];
}

Rational& Poly::leading() {
    return c_.back();
}

const Rational& Poly::leading() const {
    return c_.back();
}

Poly Poly::operator-() const {
    Poly r(var_);
    r.c_.reserve(c_.size());
    for (const auto& c : c_)
        r.c_.push_back(-c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (var_ != o.var_ && !is_zero() && !o.is_zero() && !is_constant() && !o.is_constant())
        fail(ErrorClass::internal, "variable mismatch in polynomial addition");
    if (c_.size() < o.c_.size())
        c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (c_.size() < o.c_.size())
        c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.var_);
    if (a.is_zero() || b.is_zero())
        return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
}

Poly& Poly::operator*=(const Rational& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& c : c_)
        c *= s;
    return *this;
}

Rational Poly::eval(const Rational& v) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * v + *it;
    return acc;
}

Rational Poly::eval_int(long v) const {
    // Horner over integers for numerator and denominator separately is not
    // worth it here; mpq Horner is exact and fast enough.
    Rational acc(0);
    Rational rv(v);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * rv + *it;
    return acc;
}

Poly Poly::shifted_arg(const Rational& shift) const {
    // p(v + s) via repeated synthetic division by (v - (-s)) is equivalent to
    // Taylor shift; use the simple binomial accumulation.
    if (shift == 0 || is_zero())
        return *this;
    Poly result(var_);
    // Horner: p(v+s) = c_k * (v+s)^k + ...  evaluated as nested (v+s) products
    Poly vs(var_, {shift, Rational(1)});
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        result = result * vs;
        result += Poly::constant(var_, *it);
    }
    return result;
}

Poly Poly::derivative() const {
    Poly r(var_);
    if (c_.size() <= 1)
        return r;
    r.c_.resize(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        r.c_[i - 1] = c_[i] * Rational(static_cast<long>(i));
    r.trim();
    return r;
}

Poly Poly::mul_power(int k) const {
    if (is_zero() || k == 0)
        return *this;
    Poly r(var_);
    r.c_.assign(static_cast<std::size_t>(k), Rational(0));
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
}

int Poly::valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0)
            return static_cast<int>(i);
    return 0;
}

Poly Poly::pow(unsigned e) const {
    Poly acc = Poly::constant(var_, 1);
    Poly base = *this;
    while (e) {
        if (e & 1)
            acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

Rational Poly::content() const {
    if (is_zero())
        return Rational(0);
    Int num_gcd = 0, den_lcm = 1;
    for (const auto& c : c_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    return make_rational(num_gcd, den_lcm);
}

Poly Poly::monic() const {
    if (is_zero())
        return *this;
    Poly r = *this;
    Rational inv = Rational(1) / leading();
    r *= inv;
    return r;
}

std::string Poly::str() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const Rational& c = coeff(k);
        if (c == 0)
            continue;
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0)
                a = -a;
        }
        bool unit = (a == 1);
        if (k == 0) {
            os << rational_str(a);
        } else {
            if (!unit)
                os << rational_str(a) << "*";
            os << var_name(var_);
            if (k > 1)
                os << "^" << k;
        }
    }
    return os.str();
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
    if (b.is_zero())
        fail(ErrorClass::degenerate_input, "polynomial division by zero");
    Poly q(a.var());
    Poly r = a;
    std::vector<Rational> qc(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0, Rational(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        Rational f = r.leading() / b.leading();
        int shift = r.degree() - b.degree();
        qc[static_cast<std::size_t>(shift)] = f;
        Poly sub = b.mul_power(shift);
        sub *= f;
        r -= sub;
    }
    return {Poly(a.var(), std::move(qc)), r};
}

Poly poly_divexact(const Poly& a, const Poly& b) {
    auto [q, r] = poly_divmod(a, b);
    if (!r.is_zero())
        fail(ErrorClass::internal, "inexact polynomial division");
    return q;
}

Poly poly_gcd(Poly a, Poly b) {
    if (a.is_zero())
        return b.monic();
    if (b.is_zero())
        return a.monic();
    while (!b.is_zero()) {
        auto [q, r] = poly_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly poly_content(std::span<const Poly> polys) {
    Poly g(polys.empty() ? Var::x : polys.front().var());
    bool any = false;
    for (const Poly& p : polys) {
        if (p.is_zero())
            continue;
        any = true;
        g = poly_gcd(g, p);
        if (g.is_constant())
            break;
    }
    if (!any)
        fail(ErrorClass::degenerate_input, "all coefficients vanish (degenerate ODE)");
    if (g.is_constant())
        return Poly::constant(g.var(), 1);
    return g.monic();
}

std::vector<Int> nonneg_integer_roots(const Poly& p) {
    if (p.is_zero())
        fail(ErrorClass::degenerate_input, "integer roots of the zero polynomial");
    std::vector<Int> roots;
    int val = p.valuation();
    Poly q = p;
    if (val > 0) {
        roots.push_back(0);
        std::vector<Rational> shifted;
        for (int k = val; k <= p.degree(); ++k)
            shifted.push_back(p.coeff(k));
        q = Poly(p.var(), std::move(shifted));
    }
    if (q.degree() < 1) {
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    // scale to integer coefficients; integer roots divide the trailing one
    Int den_lcm = 1;
    for (int k = 0; k <= q.degree(); ++k)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.coeff(k).get_den().get_mpz_t());
    std::vector<Int> ic(static_cast<std::size_t>(q.degree()) + 1);
    for (int k = 0; k <= q.degree(); ++k) {
        Rational c = q.coeff(k) * Rational(den_lcm);
        ic[static_cast<std::size_t>(k)] = c.get_num();
    }
    Int trailing = ic[0];
    Int at_one = 0;  // q(1), used to prune candidates: (r-1) | q(1)
    for (const Int& c : ic)
        at_one += c;
    auto eval_at = [&](const Int& v) {
        Int acc = 0;
        for (auto it = ic.rbegin(); it != ic.rend(); ++it)
            acc = acc * v + *it;
        return acc;
    };
    for (const Int& d : divisors(trailing)) {
        if (at_one != 0 && d != 1 && !mpz_divisible_p(at_one.get_mpz_t(), Int(d - 1).get_mpz_t()))
            continue;
        if (eval_at(d) == 0)
            roots.push_back(d);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

int start_index_delta(const Poly& p) {
    if (p.is_zero())
        fail(ErrorClass::degenerate_input, "start index of the zero polynomial");
    auto roots = nonneg_integer_roots(p);
    if (roots.empty())
        return 0;
    Int largest = roots.back();
    if (!largest.fits_slong_p())
        fail(ErrorClass::internal, "integer root out of range");
    return static_cast<int>(largest.get_si()) + 1;
}

PolyFrac::PolyFrac(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        fail(ErrorClass::degenerate_input, "rational function with zero denominator");
    reduce();
}

PolyFrac PolyFrac::constant(Var v, Rational c) {
    return PolyFrac(Poly::constant(v, std::move(c)), Poly::constant(v, 1));
}

void PolyFrac::reduce() {
    if (num_.is_zero()) {
        den_ = Poly::constant(den_.var(), 1);
        return;
    }
    Poly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
        num_ = poly_divexact(num_, g);
        den_ = poly_divexact(den_, g);
    }
    Rational lead = den_.leading();
    if (lead != 1) {
        Rational inv = Rational(1) / lead;
        num_ *= inv;
        den_ *= inv;
    }
}

PolyFrac PolyFrac::operator-() const {
    PolyFrac r = *this;
    r.num_ = -r.num_;
    return r;
}

PolyFrac operator+(const PolyFrac& a, const PolyFrac& b) {
    if (a.den_ == b.den_)
        return PolyFrac(a.num_ + b.num_, a.den_);
    return PolyFrac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

PolyFrac operator-(const PolyFrac& a, const PolyFrac& b) {
    return a + (-b);
}

PolyFrac operator*(const PolyFrac& a, const PolyFrac& b) {
    return PolyFrac(a.num_ * b.num_, a.den_ * b.den_);
}

PolyFrac operator/(const PolyFrac& a, const PolyFrac& b) {
    if (b.is_zero())
        fail(ErrorClass::degenerate_input, "division by zero rational function");
    return PolyFrac(a.num_ * b.den_, a.den_ * b.num_);
}

Rational PolyFrac::eval_int(long v) const {
    Rational d = den_.eval_int(v);
    if (d == 0)
        fail(ErrorClass::degenerate_input,
             "rational function pole at " + std::string(var_name(var())) + " = " + std::to_string(v));
    return num_.eval_int(v) / d;
}

bool PolyFrac::has_pole_at(long v) const {
    return den_.eval_int(v) == 0;
}

PolyFrac PolyFrac::shifted_arg(const Rational& shift) const {
    return PolyFrac(num_.shifted_arg(shift), den_.shifted_arg(shift));
}

std::string PolyFrac::str() const {
    if (is_polynomial()) {
        if (den_.is_one())
            return num_.str();
        Poly scaled = num_;
        scaled *= Rational(1) / den_.coeff(0);
        return scaled.str();
    }
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

} // namespace momenta
