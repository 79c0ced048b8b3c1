#include "momenta/bipoly.hpp"

#include <sstream>

namespace momenta {

BiPoly::BiPoly(Var outer, std::vector<Poly> coeffs) : outer_(outer), c_(std::move(coeffs)) {
    trim();
}

void BiPoly::trim() {
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

BiPoly BiPoly::constant(Var outer, Rational c) {
    BiPoly b(outer);
    if (c != 0)
        b.c_.push_back(Poly::constant(Var::ep, std::move(c)));
    return b;
}

BiPoly BiPoly::from_outer(const Poly& p) {
    BiPoly b(p.var());
    for (int k = 0; k <= p.degree(); ++k)
        b.c_.push_back(Poly::constant(Var::ep, p.coeff(k)));
    b.trim();
    return b;
}

BiPoly BiPoly::from_eps(Var outer, const Poly& p_in_eps) {
    BiPoly b(outer);
    if (!p_in_eps.is_zero())
        b.c_.push_back(p_in_eps);
    return b;
}

BiPoly BiPoly::monomial(Var outer, int a, int e, Rational c) {
    BiPoly b(outer);
    if (c == 0)
        return b;
    b.c_.assign(static_cast<std::size_t>(a) + 1, Poly(Var::ep));
    std::vector<Rational> ec(static_cast<std::size_t>(e) + 1, Rational(0));
    ec[static_cast<std::size_t>(e)] = std::move(c);
    b.c_[static_cast<std::size_t>(a)] = Poly(Var::ep, std::move(ec));
    return b;
}

bool BiPoly::is_one() const {
    return c_.size() == 1 && c_[0].is_one();
}

int BiPoly::degree_eps() const {
    int d = -1;
    for (const Poly& p : c_)
        d = std::max(d, p.degree());
    return d;
}

const Poly& BiPoly::outer_coeff(int a) const {
    static const Poly zero(Var::ep);
    if (a < 0 || a >= static_cast<int>(c_.size()))
        return zero;
    return c_[static_cast<std::size_t>(a)];
}

Poly BiPoly::eps_coeff(int e) const {
    std::vector<Rational> out;
    out.reserve(c_.size());
    for (const Poly& p : c_)
        out.push_back(p.coeff(e));
    return Poly(outer_, std::move(out));
}

Poly BiPoly::at_outer0() const {
    if (c_.empty())
        return Poly(Var::ep);
    return c_[0];
}

int BiPoly::eps_valuation() const {
    int v = -1;
    for (const Poly& p : c_) {
        if (p.is_zero())
            continue;
        int pv = p.valuation();
        v = (v < 0) ? pv : std::min(v, pv);
    }
    return v < 0 ? 0 : v;
}

int BiPoly::outer_valuation() const {
    for (std::size_t a = 0; a < c_.size(); ++a)
        if (!c_[a].is_zero())
            return static_cast<int>(a);
    return 0;
}

BiPoly BiPoly::operator-() const {
    BiPoly r(outer_);
    r.c_.reserve(c_.size());
    for (const Poly& p : c_)
        r.c_.push_back(-p);
    return r;
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
    if (c_.size() < o.c_.size())
        c_.resize(o.c_.size(), Poly(Var::ep));
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] += o.c_[i];
    trim();
    return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
    if (c_.size() < o.c_.size())
        c_.resize(o.c_.size(), Poly(Var::ep));
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] -= o.c_[i];
    trim();
    return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r(a.outer_);
    if (a.is_zero() || b.is_zero())
        return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Poly(Var::ep));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero())
            continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
}

BiPoly& BiPoly::operator*=(const Rational& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (Poly& p : c_)
        p *= s;
    return *this;
}

BiPoly BiPoly::divide_eps_power(int u) const {
    if (u == 0 || is_zero())
        return *this;
    BiPoly r(outer_);
    r.c_.reserve(c_.size());
    for (const Poly& p : c_) {
        if (p.is_zero()) {
            r.c_.push_back(p);
            continue;
        }
        if (p.valuation() < u)
            fail(ErrorClass::internal, "inexact eps-power division");
        std::vector<Rational> shifted;
        for (int k = u; k <= p.degree(); ++k)
            shifted.push_back(p.coeff(k));
        r.c_.push_back(Poly(Var::ep, std::move(shifted)));
    }
    r.trim();
    return r;
}

BiPoly BiPoly::divide_outer_power(int k) const {
    if (k == 0 || is_zero())
        return *this;
    if (outer_valuation() < k)
        fail(ErrorClass::internal, "inexact outer-power division");
    BiPoly r(outer_);
    r.c_.assign(c_.begin() + k, c_.end());
    return r;
}

BiPoly BiPoly::mul_outer_power(int k) const {
    if (k == 0 || is_zero())
        return *this;
    BiPoly r(outer_);
    r.c_.assign(static_cast<std::size_t>(k), Poly(Var::ep));
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
}

BiPoly BiPoly::divexact_outer(const Poly& p) const {
    if (p.is_zero())
        fail(ErrorClass::degenerate_input, "division by zero polynomial");
    if (is_zero())
        return *this;
    // long division in the outer variable; divisor coefficients are rational
    std::vector<Poly> rem(c_);
    int db = p.degree();
    int da = static_cast<int>(rem.size()) - 1;
    if (da < db)
        fail(ErrorClass::internal, "inexact division (degree)");
    std::vector<Poly> q(static_cast<std::size_t>(da - db) + 1, Poly(Var::ep));
    Rational lead_inv = Rational(1) / p.leading();
    for (int k = da - db; k >= 0; --k) {
        Poly f = rem[static_cast<std::size_t>(k + db)];
        if (f.is_zero())
            continue;
        f *= lead_inv;
        q[static_cast<std::size_t>(k)] = f;
        for (int j = 0; j <= db; ++j) {
            Poly sub = f;
            sub *= p.coeff(j);
            rem[static_cast<std::size_t>(k + j)] -= sub;
        }
    }
    for (const Poly& r : rem)
        if (!r.is_zero())
            fail(ErrorClass::internal, "inexact division (remainder)");
    return BiPoly(outer_, std::move(q));
}

BiPoly BiPoly::derivative_outer() const {
    BiPoly r(outer_);
    if (c_.size() <= 1)
        return r;
    r.c_.resize(c_.size() - 1, Poly(Var::ep));
    for (std::size_t i = 1; i < c_.size(); ++i) {
        Poly p = c_[i];
        p *= Rational(static_cast<long>(i));
        r.c_[i - 1] = std::move(p);
    }
    r.trim();
    return r;
}

BiPoly BiPoly::shifted_outer(const Rational& s) const {
    if (s == 0 || is_zero())
        return *this;
    BiPoly result(outer_);
    BiPoly vs(outer_, {Poly::constant(Var::ep, s), Poly::constant(Var::ep, 1)});
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        result = result * vs;
        result += BiPoly::from_eps(outer_, *it);
    }
    return result;
}

Rational BiPoly::content() const {
    Int num_gcd = 0, den_lcm = 1;
    for (const Poly& p : c_) {
        for (int k = 0; k <= p.degree(); ++k) {
            const Rational& c = p.coeff(k);
            if (c == 0)
                continue;
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        }
    }
    if (num_gcd == 0)
        return Rational(0);
    return make_rational(num_gcd, den_lcm);
}

void BiPoly::for_each_monomial(const std::function<void(int, int, const Rational&)>& f) const {
    for (std::size_t a = 0; a < c_.size(); ++a)
        for (int e = 0; e <= c_[a].degree(); ++e)
            if (c_[a].coeff(e) != 0)
                f(static_cast<int>(a), e, c_[a].coeff(e));
}

std::string BiPoly::str() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int a = degree_outer(); a >= 0; --a) {
        const Poly& p = outer_coeff(a);
        if (p.is_zero())
            continue;
        std::string piece;
        bool simple = p.degree() == p.valuation() && p.leading() > 0;
        std::string inner = p.str();
        if (a == 0) {
            piece = p.is_constant() ? inner : "(" + inner + ")";
        } else {
            if (p.is_one())
                piece = var_name(outer_);
            else if (p.is_constant() || simple)
                piece = inner + "*" + var_name(outer_);
            else
                piece = "(" + inner + ")*" + var_name(outer_);
            if (a > 1)
                piece += "^" + std::to_string(a);
        }
        if (first) {
            os << piece;
            first = false;
        } else if (piece.front() == '-') {
            os << " - " << piece.substr(1);
        } else {
            os << " + " << piece;
        }
    }
    return os.str();
}

} // namespace momenta
