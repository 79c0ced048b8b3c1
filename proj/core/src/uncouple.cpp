#include "momenta/uncouple.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace momenta {

std::string Source::str() const {
    return (kind == Kind::provider ? "g" : "f") + std::to_string(index);
}

std::string ScalarStage::str() const {
    std::ostringstream os;
    for (int i = order; i >= 0; --i) {
        if (alpha[static_cast<std::size_t>(i)].is_zero())
            continue;
        os << "(" << alpha[static_cast<std::size_t>(i)].str() << ")*D^" << i << "[f"
           << component << "]";
        if (i > 0)
            os << " + ";
    }
    os << " = ";
    if (rhs.empty())
        os << "0";
    for (std::size_t t = 0; t < rhs.size(); ++t) {
        if (t)
            os << " + ";
        os << "(" << rhs[t].coeff.str() << ")*D^" << rhs[t].dx << "[" << rhs[t].src.str() << "]";
    }
    return os.str();
}

namespace {

// operator polynomial in D with rational-function coefficients
using OpPoly = std::vector<RatFunc>;

void op_trim(OpPoly& p) {
    while (!p.empty() && p.back().is_zero())
        p.pop_back();
}

int op_order(const OpPoly& p) {
    return static_cast<int>(p.size()) - 1;
}

long binom(int n, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i)
        r = r * (n - i) / (i + 1);
    return r;
}

// (c * D^t) o p, by the Leibniz rule
OpPoly op_premul(const RatFunc& c, int t, const OpPoly& p) {
    OpPoly out;
    if (p.empty() || c.is_zero())
        return out;
    out.assign(p.size() + static_cast<std::size_t>(t), RatFunc(c.outer()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero())
            continue;
        RatFunc deriv = p[i];
        for (int s = 0; s <= t; ++s) {
            RatFunc term = c * deriv;
            term *= RatFunc::constant(c.outer(), Rational(binom(t, s)));
            out[i + static_cast<std::size_t>(t - s)] += term;
            if (s < t)
                deriv = deriv.derivative_outer();
        }
    }
    op_trim(out);
    return out;
}

LinOpCombination rhs_premul(const RatFunc& c, int t, const LinOpCombination& rhs) {
    LinOpCombination out;
    for (const LinOpTerm& term : rhs) {
        RatFunc deriv = term.coeff;
        for (int s = 0; s <= t; ++s) {
            RatFunc w = c * deriv;
            w *= RatFunc::constant(c.outer(), Rational(binom(t, s)));
            if (!w.is_zero())
                out.push_back({w, term.dx + t - s, term.src});
            if (s < t)
                deriv = deriv.derivative_outer();
        }
    }
    return out;
}

void rhs_merge(LinOpCombination& rhs) {
    // combine terms with equal (source, order)
    std::map<std::pair<Source, int>, RatFunc> acc;
    for (const LinOpTerm& t : rhs) {
        auto key = std::pair(t.src, t.dx);
        auto it = acc.find(key);
        if (it == acc.end())
            acc.emplace(key, t.coeff);
        else
            it->second += t.coeff;
    }
    rhs.clear();
    for (auto& [key, coeff] : acc)
        if (!coeff.is_zero())
            rhs.push_back({std::move(coeff), key.second, key.first});
}

struct Equation {
    std::vector<OpPoly> f;  // by component index - 1
    LinOpCombination rhs;

    bool contains(int comp) const {
        return !f[static_cast<std::size_t>(comp - 1)].empty();
    }
};

void eq_sub_premul(Equation& target, const RatFunc& c, int t, const Equation& src) {
    for (std::size_t j = 0; j < src.f.size(); ++j) {
        OpPoly scaled = op_premul(c, t, src.f[j]);
        if (scaled.empty())
            continue;
        OpPoly& dst = target.f[j];
        if (dst.size() < scaled.size())
            dst.resize(scaled.size(), RatFunc(c.outer()));
        for (std::size_t i = 0; i < scaled.size(); ++i)
            dst[i] -= scaled[i];
        op_trim(dst);
    }
    LinOpCombination scaled_rhs = rhs_premul(c, t, src.rhs);
    for (LinOpTerm& term : scaled_rhs) {
        term.coeff = -term.coeff;
        target.rhs.push_back(std::move(term));
    }
    rhs_merge(target.rhs);
}

} // namespace

std::optional<BiPoly> bipoly_try_divexact(const BiPoly& a, const BiPoly& b) {
    if (b.is_zero())
        return std::nullopt;
    if (a.is_zero())
        return a;
    // long division in Q(ep)[x]
    int da = a.degree_outer(), db = b.degree_outer();
    if (da < db)
        return std::nullopt;
    std::vector<PolyFrac> rem;
    for (int i = 0; i <= da; ++i)
        rem.emplace_back(a.outer_coeff(i), Poly::constant(Var::ep, 1));
    PolyFrac blead(b.outer_coeff(db), Poly::constant(Var::ep, 1));
    std::vector<PolyFrac> q(static_cast<std::size_t>(da - db) + 1, PolyFrac(Var::ep));
    for (int k = da - db; k >= 0; --k) {
        PolyFrac f = rem[static_cast<std::size_t>(k + db)] / blead;
        q[static_cast<std::size_t>(k)] = f;
        if (f.is_zero())
            continue;
        for (int j = 0; j <= db; ++j) {
            PolyFrac sub = f * PolyFrac(b.outer_coeff(j), Poly::constant(Var::ep, 1));
            rem[static_cast<std::size_t>(k + j)] = rem[static_cast<std::size_t>(k + j)] - sub;
        }
    }
    for (const PolyFrac& r : rem)
        if (!r.is_zero())
            return std::nullopt;
    std::vector<Poly> out;
    for (const PolyFrac& f : q) {
        if (!f.is_polynomial())
            return std::nullopt;
        Poly p = f.num();
        p *= Rational(1) / f.den().coeff(0);
        out.push_back(std::move(p));
    }
    return BiPoly(b.outer(), std::move(out));
}

namespace {

// smallest common multiple we can assemble cheaply: skip denominators that
// already divide the accumulator, multiply the rest in
BiPoly common_denominator(const OpPoly& coeffs) {
    BiPoly q = BiPoly::constant(Var::x, 1);
    for (const RatFunc& c : coeffs) {
        if (c.is_zero() || c.den().is_constant())
            continue;
        if (bipoly_try_divexact(q, c.den()))
            continue;
        q = q * c.den();
    }
    return q;
}

BiPoly rat_times_poly_exact(const RatFunc& c, const BiPoly& q) {
    auto quot = bipoly_try_divexact(q, c.den());
    if (!quot)
        fail(ErrorClass::internal, "denominator does not divide the common multiple");
    return c.num() * *quot;
}

ScalarStage extract_stage(int component, Equation eq) {
    ScalarStage stage;
    stage.component = component;
    OpPoly& own = eq.f[static_cast<std::size_t>(component - 1)];
    if (own.empty())
        fail(ErrorClass::degenerate_input,
             "component f" + std::to_string(component) + " is not constrained by the system");
    stage.order = op_order(own);

    BiPoly q = common_denominator(own);
    RatFunc qf = RatFunc::from_poly(q);
    stage.alpha.reserve(own.size());
    for (const RatFunc& c : own)
        stage.alpha.push_back(c.is_zero() ? BiPoly(Var::x) : rat_times_poly_exact(c, q));

    // other components move to the right-hand side, scaled by q
    for (std::size_t j = 0; j < eq.f.size(); ++j) {
        if (static_cast<int>(j) + 1 == component)
            continue;
        const OpPoly& other = eq.f[j];
        for (std::size_t i = 0; i < other.size(); ++i) {
            if (other[i].is_zero())
                continue;
            stage.rhs.push_back({-(other[i] * qf), static_cast<int>(i),
                                 {Source::Kind::component, static_cast<int>(j) + 1}});
        }
    }
    for (LinOpTerm& term : eq.rhs) {
        term.coeff *= qf;
        if (!term.coeff.is_zero())
            stage.rhs.push_back(std::move(term));
    }
    rhs_merge(stage.rhs);

    // joint rational content out, leading monomial positive
    Rational content(0);
    for (const BiPoly& a : stage.alpha) {
        Rational c = a.content();
        if (c == 0)
            continue;
        if (content == 0)
            content = c;
        else {
            Int num_gcd, den_gcd;
            mpz_gcd(num_gcd.get_mpz_t(), content.get_num().get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(den_gcd.get_mpz_t(), content.get_den().get_mpz_t(), c.get_den().get_mpz_t());
            content = make_rational(num_gcd, den_gcd);
        }
    }
    const BiPoly& lead = stage.alpha[static_cast<std::size_t>(stage.order)];
    if (!lead.is_zero() && lead.outer_coeff(lead.degree_outer()).leading() < 0)
        content = -content;
    if (content != 0 && content != 1) {
        Rational inv = Rational(1) / content;
        for (BiPoly& a : stage.alpha)
            a *= inv;
        RatFunc rinv = RatFunc::constant(Var::x, inv);
        for (LinOpTerm& t : stage.rhs)
            t.coeff *= rinv;
    }
    return stage;
}

} // namespace

UncoupledSystem gauss_uncouple(const CoupledSystem& sys) {
    const int lambda = sys.lambda;
    std::vector<Equation> eqs;
    eqs.reserve(static_cast<std::size_t>(lambda));
    for (int i = 1; i <= lambda; ++i) {
        Equation eq;
        eq.f.assign(static_cast<std::size_t>(lambda), OpPoly{});
        const RatFunc& h = sys.lhs[static_cast<std::size_t>(i - 1)];
        OpPoly& own = eq.f[static_cast<std::size_t>(i - 1)];
        own.assign(2, RatFunc(Var::x));
        own[1] = h;
        for (int j = 1; j <= lambda; ++j) {
            const RatFunc& a = sys.entry(i, j);
            if (a.is_zero())
                continue;
            OpPoly& part = eq.f[static_cast<std::size_t>(j - 1)];
            if (part.empty())
                part.assign(1, RatFunc(Var::x));
            part[0] -= a;
            op_trim(part);
        }
        op_trim(own);
        eq.rhs.push_back({RatFunc::constant(Var::x, 1), 0, {Source::Kind::provider, i}});
        eqs.push_back(std::move(eq));
    }

    std::vector<ScalarStage> stages(static_cast<std::size_t>(lambda));
    for (int k = lambda; k >= 1; --k) {
        // indices of equations still containing f_k
        auto containing = [&]() {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < eqs.size(); ++i)
                if (eqs[i].contains(k))
                    idx.push_back(i);
            return idx;
        };
        while (true) {
            std::vector<std::size_t> idx = containing();
            if (idx.size() <= 1)
                break;
            // pivot rule: minimal operator order, then minimal total degree of
            // the leading coefficient, then lowest row
            auto measure = [&](std::size_t i) {
                const OpPoly& p = eqs[i].f[static_cast<std::size_t>(k - 1)];
                return std::tuple(op_order(p), p.back().total_degree(), i);
            };
            std::size_t pivot = idx[0];
            for (std::size_t i : idx)
                if (measure(i) < measure(pivot))
                    pivot = i;
            const OpPoly& pv = eqs[pivot].f[static_cast<std::size_t>(k - 1)];
            int pord = op_order(pv);
            for (std::size_t i : idx) {
                if (i == pivot)
                    continue;
                Equation& eq = eqs[i];
                OpPoly& part = eq.f[static_cast<std::size_t>(k - 1)];
                while (!part.empty() && op_order(part) >= pord) {
                    int t = op_order(part) - pord;
                    RatFunc c = part.back() / pv.back();
                    eq_sub_premul(eq, c, t, eqs[pivot]);
                }
            }
        }
        std::vector<std::size_t> idx = containing();
        if (idx.empty())
            fail(ErrorClass::degenerate_input,
                 "component f" + std::to_string(k) + " is not constrained by the system");
        stages[static_cast<std::size_t>(k - 1)] = extract_stage(k, std::move(eqs[idx[0]]));
        eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(idx[0]));
    }

    UncoupledSystem out;
    out.stages = std::move(stages);
    // stage k may only reference components below k
    for (const ScalarStage& st : out.stages)
        for (const LinOpTerm& t : st.rhs)
            if (t.src.kind == Source::Kind::component && t.src.index >= st.component)
                fail(ErrorClass::internal, "stage dependency ordering violated");
    return out;
}

// ---- stream application ----

namespace {

struct DenFactor {
    int x_power = 0;
    int eps_power = 0;
    BiPoly unit;  // unit(0,0) != 0
};

DenFactor factor_denominator(const BiPoly& den) {
    DenFactor f;
    BiPoly d = den;
    f.x_power = d.outer_valuation();
    if (f.x_power > 0)
        d = d.divide_outer_power(f.x_power);
    f.eps_power = d.eps_valuation();
    if (f.eps_power > 0)
        d = d.divide_eps_power(f.eps_power);
    if (d.outer_coeff(0).coeff(0) == 0)
        fail(ErrorClass::degenerate_input,
             "operator denominator " + den.str() +
                 " has no power-series inverse at x = 0 (mixed x/ep leading part)");
    f.unit = std::move(d);
    return f;
}

} // namespace

TermCost linop_term_cost(const LinOpTerm& term) {
    TermCost cost;
    DenFactor den = factor_denominator(term.coeff.den());
    cost.eps_shift = term.coeff.num().eps_valuation() - den.eps_power;
    cost.len_delta = -term.dx - den.x_power + term.coeff.num().outer_valuation();
    return cost;
}

LayeredStream apply_linop_term(const LinOpTerm& term, const LayeredStream& src) {
    if (term.coeff.is_zero())
        fail(ErrorClass::internal, "zero operator term");
    DenFactor den = factor_denominator(term.coeff.den());
    const BiPoly& num = term.coeff.num();

    // D^u
    LayeredStream cur = src;
    for (int s = 0; s < term.dx; ++s) {
        for (auto& layer : cur.layers) {
            if (layer.empty())
                fail(ErrorClass::capacity_shortfall, "stream too short for derivative");
            for (std::size_t n = 0; n + 1 < layer.size(); ++n)
                layer[n] = layer[n + 1] * Rational(static_cast<long>(n + 1));
            layer.pop_back();
        }
    }

    // multiply by the numerator polynomial
    int w = num.eps_valuation();
    int amin = num.outer_valuation();
    long out_len = cur.len() + amin;
    if (out_len <= 0)
        fail(ErrorClass::capacity_shortfall, "stream too short for operator numerator");
    LayeredStream prod = LayeredStream::zeros({cur.lo + w, cur.hi() + w}, out_len);
    num.for_each_monomial([&](int a, int e, const Rational& c) {
        for (int kk = cur.lo; kk <= cur.hi(); ++kk) {
            if (kk + e > prod.hi())
                continue;  // would land above the reliable window
            const auto& in = cur.layer(kk);
            auto& out = prod.layers[static_cast<std::size_t>(kk + e - prod.lo)];
            for (long n = a; n < out_len; ++n) {
                long m = n - a;
                if (m >= static_cast<long>(in.size()))
                    break;
                out[static_cast<std::size_t>(n)] += c * in[static_cast<std::size_t>(m)];
            }
        }
    });

    // divide by the unit part of the denominator
    if (!den.unit.is_one()) {
        Rational q00 = den.unit.outer_coeff(0).coeff(0);
        Rational q00_inv = Rational(1) / q00;
        LayeredStream quot = LayeredStream::zeros(prod.window(), out_len);
        for (int kk = prod.lo; kk <= prod.hi(); ++kk) {
            auto& out = quot.layers[static_cast<std::size_t>(kk - prod.lo)];
            const auto& in = prod.layers[static_cast<std::size_t>(kk - prod.lo)];
            for (long n = 0; n < out_len; ++n) {
                Rational acc = in[static_cast<std::size_t>(n)];
                den.unit.for_each_monomial([&](int a, int e, const Rational& c) {
                    if (a == 0 && e == 0)
                        return;
                    long m = n - a;
                    int kl = kk - e;
                    if (m < 0 || kl < quot.lo)
                        return;
                    acc -= c * quot.layers[static_cast<std::size_t>(kl - quot.lo)]
                                          [static_cast<std::size_t>(m)];
                });
                out[static_cast<std::size_t>(n)] = acc * q00_inv;
            }
        }
        prod = std::move(quot);
    }

    // x^-k index shift and ep^-v window shift
    if (den.x_power > 0) {
        long new_len = prod.len() - den.x_power;
        if (new_len <= 0)
            fail(ErrorClass::capacity_shortfall, "stream too short for x-power shift");
        for (auto& layer : prod.layers)
            layer.erase(layer.begin(), layer.begin() + den.x_power);
    }
    prod.lo -= den.eps_power;
    return prod;
}

LayeredStream apply_linop(const LinOpCombination& op, const SourceLookup& sources,
                          EpsWindow want_window, long want_len) {
    if (op.empty())
        return LayeredStream::zeros(want_window, want_len);
    int lo = want_window.lo, hi = want_window.hi;
    long len = want_len;
    std::vector<LayeredStream> parts;
    parts.reserve(op.size());
    for (const LinOpTerm& term : op) {
        LayeredStream part = apply_linop_term(term, sources(term.src));
        lo = std::min(lo, part.lo);
        if (part.hi() < hi)
            fail(ErrorClass::window_shortfall,
                 "operator term on " + term.src.str() + " reaches ep-order " +
                     std::to_string(part.hi()) + ", need " + std::to_string(hi) +
                     " (source window short by " + std::to_string(hi - part.hi()) + ")");
        if (part.len() < len)
            fail(ErrorClass::capacity_shortfall,
                 "operator term on " + term.src.str() + " yields " + std::to_string(part.len()) +
                     " moments, need " + std::to_string(len) + " (" +
                     std::to_string(len - part.len()) + " more source moments required)");
        parts.push_back(std::move(part));
    }
    LayeredStream out = LayeredStream::zeros({lo, hi}, len);
    for (const LayeredStream& part : parts) {
        for (int k = lo; k <= hi; ++k) {
            if (k < part.lo)
                continue;
            const auto& in = part.layer(k);
            auto& dst = out.layers[static_cast<std::size_t>(k - lo)];
            for (long n = 0; n < len; ++n)
                dst[static_cast<std::size_t>(n)] += in[static_cast<std::size_t>(n)];
        }
    }
    return out;
}

} // namespace momenta
