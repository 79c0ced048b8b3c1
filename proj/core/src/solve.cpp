#include "momenta/solve.hpp"

#include <algorithm>

#include "momenta/propagate.hpp"

namespace momenta {

RationalSeq RationalSeq::zero() {
    return RationalSeq{};
}

RationalSeq RationalSeq::from_expr(PolyFrac f) {
    RationalSeq s;
    s.expr = std::move(f);
    auto roots = s.expr.den().is_constant() ? std::vector<Int>{}
                                            : nonneg_integer_roots(s.expr.den());
    if (!roots.empty())
        fail(ErrorClass::internal, "rational sequence with poles needs an explicit prefix");
    return s;
}

Rational RationalSeq::at(long n) const {
    if (n < valid_from)
        return prefix[static_cast<std::size_t>(n)];
    return expr.eval_int(n);
}

std::vector<Rational> RationalSeq::stream(long mu) const {
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(mu) + 1);
    for (long n = 0; n <= mu; ++n)
        out.push_back(at(n));
    return out;
}

std::string RationalSeq::str() const {
    std::string s = expr.str();
    if (valid_from > 0) {
        s += "  [n >= " + std::to_string(valid_from) + "; earlier:";
        for (long n = 0; n < valid_from; ++n)
            s += " " + rational_str(prefix[static_cast<std::size_t>(n)]);
        s += "]";
    }
    return s;
}

Rational resultant(const Poly& f, const Poly& g) {
    if (f.is_zero() || g.is_zero())
        return Rational(0);
    if (f.degree() == 0) {
        Rational r(1);
        for (int i = 0; i < g.degree(); ++i)
            r *= f.coeff(0);
        return r;
    }
    if (g.degree() == 0) {
        Rational r(1);
        for (int i = 0; i < f.degree(); ++i)
            r *= g.coeff(0);
        return r;
    }
    // res(f, g) = (-1)^(df*dg) lc(g)^(df - dr) res(g, r) with r = f mod g
    auto [q, r] = poly_divmod(f, g);
    int df = f.degree(), dg = g.degree();
    if (r.is_zero())
        return Rational(0);
    Rational sign((df * dg) % 2 == 0 ? 1 : -1);
    Rational lead(1);
    for (int i = 0; i < df - r.degree(); ++i)
        lead *= g.leading();
    return sign * lead * resultant(g, r);
}

Poly shift_resultant(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero())
        return Poly(Var::n);
    int bound = a.degree() * b.degree();
    // evaluate at h = 0..bound and interpolate
    std::vector<Rational> xs, ys;
    for (int h = 0; h <= bound; ++h) {
        Poly bs = b.shifted_arg(Rational(h));
        xs.emplace_back(h);
        ys.push_back(resultant(a, bs));
    }
    // Lagrange interpolation
    Poly result(Var::n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Poly basis = Poly::constant(Var::n, 1);
        Rational denom(1);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (i == j)
                continue;
            basis *= Poly(Var::n, {-xs[j], Rational(1)});
            denom *= xs[i] - xs[j];
        }
        basis *= ys[i] / denom;
        result += basis;
    }
    return result;
}

namespace {

// Abramov's universal denominator for sum a_i(n) y(n+i) = rhs with a_0,a_d != 0
Poly universal_denominator(const std::vector<Poly>& a) {
    const int d = static_cast<int>(a.size()) - 1;
    Poly A = a.back().shifted_arg(Rational(-d));  // a_d(n - d)
    Poly B = a.front();                           // a_0(n)
    Poly U = Poly::constant(Var::n, 1);
    if (A.is_constant() || B.is_constant())
        return U;
    Poly res = shift_resultant(A, B);
    if (res.is_zero())
        fail(ErrorClass::internal, "degenerate dispersion resultant");
    std::vector<Int> hs = nonneg_integer_roots(res);
    std::sort(hs.rbegin(), hs.rend());
    for (const Int& hint : hs) {
        long h = hint.get_si();
        Poly g = poly_gcd(A, B.shifted_arg(Rational(h)));
        if (g.is_constant())
            continue;
        A = poly_divexact(A, g);
        B = poly_divexact(B, g.shifted_arg(Rational(-h)));
        for (long j = 0; j <= h; ++j)
            U *= g.shifted_arg(Rational(-j));
        if (A.is_constant() || B.is_constant())
            break;
    }
    return U;
}

long binom_l(int n, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i)
        r = r * (n - i) / (i + 1);
    return r;
}

// polynomial solutions z of sum c_i(n) z(n+i) = w(n); returns the affine
// space as (particular, homogeneous basis) over the monomial ansatz
struct PolySolveResult {
    bool ok = false;
    Poly particular{Var::n};
    std::vector<Poly> homogeneous;
};

/// exact row-reduction solve of M z = v with free variables set to zero
struct LinearSystem {
    std::size_t cols = 0;
    std::vector<std::vector<Rational>> rows;  // each row: cols entries + rhs

    void add_row(std::vector<Rational> row) { rows.push_back(std::move(row)); }

    // returns (particular, nullspace basis); nullopt if inconsistent
    std::optional<std::pair<std::vector<Rational>, std::vector<std::vector<Rational>>>> solve() {
        std::size_t r = 0;
        std::vector<std::size_t> pivot_col;
        for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
            std::size_t sel = r;
            while (sel < rows.size() && rows[sel][c] == 0)
                ++sel;
            if (sel == rows.size())
                continue;
            std::swap(rows[sel], rows[r]);
            Rational inv = Rational(1) / rows[r][c];
            for (std::size_t cc = c; cc <= cols; ++cc)
                rows[r][cc] *= inv;
            for (std::size_t rr = 0; rr < rows.size(); ++rr) {
                if (rr == r || rows[rr][c] == 0)
                    continue;
                Rational f = rows[rr][c];
                for (std::size_t cc = c; cc <= cols; ++cc)
                    rows[rr][cc] -= f * rows[r][cc];
            }
            pivot_col.push_back(c);
            ++r;
        }
        for (std::size_t rr = r; rr < rows.size(); ++rr)
            if (rows[rr][cols] != 0)
                return std::nullopt;
        std::vector<Rational> part(cols, Rational(0));
        std::vector<bool> is_pivot(cols, false);
        for (std::size_t i = 0; i < pivot_col.size(); ++i) {
            part[pivot_col[i]] = rows[i][cols];
            is_pivot[pivot_col[i]] = true;
        }
        std::vector<std::vector<Rational>> basis;
        for (std::size_t c = 0; c < cols; ++c) {
            if (is_pivot[c])
                continue;
            std::vector<Rational> v(cols, Rational(0));
            v[c] = Rational(1);
            for (std::size_t i = 0; i < pivot_col.size(); ++i)
                v[pivot_col[i]] = -rows[i][c];
            basis.push_back(std::move(v));
        }
        return std::pair(std::move(part), std::move(basis));
    }
};

int poly_solution_degree_bound(const std::vector<Poly>& c, const Poly& w) {
    const int d = static_cast<int>(c.size()) - 1;
    // operator in the forward-difference basis: q_k = sum_{i>=k} C(i,k) c_i
    std::vector<Poly> q(c.size(), Poly(Var::n));
    for (int k = 0; k <= d; ++k)
        for (int i = k; i <= d; ++i) {
            Poly t = c[static_cast<std::size_t>(i)];
            t *= Rational(binom_l(i, k));
            q[static_cast<std::size_t>(k)] += t;
        }
    int b = INT_MIN;
    for (int k = 0; k <= d; ++k)
        if (!q[static_cast<std::size_t>(k)].is_zero())
            b = std::max(b, q[static_cast<std::size_t>(k)].degree() - k);
    if (b == INT_MIN)
        fail(ErrorClass::degenerate_input, "zero operator in polynomial solver");
    // phi(D) = sum over k attaining b of lc(q_k) * D (D-1) ... (D-k+1)
    Poly phi(Var::n);
    for (int k = 0; k <= d; ++k) {
        const Poly& qk = q[static_cast<std::size_t>(k)];
        if (qk.is_zero() || qk.degree() - k != b)
            continue;
        Poly ff = Poly::constant(Var::n, qk.leading());
        for (int t = 0; t < k; ++t)
            ff *= Poly(Var::n, {Rational(-t), Rational(1)});
        phi += ff;
    }
    int bound = -1;
    if (!w.is_zero())
        bound = std::max(bound, w.degree() - b);
    if (phi.is_zero()) {
        // cannot happen: contributions have distinct degrees in D
        fail(ErrorClass::internal, "degenerate degree-bound symbol");
    }
    if (!phi.is_constant())
        for (const Int& root : nonneg_integer_roots(phi))
            bound = std::max(bound, static_cast<int>(root.get_si()));
    return bound;
}

} // namespace

std::optional<RationalSeq> solve_rational(const Recurrence& rec, const RationalSeq& rhs,
                                          std::span<const Rational> init) {
    // strip trailing zero coefficients by shifting the relation index
    std::vector<Poly> a = rec.a;
    int low = 0;
    while (low < static_cast<int>(a.size()) && a[static_cast<std::size_t>(low)].is_zero())
        ++low;
    if (low == static_cast<int>(a.size()))
        fail(ErrorClass::degenerate_input, "zero recurrence");
    std::vector<Poly> c;
    for (int i = low; i < static_cast<int>(a.size()); ++i)
        c.push_back(a[static_cast<std::size_t>(i)].shifted_arg(Rational(-low)));
    const int d = static_cast<int>(c.size()) - 1;

    // rhs of the shifted relation: rho(m) = rhs(m - low) for m >= low
    // (relations below m = low do not exist)
    PolyFrac rho = rhs.expr.shifted_arg(Rational(-low));

    Poly U = universal_denominator(c);
    std::vector<Int> u_roots = U.is_constant() ? std::vector<Int>{} : nonneg_integer_roots(U);

    // transformed equation for z with y = z/U:
    //   sum_i c_i(n) * prod_{j != i} U(n+j) * z(n+i) = rho(n) * prod_j U(n+j)
    std::vector<Poly> shifted_u;
    for (int i = 0; i <= d; ++i)
        shifted_u.push_back(U.shifted_arg(Rational(i)));
    std::vector<Poly> ct;
    for (int i = 0; i <= d; ++i) {
        Poly t = c[static_cast<std::size_t>(i)];
        for (int j = 0; j <= d; ++j)
            if (j != i)
                t *= shifted_u[static_cast<std::size_t>(j)];
        ct.push_back(std::move(t));
    }
    Poly all_u = Poly::constant(Var::n, 1);
    for (const Poly& su : shifted_u)
        all_u *= su;
    // clear the rhs denominator through the whole equation
    Poly s = rho.den();
    Poly w = rho.num() * all_u;
    if (!s.is_one())
        for (Poly& t : ct)
            t *= s;

    int dmax = poly_solution_degree_bound(ct, w);
    if (dmax < 0 && w.is_zero()) {
        // only the zero polynomial: solution space is {0}
        bool all_zero_init = true;
        for (long n = 0; n < static_cast<long>(init.size()); ++n)
            all_zero_init = all_zero_init && init[static_cast<std::size_t>(n)] == 0;
        if (all_zero_init && rhs.expr.is_zero() &&
            std::all_of(rhs.prefix.begin(), rhs.prefix.end(),
                        [](const Rational& r) { return r == 0; }))
            return RationalSeq::zero();
        return std::nullopt;
    }
    if (dmax < 0)
        return std::nullopt;

    // validity threshold: past the poles of U and the leading/trailing roots
    long n0 = low;
    for (const Int& r : u_roots)
        n0 = std::max(n0, r.get_si() + 1 + low);
    {
        Poly lead_shifted = c.back().shifted_arg(Rational(-d));  // c_d(m - d)
        if (!lead_shifted.is_constant())
            for (const Int& r : nonneg_integer_roots(lead_shifted))
                n0 = std::max(n0, r.get_si() + 1 + low);
        if (!c.front().is_constant())
            for (const Int& r : nonneg_integer_roots(c.front()))
                n0 = std::max(n0, r.get_si() + 1 + low);
        if (!rhs.expr.den().is_constant())
            for (const Int& r : nonneg_integer_roots(rhs.expr.den()))
                n0 = std::max(n0, r.get_si() + 1);
        n0 = std::max(n0, rhs.valid_from);
    }

    // reference values from forward propagation
    const long match_hi = n0 + d;  // d+1 values pin the solution past n0
    Recurrence aligned;
    aligned.a = rec.a;
    aligned.rhs_offset = 0;
    std::vector<Rational> b_stream = rhs.stream(match_hi);
    std::vector<Rational> seq = propagate(aligned, b_stream, init, match_hi);

    // linear system: identity coefficients plus value matching
    LinearSystem sys;
    sys.cols = static_cast<std::size_t>(dmax) + 1;
    // identity: sum_i ct_i(n) z(n+i) - w(n) = 0, coefficients in n
    std::vector<Poly> unknown_poly;  // contribution of z_s
    for (int sdeg = 0; sdeg <= dmax; ++sdeg) {
        Poly contrib(Var::n);
        for (int i = 0; i <= d; ++i) {
            // (n+i)^sdeg
            Poly pw = Poly(Var::n, {Rational(i), Rational(1)}).pow(static_cast<unsigned>(sdeg));
            contrib += ct[static_cast<std::size_t>(i)] * pw;
        }
        unknown_poly.push_back(std::move(contrib));
    }
    int max_deg = w.degree();
    for (const Poly& p : unknown_poly)
        max_deg = std::max(max_deg, p.degree());
    for (int t = 0; t <= max_deg; ++t) {
        std::vector<Rational> row;
        row.reserve(sys.cols + 1);
        for (int sdeg = 0; sdeg <= dmax; ++sdeg)
            row.push_back(unknown_poly[static_cast<std::size_t>(sdeg)].coeff(t));
        row.push_back(w.coeff(t));
        sys.add_row(std::move(row));
    }
    // value matching at n = n0..n0+d: y(n) = z(n - low)/U(n - low) = seq[n]
    for (long n = n0; n <= match_hi; ++n) {
        long m = n - low;
        Rational uval = U.eval_int(m);
        if (uval == 0)
            fail(ErrorClass::internal, "universal denominator vanishes past its roots");
        std::vector<Rational> row;
        Rational npow(1);
        for (int sdeg = 0; sdeg <= dmax; ++sdeg) {
            row.push_back(npow);
            npow *= Rational(m);
        }
        row.push_back(seq[static_cast<std::size_t>(n)] * uval);
        sys.add_row(std::move(row));
    }

    auto solved = sys.solve();
    if (!solved)
        return std::nullopt;
    Poly z(Var::n, solved->first);

    RationalSeq result;
    result.expr = PolyFrac(z.shifted_arg(Rational(-low)), U.shifted_arg(Rational(-low)));
    result.valid_from = n0;
    for (long n = 0; n < n0; ++n)
        result.prefix.push_back(seq[static_cast<std::size_t>(n)]);

    // certify: substitute back symbolically
    PolyFrac residual(Var::n);
    for (int i = 0; i <= rec.order(); ++i) {
        PolyFrac term(rec.a[static_cast<std::size_t>(i)], Poly::constant(Var::n, 1));
        residual = residual + term * result.expr.shifted_arg(Rational(i));
    }
    residual = residual - rhs.expr;
    if (!residual.is_zero())
        return std::nullopt;  // spurious fit (can happen when matching was degenerate)
    // the prefix region must agree with the sequence as well
    for (long n = 0; n <= match_hi; ++n)
        if (result.at(n) != seq[static_cast<std::size_t>(n)])
            return std::nullopt;
    return result;
}

LayeredSolution eps_layer_solve(const EpsRecurrence& rec, const std::map<int, LayerRhs>& rhs,
                                const LayerInits& init, EpsWindow window,
                                const EpsSolveOptions& options) {
    RecurrenceMeta meta = recurrence_meta(rec);
    Recurrence base = layer_recurrence(rec);
    const int d = meta.d;

    LayeredSolution out;
    out.lo = window.lo;
    out.lambda_max = window.lo - 1;

    auto layer_rhs = [&](int k) -> const LayerRhs* {
        auto it = rhs.find(k);
        return it == rhs.end() ? nullptr : &it->second;
    };

    std::vector<RationalSeq> closed;
    int k = window.lo;
    for (; k <= window.hi; ++k) {
        const LayerRhs* lr = layer_rhs(k);
        if (lr && lr->kind == LayerRhs::Kind::stream)
            break;  // symbolic updates need closed forms from here on

        // symbolic layer right-hand side per the update rule; the given rhs
        // streams are raw-aligned, so shift them to relation indexing
        const int off = rec.rhs_offset;
        const bool has_closed = lr && lr->kind == LayerRhs::Kind::closed;
        PolyFrac expr = has_closed ? lr->closed.expr.shifted_arg(Rational(-off)) : PolyFrac(Var::n);
        long vf = has_closed ? lr->closed.valid_from + off : 0;
        vf = std::max<long>(vf, std::max(off, 0));
        for (int e = 1; e <= k - window.lo; ++e) {
            const RationalSeq& lower = closed[static_cast<std::size_t>(k - e - window.lo)];
            for (int i = 0; i <= d; ++i) {
                Poly ce = rec.a[static_cast<std::size_t>(i)].eps_coeff(e);
                if (ce.is_zero())
                    continue;
                expr = expr - PolyFrac(ce, Poly::constant(Var::n, 1)) *
                                  lower.expr.shifted_arg(Rational(i));
                vf = std::max(vf, lower.valid_from - i);
            }
        }
        RationalSeq b;
        b.expr = std::move(expr);
        b.valid_from = std::max(vf, 0L);
        for (long n = 0; n < b.valid_from; ++n) {
            Rational val = has_closed && n >= off ? lr->closed.at(n - off) : Rational(0);
            for (int e = 1; e <= k - window.lo; ++e) {
                const RationalSeq& lower = closed[static_cast<std::size_t>(k - e - window.lo)];
                for (int i = 0; i <= d; ++i) {
                    Poly ce = rec.a[static_cast<std::size_t>(i)].eps_coeff(e);
                    if (ce.is_zero())
                        continue;
                    val -= ce.eval_int(n) * lower.at(n + i);
                }
            }
            b.prefix.push_back(val);
        }

        Recurrence layer_rec = base;
        layer_rec.rhs_offset = 0;  // the symbolic rhs is already relation-indexed
        auto solution = solve_rational(layer_rec, b, init(k));
        if (!solution)
            break;
        closed.push_back(*solution);
        SolutionExpr se;
        se.kind = SolutionExpr::Kind::rational;
        se.seq = std::move(*solution);
        out.layers.push_back(std::move(se));
        out.lambda_max = k;
    }

    if (k <= window.hi) {
        // moment fallback for layers k..hi via the layered engine
        const long mu = options.fallback_mu;
        const long growth = std::max(0, d - meta.d_prime);
        const long assemble = mu + 1 + (growth + d) * static_cast<long>(window.hi - k + 1) + d;
        LayeredStream fb_rhs = LayeredStream::zeros({k, window.hi}, assemble);
        for (int kk = k; kk <= window.hi; ++kk) {
            auto& row = fb_rhs.layers[static_cast<std::size_t>(kk - k)];
            if (const LayerRhs* lr = layer_rhs(kk)) {
                if (lr->kind == LayerRhs::Kind::closed) {
                    auto vals = lr->closed.stream(assemble - 1);
                    row = std::move(vals);
                } else if (lr->kind == LayerRhs::Kind::stream) {
                    if (static_cast<long>(lr->values.size()) < assemble)
                        fail(ErrorClass::capacity_shortfall,
                             "fallback layer " + std::to_string(kk) + " needs " +
                                 std::to_string(assemble) + " rhs moments, got " +
                                 std::to_string(lr->values.size()));
                    row.assign(lr->values.begin(), lr->values.begin() + assemble);
                }
            }
            // subtract contributions of the closed layers below the fallback window
            for (int e = 1; e <= kk - window.lo; ++e) {
                int src = kk - e;
                if (src >= k)
                    continue;  // handled inside the layered propagation
                const RationalSeq& lower = closed[static_cast<std::size_t>(src - window.lo)];
                for (int i = 0; i <= d; ++i) {
                    Poly ce = rec.a[static_cast<std::size_t>(i)].eps_coeff(e);
                    if (ce.is_zero())
                        continue;
                    for (long idx = 0; idx < assemble; ++idx) {
                        long rel = idx + rec.rhs_offset;  // relation at this raw entry
                        if (rel < 0 || rel + i < 0)
                            continue;
                        row[static_cast<std::size_t>(idx)] -=
                            ce.eval_int(rel) * lower.at(rel + i);
                    }
                }
            }
        }
        EpsRecurrence sub = rec;
        LayeredStream streams =
            eps_layered_propagate(sub, fb_rhs, init, {k, window.hi}, mu);
        for (int kk = k; kk <= window.hi; ++kk) {
            SolutionExpr se;
            se.kind = SolutionExpr::Kind::moments;
            se.values = streams.layer(kk);
            out.layers.push_back(std::move(se));
        }
    }
    return out;
}

} // namespace momenta
