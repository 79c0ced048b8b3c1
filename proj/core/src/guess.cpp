#include "momenta/guess.hpp"

#include <algorithm>

#include "momenta/modular.hpp"

namespace momenta {

namespace {

struct ModMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint64_t> a;

    std::uint64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct NullspaceModP {
    std::vector<std::size_t> pivots;
    std::vector<std::vector<std::uint64_t>> basis;  // one vector per free column
};

NullspaceModP nullspace_mod_p(ModMatrix m, std::uint64_t p) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0)
            ++sel;
        if (sel == m.rows)
            continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols; ++c)
                std::swap(m.at(sel, c), m.at(row, c));
        std::uint64_t inv = inv_mod(m.at(row, col), p);
        for (std::size_t c = col; c < m.cols; ++c)
            m.at(row, c) = mul_mod(m.at(row, c), inv, p);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == row || m.at(r, col) == 0)
                continue;
            std::uint64_t f = m.at(r, col);
            for (std::size_t c = col; c < m.cols; ++c)
                m.at(r, c) = sub_mod(m.at(r, c), mul_mod(f, m.at(row, c), p), p);
        }
        pivots.push_back(col);
        ++row;
    }
    NullspaceModP out;
    out.pivots = pivots;
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t c : pivots)
        is_pivot[c] = true;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col])
            continue;
        std::vector<std::uint64_t> v(m.cols, 0);
        v[free_col] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = sub_mod(0, m.at(i, free_col), p);
        out.basis.push_back(std::move(v));
    }
    return out;
}

struct Candidate {
    std::vector<Poly> coeffs;  // 0..order in n, normalized

    std::pair<std::vector<int>, std::vector<Rational>> sort_key() const {
        std::vector<int> degrees;
        std::vector<Rational> flat;
        for (const Poly& p : coeffs) {
            degrees.push_back(p.degree());
            for (int t = 0; t <= p.degree(); ++t)
                flat.push_back(p.coeff(t));
        }
        return {degrees, flat};
    }
};

/// integer-normalize: clear denominators, divide by content, positive lead
std::vector<Poly> normalize_coeffs(std::vector<Poly> coeffs) {
    Int den_lcm = 1, num_gcd = 0;
    for (const Poly& p : coeffs)
        for (int t = 0; t <= p.degree(); ++t) {
            const Rational& c = p.coeff(t);
            if (c == 0)
                continue;
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        }
    for (Poly& p : coeffs)
        p *= Rational(den_lcm);
    for (const Poly& p : coeffs)
        for (int t = 0; t <= p.degree(); ++t) {
            const Rational& c = p.coeff(t);
            if (c == 0)
                continue;
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        }
    if (num_gcd > 1) {
        Rational inv = make_rational(1, num_gcd);
        for (Poly& p : coeffs)
            p *= inv;
    }
    int top = static_cast<int>(coeffs.size()) - 1;
    while (top > 0 && coeffs[static_cast<std::size_t>(top)].is_zero())
        --top;
    coeffs.resize(static_cast<std::size_t>(top) + 1);
    if (coeffs.back().leading() < 0)
        for (Poly& p : coeffs)
            p *= Rational(-1);
    return coeffs;
}

} // namespace

std::pair<bool, std::optional<long>> verify_annihilates(const Recurrence& rec,
                                                        std::span<const Rational> moments) {
    const int d = rec.order();
    if (static_cast<long>(moments.size()) <= d)
        fail(ErrorClass::insufficient_moments,
             "verification needs more than " + std::to_string(d) + " moments, got " +
                 std::to_string(moments.size()));
    for (long n = 0; n + d < static_cast<long>(moments.size()); ++n) {
        Rational acc(0);
        for (int i = 0; i <= d; ++i)
            acc += rec.a[static_cast<std::size_t>(i)].eval_int(n) *
                   moments[static_cast<std::size_t>(n + i)];
        if (acc != 0)
            return {false, n};
    }
    return {true, std::nullopt};
}

std::optional<Recurrence> guess_recurrence(std::span<const Rational> moments,
                                           const GuessConfig& cfg) {
    if (cfg.holdout < 1)
        fail(ErrorClass::degenerate_input, "holdout must be at least 1");
    const long total = static_cast<long>(moments.size());
    // at least the smallest cell (order 1, degree 0) must be fittable;
    // larger cells that do not fit are skipped
    if (2 + cfg.holdout + 1 > total)
        fail(ErrorClass::insufficient_moments,
             "need at least " + std::to_string(2 + cfg.holdout + 1) + " moments, got " +
                 std::to_string(total));

    // search cells by unknown count, then order
    std::vector<std::pair<int, int>> cells;
    for (int order = 1; order <= cfg.max_order; ++order)
        for (int degree = 0; degree <= cfg.max_degree; ++degree)
            cells.emplace_back(order, degree);
    std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        long ua = static_cast<long>(a.first + 1) * (a.second + 1);
        long ub = static_cast<long>(b.first + 1) * (b.second + 1);
        return std::pair(ua, a.first) < std::pair(ub, b.first);
    });

    for (const auto& [order, degree] : cells) {
        const long fit_rows = total - cfg.holdout - order;
        const std::size_t cols = static_cast<std::size_t>(order + 1) * (degree + 1);
        if (fit_rows < static_cast<long>(cols))
            continue;

        PrimeStream primes(cfg.prime_bits, cfg.prime_salt);
        constexpr int kMaxPrimes = 32;
        // consensus over primes: keep the runs with maximal rank and matching pivots
        std::vector<std::pair<std::uint64_t, NullspaceModP>> good;
        std::size_t best_rank = 0;
        bool cell_impossible = false;
        int primes_used = 0;

        auto solve_prime = [&](std::uint64_t p) -> std::optional<NullspaceModP> {
            ModMatrix m;
            m.rows = static_cast<std::size_t>(fit_rows);
            m.cols = cols;
            m.a.assign(m.rows * m.cols, 0);
            std::vector<std::uint64_t> f(moments.size());
            for (std::size_t i = 0; i < moments.size(); ++i) {
                auto r = rational_mod(moments[i], p);
                if (!r)
                    return std::nullopt;  // unlucky prime
                f[i] = *r;
            }
            for (long n = 0; n < fit_rows; ++n) {
                std::size_t col = 0;
                for (int i = 0; i <= order; ++i) {
                    std::uint64_t npow = 1;
                    std::uint64_t narg = static_cast<std::uint64_t>(n) % p;
                    std::uint64_t fv = f[static_cast<std::size_t>(n + i)];
                    for (int t = 0; t <= degree; ++t) {
                        m.at(static_cast<std::size_t>(n), col++) = mul_mod(npow, fv, p);
                        npow = mul_mod(npow, narg, p);
                    }
                }
            }
            return nullspace_mod_p(std::move(m), p);
        };

        while (static_cast<int>(good.size()) < 3 && primes_used < kMaxPrimes) {
            std::uint64_t p = primes.next();
            ++primes_used;
            auto ns = solve_prime(p);
            if (!ns)
                continue;
            if (ns->basis.empty()) {
                // modular rank can only drop, so an empty nullspace is definitive
                cell_impossible = true;
                break;
            }
            std::size_t rank = ns->pivots.size();
            if (rank > best_rank) {
                best_rank = rank;
                good.clear();
            }
            if (rank == best_rank) {
                if (good.empty() || good.front().second.pivots == ns->pivots)
                    good.emplace_back(p, std::move(*ns));
            }
        }
        if (cell_impossible || good.empty())
            continue;

        // reconstruct candidates coordinate by coordinate, adding primes on demand
        const std::size_t dim = good.front().second.basis.size();
        std::vector<Candidate> candidates;
        for (std::size_t v = 0; v < dim; ++v) {
            std::optional<std::vector<Rational>> vec;
            while (true) {
                std::vector<std::pair<Int, Int>> parts;
                std::vector<Rational> values(cols);
                bool ok = true;
                for (std::size_t c = 0; c < cols && ok; ++c) {
                    parts.clear();
                    for (const auto& [p, ns] : good)
                        parts.emplace_back(Int(ns.basis[v][c]), Int(p));
                    Int modulus = 1;
                    for (const auto& [r, p] : parts)
                        modulus *= p;
                    auto rec = rational_reconstruct(crt_combine(parts), modulus);
                    if (!rec) {
                        ok = false;
                        break;
                    }
                    values[c] = *rec;
                }
                if (ok) {
                    vec = std::move(values);
                    break;
                }
                if (primes_used >= kMaxPrimes)
                    break;
                std::uint64_t p = primes.next();
                ++primes_used;
                auto ns = solve_prime(p);
                if (!ns || ns->pivots != good.front().second.pivots)
                    continue;
                good.emplace_back(p, std::move(*ns));
            }
            if (!vec)
                continue;
            Candidate cand;
            for (int i = 0; i <= order; ++i) {
                std::vector<Rational> pc;
                for (int t = 0; t <= degree; ++t)
                    pc.push_back((*vec)[static_cast<std::size_t>(i) * (degree + 1) +
                                        static_cast<std::size_t>(t)]);
                cand.coeffs.emplace_back(Var::n, std::move(pc));
            }
            cand.coeffs = normalize_coeffs(std::move(cand.coeffs));
            candidates.push_back(std::move(cand));
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) { return a.sort_key() < b.sort_key(); });
        for (const Candidate& cand : candidates) {
            bool trivial = true;
            for (const Poly& p : cand.coeffs)
                trivial = trivial && p.is_zero();
            if (trivial)
                continue;
            Recurrence rec;
            rec.a = cand.coeffs;
            auto [ok, bad] = verify_annihilates(rec, moments);
            if (ok)
                return rec;
        }
    }
    return std::nullopt;
}

} // namespace momenta
