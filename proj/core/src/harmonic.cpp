#include "momenta/harmonic.hpp"

namespace momenta {

std::vector<Rational> harmonic_sum_stream(std::span<const long> indices, long mu) {
    for (long a : indices)
        if (a == 0)
            fail(ErrorClass::degenerate_input, "harmonic sum index 0 is undefined");
    std::vector<Rational> cur(static_cast<std::size_t>(mu) + 1, Rational(1));
    // peel indices from the innermost sum outwards
    for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
        long a = *it;
        long w = a < 0 ? -a : a;
        bool alt = a < 0;
        std::vector<Rational> next(cur.size());
        next[0] = Rational(0);
        Rational acc(0);
        for (long i = 1; i <= mu; ++i) {
            Int iw = 1;
            for (long t = 0; t < w; ++t)
                iw *= i;
            Rational term = make_rational(alt && (i % 2 != 0) ? Int(-1) : Int(1), iw);
            acc += term * cur[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(i)] = acc;
        }
        cur = std::move(next);
    }
    return cur;
}

Rational harmonic_sum(std::span<const long> indices, long n) {
    if (indices.empty())
        return Rational(1);
    if (n < 0)
        fail(ErrorClass::degenerate_input, "harmonic sum at negative argument");
    return harmonic_sum_stream(indices, n).back();
}

} // namespace momenta
