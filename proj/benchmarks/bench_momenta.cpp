#include <benchmark/benchmark.h>

#include "momenta/expr.hpp"
#include "momenta/guess.hpp"
#include "momenta/harmonic.hpp"
#include "momenta/propagate.hpp"

using namespace momenta;

namespace {

// (n+1) F(n+1) - (n+1) F(n) = 1: harmonic numbers
Recurrence harmonic_recurrence() {
    Recurrence rec;
    rec.a.push_back(parse_poly("-n-1", Var::n));
    rec.a.push_back(parse_poly("n+1", Var::n));
    return rec;
}

void bm_propagate_harmonic(benchmark::State& state) {
    const long mu = state.range(0);
    Recurrence rec = harmonic_recurrence();
    std::vector<Rational> rhs(static_cast<std::size_t>(mu) + 1, Rational(1));
    std::vector<Rational> init{Rational(0)};
    for (auto _ : state) {
        auto values = propagate(rec, rhs, init, mu);
        benchmark::DoNotOptimize(values);
    }
    state.SetComplexityN(mu);
}
BENCHMARK(bm_propagate_harmonic)->RangeMultiplier(2)->Range(500, 8000)->Complexity();

void bm_guess_catalan(benchmark::State& state) {
    std::vector<Rational> catalan{Rational(1)};
    for (int n = 0; n < 80; ++n)
        catalan.push_back(catalan.back() * Rational(2 * (2 * n + 1)) / Rational(n + 2));
    GuessConfig cfg;
    cfg.max_order = 2;
    cfg.max_degree = 2;
    cfg.holdout = 20;
    for (auto _ : state) {
        auto rec = guess_recurrence(catalan, cfg);
        benchmark::DoNotOptimize(rec);
    }
}
BENCHMARK(bm_guess_catalan);

void bm_harmonic_sum_stream(benchmark::State& state) {
    const long mu = state.range(0);
    std::vector<long> idx{1, 1};
    for (auto _ : state) {
        auto s = harmonic_sum_stream(idx, mu);
        benchmark::DoNotOptimize(s);
    }
    state.SetComplexityN(mu);
}
BENCHMARK(bm_harmonic_sum_stream)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

} // namespace

BENCHMARK_MAIN();
