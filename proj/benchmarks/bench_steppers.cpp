#include <benchmark/benchmark.h>

#include "ratstep/steppers.hpp"

using namespace ratstep;

namespace {

struct Prepared {
    PartialFractionForm pf;
    GammaTable gamma;
};

Prepared prepare(const ButcherTableau& t) {
    auto pf = partial_fractions(stability_function(t));
    GammaTable gamma(pf, pf.order_p);
    return {std::move(pf), std::move(gamma)};
}

void BM_PartialFractions(benchmark::State& state) {
    const auto r = stability_function(state.range(0) == 0 ? sdirk3() : gauss3());
    for (auto _ : state) benchmark::DoNotOptimize(partial_fractions(r));
}
BENCHMARK(BM_PartialFractions)->Arg(0)->Arg(1);

void BM_GammaTable(benchmark::State& state) {
    const auto pf = partial_fractions(stability_function(gauss3()));
    for (auto _ : state) benchmark::DoNotOptimize(GammaTable(pf, pf.order_p));
}
BENCHMARK(BM_GammaTable);

void BM_ShiftedSolve(benchmark::State& state) {
    const int M = static_cast<int>(state.range(1));
    const OperatorPtr op = state.range(0) == 0 ? make_heat_1d(M) : make_heat_2d(M);
    const ComplexVector rhs = ComplexVector::Ones(op->dimension());
    (void)op->solve_shifted(Complex{0.14, 0.13}, 0.01, rhs);
    for (auto _ : state) benchmark::DoNotOptimize(op->solve_shifted(Complex{0.14, 0.13}, 0.01, rhs));
    state.SetItemsProcessed(state.iterations() * op->dimension());
}
BENCHMARK(BM_ShiftedSolve)->Args({0, 100})->Args({0, 1000})->Args({1, 50})->Args({1, 100});

void BM_RationalIntegrate(benchmark::State& state) {
    const auto problem = make_heat1d(100);
    const auto m = prepare(state.range(0) == 0 ? sdirk3() : gauss3());
    for (auto _ : state) benchmark::DoNotOptimize(rational_integrate(problem, 160, m.pf, m.gamma));
}
BENCHMARK(BM_RationalIntegrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RkIntegrate(benchmark::State& state) {
    const auto problem = make_heat1d(100);
    const auto t = state.range(0) == 0 ? sdirk3() : gauss3();
    for (auto _ : state) benchmark::DoNotOptimize(rk_integrate(problem, 160, t));
}
BENCHMARK(BM_RkIntegrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
