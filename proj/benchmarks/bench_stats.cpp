#include <benchmark/benchmark.h>

#include "tempora/rng.hpp"
#include "tempora/stats.hpp"

using namespace tempora;

namespace {

std::vector<double> sample(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = rng.normal(0.0, 1.0);
    return out;
}

void BM_MannWhitneyExact(benchmark::State& state) {
    const auto a = sample(6, 1);
    const auto b = sample(6, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mann_whitney_u(a, b).p_value);
    }
}
BENCHMARK(BM_MannWhitneyExact);

void BM_MannWhitneyApprox(benchmark::State& state) {
    const auto a = sample(200, 3);
    const auto b = sample(180, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mann_whitney_u(a, b).p_value);
    }
}
BENCHMARK(BM_MannWhitneyApprox);

void BM_KruskalWallis(benchmark::State& state) {
    const std::vector<std::vector<double>> groups = {sample(50, 5), sample(60, 6),
                                                     sample(40, 7), sample(55, 8)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(kruskal_wallis(groups).p_value);
    }
}
BENCHMARK(BM_KruskalWallis);

void BM_ShapiroWilk(benchmark::State& state) {
    const auto x = sample(static_cast<std::size_t>(state.range(0)), 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shapiro_wilk(x).p_value);
    }
}
BENCHMARK(BM_ShapiroWilk)->Arg(20)->Arg(200);

}  // namespace
