#include <benchmark/benchmark.h>

#include "tempora/network.hpp"
#include "tempora/rng.hpp"

using namespace tempora;

namespace {

ExampleBatch make_batch(std::size_t rows, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    ExampleBatch batch;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> x(dim);
        for (auto& v : x) v = rng.u01();
        batch.add(x, rng.bernoulli(0.5) ? 1.0 : 0.0);
    }
    return batch;
}

void BM_ForwardPass(benchmark::State& state) {
    FeedForwardNet net(16, 16, 1);
    Rng rng(2);
    std::vector<double> x(16);
    for (auto& v : x) v = rng.u01();
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.predict(x));
    }
}
BENCHMARK(BM_ForwardPass);

void BM_FullBatchGradient(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    FeedForwardNet net(16, 16, 1);
    const ExampleBatch batch = make_batch(rows, 16, 3);
    std::vector<double> grad(net.param_count());
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.mse_and_gradient(batch, grad));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}
BENCHMARK(BM_FullBatchGradient)->Arg(25)->Arg(100)->Arg(200);

void BM_TrainEpochs(benchmark::State& state) {
    const ExampleBatch batch = make_batch(100, 16, 4);
    const TrainConfig config;
    for (auto _ : state) {
        FeedForwardNet net(16, 16, 1);
        AdamState adam;
        adam.reset(net.param_count());
        std::vector<double> grad(net.param_count());
        for (int epoch = 0; epoch < 100; ++epoch) {
            net.mse_and_gradient(batch, grad);
            adam_step(net.params(), grad, adam, config);
        }
        benchmark::DoNotOptimize(net.params().data());
    }
}
BENCHMARK(BM_TrainEpochs);

}  // namespace
