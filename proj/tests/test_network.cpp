#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tempora/network.hpp"
#include "tempora/rng.hpp"

using namespace tempora;

TEST_CASE("adam leaves parameters alone on a zero gradient") {
    std::vector<double> params = {0.5, -0.25, 1.0};
    const std::vector<double> grads = {0.0, 0.0, 0.0};
    AdamState state;
    adam_step(params, grads, state, TrainConfig{});
    CHECK(params[0] == 0.5);
    CHECK(params[1] == -0.25);
    CHECK(params[2] == 1.0);
    CHECK(state.step == 1);
}

TEST_CASE("adam first step matches the closed form") {
    // At t=1 the bias-corrected moments collapse to m_hat = g, v_hat = g^2,
    // so the update is -lr * g / (|g| + eps).
    const TrainConfig config;
    const std::vector<double> grads = {0.1, -0.03, 2.5, -1e-4};
    std::vector<double> params = {0.0, 0.2, -0.7, 0.01};
    const std::vector<double> before = params;
    AdamState state;
    adam_step(params, grads, state, config);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double expected =
            before[i] - config.learning_rate * grads[i] /
                            (std::fabs(grads[i]) + config.adam_epsilon);
        CHECK(std::fabs(params[i] - expected) <= 1e-12);
    }
    // Spec example: theta = 0, g = 0.1 -> -0.001 * (0.1 / (0.1 + 1e-8)).
    CHECK(params[0] == doctest::Approx(-0.00099999990).epsilon(1e-9));
}

TEST_CASE("adam second identical step does not grow the update magnitude") {
    const TrainConfig config;
    std::vector<double> params = {0.0};
    const std::vector<double> grads = {0.1};
    AdamState state;
    adam_step(params, grads, state, config);
    const double delta1 = std::fabs(params[0]);
    const double before = params[0];
    adam_step(params, grads, state, config);
    const double delta2 = std::fabs(params[0] - before);
    CHECK(delta2 <= delta1 + 1e-12);
}

TEST_CASE("adam rejects non-finite gradients") {
    std::vector<double> params = {0.0};
    const std::vector<double> grads = {std::nan("")};
    AdamState state;
    CHECK_THROWS_AS(adam_step(params, grads, state, TrainConfig{}), NumericalError);
}

TEST_CASE("all-zero weights predict one half") {
    FeedForwardNet net(4, 3, 7);
    for (auto& w : net.params()) w = 0.0;
    const std::vector<double> x = {1.0, -2.0, 0.5, 0.0};
    CHECK(net.predict(x) == doctest::Approx(0.5));
}

TEST_CASE("forward pass matches a hand-computed fixture") {
    FeedForwardNet net(2, 2, 0);
    auto p = net.params();
    // layout: W1 (2x2 row-major), b1 (2), W2 (2), b2 (1)
    p[0] = 0.5; p[1] = -0.25;   // hidden 0 weights
    p[2] = 0.1; p[3] = 0.2;     // hidden 1 weights
    p[4] = 0.1; p[5] = -0.1;    // b1
    p[6] = 0.3; p[7] = -0.4;    // W2
    p[8] = 0.05;                // b2
    const std::vector<double> x = {1.0, 2.0};
    // z1_0 = 0.5 - 0.5 + 0.1 = 0.1 ; z1_1 = 0.1 + 0.4 - 0.1 = 0.4
    // z2 = 0.3*0.1 - 0.4*0.4 + 0.05 = -0.08
    const double expected = 1.0 / (1.0 + std::exp(0.08));
    CHECK(std::fabs(net.predict(x) - expected) <= 1e-9);
}

TEST_CASE("prediction is pure and always inside (0,1)") {
    FeedForwardNet net(5, 16, 42);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> x(5);
        for (auto& v : x) v = rng.uniform(-50.0, 50.0);
        const double p1 = net.predict(x);
        const double p2 = net.predict(x);
        CHECK(p1 == p2);
        CHECK(p1 > 0.0);
        CHECK(p1 < 1.0);
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t in = 2 + static_cast<std::size_t>(rng.uniform_int(0, 4));
        const std::size_t hidden = 2 + static_cast<std::size_t>(rng.uniform_int(0, 5));
        FeedForwardNet net(in, hidden, rng.next_u64());
        ExampleBatch batch;
        const int rows = 3 + static_cast<int>(rng.uniform_int(0, 4));
        for (int r = 0; r < rows; ++r) {
            std::vector<double> x(in);
            for (auto& v : x) v = rng.uniform(-1.0, 1.0);
            batch.add(x, rng.u01());
        }
        std::vector<double> analytic(net.param_count());
        net.mse_and_gradient(batch, analytic);
        const auto numeric = oracle::finite_difference_gradient(net, batch);
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            const double denom =
                std::max({std::fabs(analytic[i]), std::fabs(numeric[i]), 1e-8});
            CHECK(std::fabs(analytic[i] - numeric[i]) / denom < 1e-5);
        }
    }
}

namespace {

void train_batch(FeedForwardNet& net, const ExampleBatch& batch, int epochs) {
    AdamState state;
    state.reset(net.param_count());
    std::vector<double> grad(net.param_count());
    const TrainConfig config;
    for (int e = 0; e < epochs; ++e) {
        net.mse_and_gradient(batch, grad);
        adam_step(net.params(), grad, state, config);
    }
}

}  // namespace

TEST_CASE("a single repeated example is memorized") {
    FeedForwardNet net(3, 16, 11);
    ExampleBatch batch;
    const std::vector<double> x = {0.2, 0.7, 1.0};
    for (int i = 0; i < 10; ++i) batch.add(x, 1.0);
    train_batch(net, batch, 1000);
    CHECK(std::fabs(net.predict(x) - 1.0) < 0.05);
}

TEST_CASE("training reduces the loss on a separable fixture") {
    FeedForwardNet net(2, 16, 5);
    ExampleBatch batch;
    for (int i = 0; i < 5; ++i) {
        batch.add(std::vector<double>{0.1 * i, 0.9}, 1.0);
        batch.add(std::vector<double>{0.9, 0.1 * i}, 0.0);
    }
    const double before = net.mse(batch);
    train_batch(net, batch, 1000);
    CHECK(net.mse(batch) < before);
}

TEST_CASE("contradictory duplicates settle near the mean label") {
    FeedForwardNet net(2, 16, 9);
    ExampleBatch batch;
    const std::vector<double> x = {0.4, 0.6};
    for (int i = 0; i < 5; ++i) {
        batch.add(x, 0.0);
        batch.add(x, 1.0);
    }
    train_batch(net, batch, 1000);
    const double p = net.predict(x);
    CHECK(p >= 0.25);
    CHECK(p <= 0.75);
}
