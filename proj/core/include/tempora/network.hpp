// Small feed-forward regressor (one rectified hidden layer, logistic output)
// trained full-batch with Adam on mean squared error. Parameters live in one
// flat vector [W1, b1, W2, b2] so the optimizer and the gradient checker can
// treat the whole network as a single parameter array.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tempora/errors.hpp"

namespace tempora {

struct TrainConfig {
    double learning_rate = 0.001;
    int epochs = 1000;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    // Loss is mean squared error; there is no alternative.
};

struct AdamState {
    std::vector<double> m;  // first-moment accumulator
    std::vector<double> v;  // second-moment accumulator
    std::int64_t step = 0;

    void reset(std::size_t n);
};

// One Adam update. The step counter is incremented before bias correction.
// Throws NumericalError on non-finite gradients.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, const TrainConfig& config);

// Row-major example matrix; rows are feature vectors of equal width.
struct ExampleBatch {
    std::size_t dim = 0;
    std::vector<double> x;  // size = rows * dim
    std::vector<double> y;  // size = rows

    std::size_t rows() const { return y.size(); }
    void add(std::span<const double> features, double label);
    std::span<const double> row(std::size_t i) const {
        return {x.data() + i * dim, dim};
    }
};

class FeedForwardNet {
  public:
    FeedForwardNet() = default;
    FeedForwardNet(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed);

    std::size_t input_dim() const { return in_; }
    std::size_t hidden_dim() const { return hidden_; }
    std::size_t param_count() const { return theta_.size(); }

    // Forward pass; logistic output, always in (0, 1).
    double predict(std::span<const double> x) const;

    double mse(const ExampleBatch& batch) const;

    // Full-batch MSE and its analytic gradient (same layout as params()).
    double mse_and_gradient(const ExampleBatch& batch, std::span<double> grad) const;

    std::span<double> params() { return theta_; }
    std::span<const double> params() const { return theta_; }

    bool operator==(const FeedForwardNet& other) const = default;

  private:
    std::size_t in_ = 0;
    std::size_t hidden_ = 0;
    std::vector<double> theta_;
};

}  // namespace tempora
