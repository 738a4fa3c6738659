#include "tempora/network.hpp"

#include <cmath>

#include "tempora/rng.hpp"

namespace tempora {

void AdamState::reset(std::size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
    step = 0;
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, const TrainConfig& config) {
    if (params.size() != grads.size()) {
        throw NumericalError("adam_step: parameter/gradient size mismatch");
    }
    if (state.m.size() != params.size()) state.reset(params.size());

    for (double g : grads) {
        if (!std::isfinite(g)) throw NumericalError("adam_step: non-finite gradient");
    }

    state.step += 1;
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    const double lr = config.learning_rate;

    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * grads[i];
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / corr1;
        const double v_hat = state.v[i] / corr2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
    }
}

void ExampleBatch::add(std::span<const double> features, double label) {
    if (dim == 0) dim = features.size();
    if (features.size() != dim) {
        throw NumericalError("ExampleBatch: inconsistent feature width");
    }
    x.insert(x.end(), features.begin(), features.end());
    y.push_back(label);
}

FeedForwardNet::FeedForwardNet(std::size_t input_dim, std::size_t hidden_dim,
                               std::uint64_t seed)
    : in_(input_dim), hidden_(hidden_dim) {
    theta_.resize(hidden_ * in_ + hidden_ + hidden_ + 1);
    Rng rng(seed);
    for (double& w : theta_) w = rng.uniform(-0.1, 0.1);
}

namespace {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

double FeedForwardNet::predict(std::span<const double> x) const {
    const double* w1 = theta_.data();
    const double* b1 = w1 + hidden_ * in_;
    const double* w2 = b1 + hidden_;
    const double b2 = w2[hidden_];

    double z2 = b2;
    for (std::size_t j = 0; j < hidden_; ++j) {
        const double* row = w1 + j * in_;
        double z1 = b1[j];
        for (std::size_t i = 0; i < in_; ++i) z1 += row[i] * x[i];
        if (z1 > 0.0) z2 += w2[j] * z1;
    }
    return logistic(z2);
}

double FeedForwardNet::mse(const ExampleBatch& batch) const {
    double total = 0.0;
    for (std::size_t r = 0; r < batch.rows(); ++r) {
        const double d = predict(batch.row(r)) - batch.y[r];
        total += d * d;
    }
    return batch.rows() ? total / static_cast<double>(batch.rows()) : 0.0;
}

double FeedForwardNet::mse_and_gradient(const ExampleBatch& batch,
                                        std::span<double> grad) const {
    const std::size_t n = batch.rows();
    const double* w1 = theta_.data();
    const double* b1 = w1 + hidden_ * in_;
    const double* w2 = b1 + hidden_;
    const double b2 = w2[hidden_];

    double* gw1 = grad.data();
    double* gb1 = gw1 + hidden_ * in_;
    double* gw2 = gb1 + hidden_;
    double* gb2 = gw2 + hidden_;
    for (double& g : grad) g = 0.0;

    std::vector<double> hidden_act(hidden_);
    double total = 0.0;
    const double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;

    for (std::size_t r = 0; r < n; ++r) {
        const double* x = batch.x.data() + r * batch.dim;

        double z2 = b2;
        for (std::size_t j = 0; j < hidden_; ++j) {
            const double* row = w1 + j * in_;
            double z1 = b1[j];
            for (std::size_t i = 0; i < in_; ++i) z1 += row[i] * x[i];
            hidden_act[j] = z1 > 0.0 ? z1 : 0.0;
            z2 += w2[j] * hidden_act[j];
        }
        const double p = logistic(z2);
        const double err = p - batch.y[r];
        total += err * err;

        // d(mse)/d(z2) for this example
        const double delta2 = 2.0 * inv_n * err * p * (1.0 - p);
        *gb2 += delta2;
        for (std::size_t j = 0; j < hidden_; ++j) {
            gw2[j] += delta2 * hidden_act[j];
            if (hidden_act[j] > 0.0) {
                const double delta1 = delta2 * w2[j];
                gb1[j] += delta1;
                double* grow = gw1 + j * in_;
                for (std::size_t i = 0; i < in_; ++i) grow[i] += delta1 * x[i];
            }
        }
    }
    return n ? total * inv_n : 0.0;
}

}  // namespace tempora
