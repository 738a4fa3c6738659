#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace tempora::oracle {

std::vector<double> finite_difference_gradient(FeedForwardNet net,
                                               const ExampleBatch& batch, double h) {
    std::vector<double> grad(net.param_count());
    auto params = net.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = net.mse(batch);
        params[i] = saved - h;
        const double down = net.mse(batch);
        params[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

namespace {

// Doubled midranks of the pooled sample (integers even under ties).
std::vector<long long> doubled_midranks(std::vector<double> pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
    std::vector<long long> rank2(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const long long sum2 = static_cast<long long>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = sum2;
        i = j + 1;
    }
    return rank2;
}

}  // namespace

double mwu_exact_p(std::span<const double> a, std::span<const double> b) {
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto rank2 = doubled_midranks(pooled);
    const long long na = static_cast<long long>(a.size());
    const long long nb = static_cast<long long>(b.size());
    const long long n = na + nb;
    const long long u2_total = 2 * na * nb;

    long long observed_r2 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) observed_r2 += rank2[i];
    const long long observed_u2 = observed_r2 - na * (na + 1);
    const long long observed_min = std::min(observed_u2, u2_total - observed_u2);

    long long hits = 0;
    long long total = 0;
    std::function<void(long long, long long, long long)> recurse =
        [&](long long next, long long chosen, long long r2) {
            if (chosen == na) {
                const long long u2 = r2 - na * (na + 1);
                if (std::min(u2, u2_total - u2) <= observed_min) ++hits;
                ++total;
                return;
            }
            if (next >= n) return;
            if (n - next < na - chosen) return;
            recurse(next + 1, chosen + 1, r2 + rank2[static_cast<std::size_t>(next)]);
            recurse(next + 1, chosen, r2);
        };
    recurse(0, 0, 0);
    return static_cast<double>(hits) / static_cast<double>(total);
}

double wilcoxon_exact_p(std::span<const double> diffs) {
    std::vector<double> abs_d;
    std::vector<bool> neg;
    for (double d : diffs) {
        if (d == 0.0) continue;
        abs_d.push_back(std::fabs(d));
        neg.push_back(d < 0.0);
    }
    const auto rank2 = doubled_midranks(abs_d);
    long long w2_total = 0;
    long long w2_minus = 0;
    for (std::size_t i = 0; i < rank2.size(); ++i) {
        w2_total += rank2[i];
        if (neg[i]) w2_minus += rank2[i];
    }
    const long long observed_min = std::min(w2_minus, w2_total - w2_minus);

    long long hits = 0;
    long long total = 0;
    std::function<void(std::size_t, long long)> recurse = [&](std::size_t i,
                                                              long long w2) {
        if (i == rank2.size()) {
            if (std::min(w2, w2_total - w2) <= observed_min) ++hits;
            ++total;
            return;
        }
        recurse(i + 1, w2 + rank2[i]);  // this difference negative
        recurse(i + 1, w2);             // this difference positive
    };
    recurse(0, 0);
    return static_cast<double>(hits) / static_cast<double>(total);
}

double ap_at_k_reference(const std::vector<std::string>& ranked,
                         const std::vector<std::string>& relevant, std::size_t k) {
    const std::set<std::string> rel(relevant.begin(), relevant.end());
    if (rel.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
        if (!rel.count(ranked[i])) continue;
        // precision@ i+1 recomputed from scratch
        double hits = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            if (rel.count(ranked[j])) hits += 1.0;
        }
        total += hits / static_cast<double>(i + 1);
    }
    return total / static_cast<double>(std::min(rel.size(), k));
}

}  // namespace tempora::oracle
