// Independent test oracles: central finite differences for the network
// gradient and recursive exhaustive enumerations for the exact rank tests.
// These deliberately share no code with the implementation paths they check.
#pragma once

#include <span>
#include <vector>

#include "tempora/network.hpp"

namespace tempora::oracle {

// Central-difference gradient of the batch MSE at the net's current params.
std::vector<double> finite_difference_gradient(FeedForwardNet net,
                                               const ExampleBatch& batch,
                                               double h = 1e-5);

// Exact two-sided Mann-Whitney p by recursive enumeration of all
// C(n, n_a) group assignments over pooled midranks.
double mwu_exact_p(std::span<const double> a, std::span<const double> b);

// Exact two-sided Wilcoxon signed-rank p by recursive enumeration of all
// 2^n sign assignments (zeros dropped first).
double wilcoxon_exact_p(std::span<const double> diffs);

// AP@k through an alternative accumulation (precision recomputed from
// scratch at each rank) for cross-checking the implementation.
double ap_at_k_reference(const std::vector<std::string>& ranked,
                         const std::vector<std::string>& relevant, std::size_t k);

}  // namespace tempora::oracle
