// Ranking quality: average precision at k per worker, mean over workers.
#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "tempora/errors.hpp"

namespace tempora {

struct RankedOutcome {
    std::string worker_id;
    std::vector<std::string> ranked_task_ids;   // recommendation order
    std::set<std::string> relevant_task_ids;    // engaged (label > 0)
};

// AP@k = sum_{i<=k} Precision@i * rel_i / min(|relevant|, k).
// Empty relevant set scores 0. Throws InvalidK for k < 1.
double average_precision_at_k(std::span<const std::string> ranked,
                              const std::set<std::string>& relevant, std::size_t k);

// Unweighted mean of per-worker AP@k. Throws EmptyInput.
double map_at_k(std::span<const RankedOutcome> outcomes, std::size_t k);

}  // namespace tempora
