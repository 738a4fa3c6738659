#include "tempora/metrics.hpp"

#include <algorithm>

namespace tempora {

double average_precision_at_k(std::span<const std::string> ranked,
                              const std::set<std::string>& relevant, std::size_t k) {
    if (k < 1) throw InvalidK("k must be >= 1");
    if (relevant.empty()) return 0.0;

    const std::size_t depth = std::min(k, ranked.size());
    double hits = 0.0;
    double ap = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (relevant.count(ranked[i])) {
            hits += 1.0;
            ap += hits / static_cast<double>(i + 1);
        }
    }
    const double denom = static_cast<double>(std::min(relevant.size(), k));
    return ap / denom;
}

double map_at_k(std::span<const RankedOutcome> outcomes, std::size_t k) {
    if (outcomes.empty()) throw EmptyInput("map_at_k over no outcomes");
    double sum = 0.0;
    for (const auto& o : outcomes) {
        sum += average_precision_at_k(o.ranked_task_ids, o.relevant_task_ids, k);
    }
    return sum / static_cast<double>(outcomes.size());
}

}  // namespace tempora
