// Task feature encoding for the engagement regressor: five numeric fields
// min-max scaled against the running observed range, a category one-hot and
// three task-type flags.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tempora/types.hpp"

namespace tempora {

// Closed category universe for one run. Index order is insertion order.
class CategorySet {
  public:
    CategorySet() = default;
    explicit CategorySet(std::vector<std::string> names);

    std::size_t index_of(const std::string& name) const;  // throws UnknownCategory
    bool contains(const std::string& name) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

  private:
    std::vector<std::string> names_;
};

// Task metadata lookup for resolving interaction records back to tasks.
class TaskIndex {
  public:
    void add(Task task);
    const Task* find(const std::string& task_id) const;
    const Task& at(const std::string& task_id) const;  // throws ConfigError
    std::size_t size() const { return by_id_.size(); }

  private:
    std::unordered_map<std::string, Task> by_id_;
};

// Running min-max state per numeric field. A field whose observed range has
// zero width scales to 0.5.
struct RangeNormalizer {
    struct Range {
        double lo = 0.0;
        double hi = 0.0;
        bool seen = false;

        void observe(double v);
        double scale(double v) const;
    };

    Range payment_per_task;
    Range payment_per_batch;
    Range prior_tasks;
    Range duration;

    void observe(const Task& task, double prior_from_requester);
};

struct FeatureVector {
    std::vector<double> values;

    static constexpr std::size_t kNumericFields = 5;
    static std::size_t dimension(std::size_t category_count) {
        return kNumericFields + category_count + 3;
    }
};

// Completed-task count from this task's requester in the worker's history.
double prior_tasks_from_requester(const Task& task,
                                  std::span<const InteractionRecord> history,
                                  const TaskIndex& tasks);

// Core encoder: observes the task's numeric fields into `norm`, then scales.
// Layout: [pay_task, pay_batch, prior_from_requester, acceptance_rate,
// duration, category one-hot..., regular, training, exam].
FeatureVector encode_features(const Task& task, double prior_from_requester,
                              RangeNormalizer& norm, const CategorySet& categories);

// Convenience form that derives the prior-completions count from history.
FeatureVector encode_features(const Task& task,
                              std::span<const InteractionRecord> worker_history,
                              const TaskIndex& tasks, RangeNormalizer& norm,
                              const CategorySet& categories);

}  // namespace tempora
