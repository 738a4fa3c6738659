#include "tempora/features.hpp"

#include <algorithm>

namespace tempora {

CategorySet::CategorySet(std::vector<std::string> names) : names_(std::move(names)) {}

std::size_t CategorySet::index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw UnknownCategory("category not in set: '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

bool CategorySet::contains(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

void TaskIndex::add(Task task) {
    auto id = task.task_id;
    by_id_.insert_or_assign(std::move(id), std::move(task));
}

const Task* TaskIndex::find(const std::string& task_id) const {
    const auto it = by_id_.find(task_id);
    return it == by_id_.end() ? nullptr : &it->second;
}

const Task& TaskIndex::at(const std::string& task_id) const {
    const Task* t = find(task_id);
    if (!t) throw ConfigError("unknown task id: '" + task_id + "'");
    return *t;
}

void RangeNormalizer::Range::observe(double v) {
    if (!seen) {
        lo = hi = v;
        seen = true;
        return;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
}

double RangeNormalizer::Range::scale(double v) const {
    if (!seen || hi == lo) return 0.5;
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

void RangeNormalizer::observe(const Task& task, double prior_from_requester) {
    payment_per_task.observe(to_usd(task.payment_per_task));
    payment_per_batch.observe(to_usd(task.payment_per_batch));
    prior_tasks.observe(prior_from_requester);
    duration.observe(static_cast<double>(task.declared_duration_s));
}

double prior_tasks_from_requester(const Task& task,
                                  std::span<const InteractionRecord> history,
                                  const TaskIndex& tasks) {
    double count = 0.0;
    for (const auto& r : history) {
        if (r.outcome != Outcome::Completed) continue;
        const Task* t = tasks.find(r.task_id);
        if (t && t->requester_id == task.requester_id) count += 1.0;
    }
    return count;
}

FeatureVector encode_features(const Task& task, double prior_from_requester,
                              RangeNormalizer& norm, const CategorySet& categories) {
    const std::size_t cat_index = categories.index_of(task.category);
    norm.observe(task, prior_from_requester);

    FeatureVector f;
    f.values.resize(FeatureVector::dimension(categories.size()), 0.0);
    f.values[0] = norm.payment_per_task.scale(to_usd(task.payment_per_task));
    f.values[1] = norm.payment_per_batch.scale(to_usd(task.payment_per_batch));
    f.values[2] = norm.prior_tasks.scale(prior_from_requester);
    f.values[3] = task.acceptance_rate;
    f.values[4] = norm.duration.scale(static_cast<double>(task.declared_duration_s));
    f.values[FeatureVector::kNumericFields + cat_index] = 1.0;

    const std::size_t type_base = FeatureVector::kNumericFields + categories.size();
    switch (task.task_type) {
        case TaskType::Regular: f.values[type_base + 0] = 1.0; break;
        case TaskType::Training: f.values[type_base + 1] = 1.0; break;
        case TaskType::Exam: f.values[type_base + 2] = 1.0; break;
    }
    return f;
}

FeatureVector encode_features(const Task& task,
                              std::span<const InteractionRecord> worker_history,
                              const TaskIndex& tasks, RangeNormalizer& norm,
                              const CategorySet& categories) {
    return encode_features(task, prior_tasks_from_requester(task, worker_history, tasks),
                           norm, categories);
}

}  // namespace tempora
