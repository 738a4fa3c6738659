// Per-worker engagement regressor with continuous-retraining policies and the
// completion-count popularity baseline. A model owns its feature normalizer,
// training set and optimizer state. Every train() call re-initializes the
// weights from the model's seed and fits full-batch, so the fitted weights
// are a pure function of (seed, training set) regardless of retrain history.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tempora/features.hpp"
#include "tempora/network.hpp"
#include "tempora/types.hpp"

namespace tempora {

struct RetrainPolicy {
    enum class Kind { Immediate, Every, Never };

    Kind kind = Kind::Immediate;
    std::int64_t interval_ms = 0;  // used by Every

    static RetrainPolicy immediate() { return {Kind::Immediate, 0}; }
    static RetrainPolicy every(std::int64_t ms) { return {Kind::Every, ms}; }
    static RetrainPolicy never() { return {Kind::Never, 0}; }

    bool operator==(const RetrainPolicy&) const = default;
};

std::string to_string(const RetrainPolicy& p);
// Accepts "immediate", "never", "every:<days>d" or "every:<ms>ms".
RetrainPolicy retrain_policy_from_string(const std::string& s);

struct ScoredTask {
    Task task;
    double score = 0.0;
};

// Models stay on the popularity baseline until this many labeled records
// exist; 1000-epoch training is degenerate on fewer.
constexpr std::size_t kColdStartMinRecords = 10;

// Hidden width of the engagement regressor.
constexpr std::size_t kEngagementHiddenUnits = 16;

class EngagementModel {
  public:
    EngagementModel() = default;
    EngagementModel(std::string worker_id, CategorySet categories,
                    RetrainPolicy policy, std::uint64_t seed,
                    std::size_t hidden_units = kEngagementHiddenUnits);

    const std::string& worker_id() const { return worker_id_; }
    const CategorySet& categories() const { return categories_; }
    const RetrainPolicy& policy() const { return policy_; }
    bool ready() const { return trained_; }
    std::size_t record_count() const { return batch_.rows(); }
    double final_training_mse() const { return final_mse_; }
    const FeedForwardNet& net() const { return net_; }
    RangeNormalizer& normalizer() { return norm_; }

    // Encodes against this model's running normalizer and requester history.
    FeatureVector encode(const Task& task);

    // Full-batch Adam for config.epochs epochs. Throws ColdStart when the
    // training set is empty.
    void train(const TrainConfig& config);

    // Appends the record and fires retraining per policy. Returns true when
    // a retrain ran. Records below the cold-start threshold never train.
    bool update_on_event(const InteractionRecord& record, const Task& task,
                         TimestampMs now, const TrainConfig& config);

    // First-time training once the cold-start threshold is reached. Runs for
    // every policy (the Never policy trains here and then stays frozen).
    bool maybe_bootstrap(TimestampMs now, const TrainConfig& config);

    double predict(const FeatureVector& features) const;  // throws ColdStart

    // Versioned text snapshot (see docs/formats.md).
    void save(std::ostream& out) const;
    static EngagementModel load(std::istream& in);

    bool operator==(const EngagementModel& other) const;

  private:
    friend std::vector<ScoredTask> rank(EngagementModel&, std::span<const Task>);

    std::string worker_id_;
    CategorySet categories_;
    RetrainPolicy policy_;
    std::uint64_t init_seed_ = 0;
    std::size_t hidden_units_ = kEngagementHiddenUnits;
    FeedForwardNet net_;
    AdamState adam_;
    RangeNormalizer norm_;
    ExampleBatch batch_;
    std::set<std::string> seen_categories_;
    std::map<std::string, std::int64_t> completed_by_requester_;
    std::int64_t appended_since_refresh_ = 0;
    std::int64_t last_retrain_ms_ = 0;
    bool trained_ = false;
    double final_mse_ = 0.0;
};

// Records appended since the last retrain that force a periodic refresh
// under the Immediate policy.
constexpr std::int64_t kImmediateRefreshInterval = 25;

// Scores candidates with the model and sorts descending; ties break toward
// newer posted_at, then lexicographic task_id. Observes all candidates into
// the normalizer before encoding, so the order of `candidates` is irrelevant.
// Throws ColdStart when the model has never been trained.
std::vector<ScoredTask> rank(EngagementModel& model, std::span<const Task> candidates);

class PopularityCounts {
  public:
    void record_completion(const std::string& category);
    std::int64_t count(const std::string& category) const;

    static PopularityCounts from_history(std::span<const InteractionRecord> history,
                                         const TaskIndex& tasks);

  private:
    std::map<std::string, std::int64_t> by_category_;
};

// Candidates sorted by global completed count of their category, descending;
// ties break toward newer posted_at, then lexicographic task_id.
std::vector<ScoredTask> popularity_baseline_rank(std::span<const Task> candidates,
                                                 const PopularityCounts& counts);
std::vector<ScoredTask> popularity_baseline_rank(
    std::span<const Task> candidates, std::span<const InteractionRecord> global_history,
    const TaskIndex& tasks);

}  // namespace tempora
