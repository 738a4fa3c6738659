// Offline replay evaluation of the recommender variants over labeled
// interaction streams: sliding candidate windows are ranked by each variant
// and scored with AP@k against the worker's actual engagements. Also hosts
// the drifting-preference synthetic population used to exercise the
// retraining ablation.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tempora/engagement.hpp"
#include "tempora/metrics.hpp"
#include "tempora/telemetry.hpp"
#include "tempora/types.hpp"

namespace tempora {

enum class RecommenderVariant { Model, EveryThreeDays, NeverRetrain, Popularity };

std::string to_string(RecommenderVariant v);
RecommenderVariant variant_from_string(const std::string& s);

inline constexpr RecommenderVariant kAllVariants[] = {
    RecommenderVariant::Model,
    RecommenderVariant::EveryThreeDays,
    RecommenderVariant::NeverRetrain,
    RecommenderVariant::Popularity,
};

struct EvalStream {
    std::string worker_id;
    Condition condition = Condition::M_S;
    std::vector<InteractionRecord> records;  // time-ordered, one per task
};

struct OfflineEvalConfig {
    std::vector<std::size_t> k_list = {3, 5};
    std::size_t warmup = kColdStartMinRecords;
    std::size_t window = 10;  // candidate set drawn from the next records
    TrainConfig train;
    std::uint64_t seed_salt = 0x0ff1u;
};

struct VariantScores {
    RecommenderVariant variant = RecommenderVariant::Model;
    // worker -> k -> mean AP@k over that worker's evaluation points
    std::map<std::string, std::map<std::size_t, double>> per_worker_ap;
    std::map<std::size_t, double> mean_ap;    // MAP@k over workers
    std::map<std::size_t, double> median_ap;  // lower median over workers
};

std::vector<VariantScores> evaluate_variants(std::span<const EvalStream> streams,
                                             const TaskIndex& tasks,
                                             const CategorySet& categories,
                                             const OfflineEvalConfig& config,
                                             std::span<const RecommenderVariant> variants);

// Collapses a telemetry stream back into final per-task interaction records
// (completed > started-abandoned > previewed > shown-but-ignored).
std::vector<InteractionRecord> records_from_telemetry(
    std::span<const TelemetryEvent> events, const TaskIndex& tasks);

// Synthetic preference-structured population: every worker carries a stable
// personal preferred-category set on top of two globally popular categories.
// Personal preference is the signal only the trained models can pick up; the
// volume and recency of each variant's training data separates them.
struct SyntheticStreamConfig {
    int workers = 12;
    int interactions_per_worker = 200;
    int categories = 8;
    int requesters = 12;
    int preferred_categories = 2;
    // The earliest records mimic bootstrap data gathered before the worker's
    // real preferences show: at this record index the preference set is
    // re-drawn once and then stays stable. 0 disables the shift.
    int initial_shift_at = 12;
    int drift_every = 0;  // records between further re-draws; 0 = stable
    double preferred_engage = 0.85;
    double popular_engage = 0.36;
    double base_engage = 0.04;
    double interaction_gap_hours = 1.0;
    std::uint64_t seed = 1;
};

struct SyntheticData {
    CategorySet categories;
    TaskIndex tasks;
    std::vector<EvalStream> streams;
};

SyntheticData make_synthetic_streams(const SyntheticStreamConfig& config);

}  // namespace tempora
