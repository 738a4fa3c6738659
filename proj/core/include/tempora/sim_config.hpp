// Experiment configuration: population counts per condition, stage lengths,
// market and behavior parameters, stipend schedule and engine knobs. Loadable
// from TOML; serializes to a canonical form whose FNV-1a hash identifies the
// run in its manifest.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tempora/engagement.hpp"
#include "tempora/network.hpp"
#include "tempora/policy.hpp"
#include "tempora/toml_lite.hpp"
#include "tempora/types.hpp"

namespace tempora {

// Simulation epoch: 2024-01-01T00:00:00Z. Schedules are UTC-day relative.
constexpr TimestampMs kSimEpochMs = 1704067200000LL;

struct PopulationConfig {
    int m_cf = 12;
    int p_cf = 17;
    int m_s = 11;
    int p_s = 15;

    int monochronic() const { return m_cf + m_s; }
    int polychronic() const { return p_cf + p_s; }
    int total() const { return monochronic() + polychronic(); }
};

struct StageConfig {
    int pre_test_days = 7;
    int test_days = 7;
};

struct MarketConfig {
    double task_arrival_rate_per_hour = 12.0;
    int category_count = 8;
    int requester_count = 20;
    double payment_median_usd = 0.20;
    double payment_sigma_log = 0.8;
    int batch_max_multiple = 8;
    double duration_median_s = 360.0;
    double duration_sigma_log = 0.7;
    double feed_window_hours = 24.0;
    double training_fraction = 0.07;
    double exam_fraction = 0.03;
};

struct ChronotypeBehaviorConfig {
    double bursts_per_day = 1.0;          // active periods per day
    double burst_minutes_mean = 240.0;    // length of each active period
    double dwell_minutes_mean = 12.0;     // stay per location inside a burst
    double onplatform_share = 1.0;        // location mix inside a burst
    double browse_wake_minutes = 4.0;     // think time between browse actions
    double preview_prob = 0.45;           // browse action previews a task
    double base_start_prob = 0.55;        // previewed preferred task is started
    double nonpreferred_start_factor = 0.12;
    double abandon_prob = 0.15;
    double offplatform_accept_prob = 0.6; // notification click damping off-platform
    double notif_click_pref = 0.75;
    double notif_click_nonpref = 0.12;
    int max_concurrent_tasks = 1;
    int preferred_category_count = 2;
    double speed_sigma_log = 0.25;
};

struct StipendConfig {
    MicroUsd install = 2 * kMicroPerUsd;
    MicroUsd per_day = kMicroPerUsd / 2;
    MicroUsd post_survey = kMicroPerUsd;
};

struct EngineConfig {
    bool enabled = true;
    std::size_t notification_limit = 2;
    double scan_interval_minutes = 35.0;
    int poly_hourly_cap = 0;  // 0 = unlimited
    bool queue_busy = true;
    std::size_t queue_depth = 5;
};

struct DropoutConfig {
    bool enabled = false;
    double hazard_per_day = 0.05;  // applies during the pre-test stage only
};

struct ExperimentConfig {
    std::uint64_t seed = 42;
    PopulationConfig population;
    StageConfig stages;
    MarketConfig market;
    ChronotypeBehaviorConfig monochronic = monochronic_defaults();
    ChronotypeBehaviorConfig polychronic = polychronic_defaults();
    StipendConfig stipend;
    EngineConfig engine;
    TrainConfig train;
    RetrainPolicy retrain_policy = RetrainPolicy::immediate();
    DropoutConfig dropout;

    static ChronotypeBehaviorConfig monochronic_defaults();
    static ChronotypeBehaviorConfig polychronic_defaults();

    void validate() const;  // throws ConfigError

    TimestampMs pre_test_start_ms() const { return kSimEpochMs; }
    TimestampMs test_start_ms() const {
        return kSimEpochMs + static_cast<TimestampMs>(stages.pre_test_days) * 86400000;
    }
    TimestampMs end_ms() const {
        return test_start_ms() + static_cast<TimestampMs>(stages.test_days) * 86400000;
    }

    // Deterministic full serialization; hashing it identifies the run.
    std::string canonical_toml() const;
    std::uint64_t config_hash() const;

    static ExperimentConfig from_toml(const toml::Table& table);
    static ExperimentConfig load(const std::filesystem::path& path);
};

}  // namespace tempora
