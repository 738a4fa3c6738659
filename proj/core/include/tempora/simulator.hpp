// Deterministic discrete-event marketplace with chronemics-parameterized
// synthetic workers, reproducing the four-condition pre-test/test structure.
// One run is strictly single-threaded; identical (config, seed) produces
// identical results byte for byte.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempora/engagement.hpp"
#include "tempora/sim_config.hpp"
#include "tempora/telemetry.hpp"
#include "tempora/types.hpp"

namespace tempora {

enum class Stage { PreTest, Test };

std::string to_string(Stage s);

struct WorkerResult {
    Worker worker;
    std::vector<TelemetryEvent> events;        // time-sorted
    std::vector<InteractionRecord> records;    // one final outcome per task
    std::optional<EngagementModel> model;      // engine-condition workers only
    bool dropped_out = false;
    TimestampMs dropout_ts = 0;
};

struct ExperimentResult {
    ExperimentConfig config;
    CategorySet categories;
    std::vector<Task> task_ledger;  // posting order
    TaskIndex task_index;
    std::vector<WorkerResult> workers;

    Stage stage_of(TimestampMs ts) const;
    std::pair<TimestampMs, TimestampMs> stage_window(Stage s) const;
};

std::vector<std::string> category_names(int count);

// Deterministic population: MPI responses are drawn per chronotype and
// rescored through the scoring module until they classify as intended.
std::vector<Worker> generate_population(const ExperimentConfig& config);

// Seeded random assignment within each chronotype. Throws ConfigError when
// the chronotype totals cannot fill the per-condition counts.
std::map<std::string, Condition> assign_conditions(std::span<const Worker> workers,
                                                   const PopulationConfig& population,
                                                   std::uint64_t seed);

ExperimentResult run_experiment(const ExperimentConfig& config);

// Ground-truth engagement probability the synthetic worker acts from; the
// recommender has to rediscover this from interaction records.
double start_probability(const Worker& worker, const Task& task,
                         const ChronotypeBehaviorConfig& behavior);

}  // namespace tempora
