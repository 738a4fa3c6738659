// Shared marketplace vocabulary. All types here are immutable values and
// safe to copy between threads. Currency is held in integer micro-dollars
// so wage accumulation stays exact.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempora/chronotype.hpp"
#include "tempora/errors.hpp"

namespace tempora {

using TimestampMs = std::int64_t;  // ms since epoch
using MicroUsd = std::int64_t;     // 1 USD == 1'000'000

constexpr MicroUsd kMicroPerUsd = 1'000'000;

inline double to_usd(MicroUsd m) { return static_cast<double>(m) / kMicroPerUsd; }
inline MicroUsd usd(double dollars) {
    return static_cast<MicroUsd>(dollars * kMicroPerUsd + (dollars >= 0 ? 0.5 : -0.5));
}

enum class TaskType { Regular, Training, Exam };

std::string to_string(TaskType t);
TaskType task_type_from_string(const std::string& s);

struct Task {
    std::string task_id;
    std::string requester_id;
    std::string category;          // member of the run's closed category set
    TaskType task_type = TaskType::Regular;
    MicroUsd payment_per_task = 0;
    MicroUsd payment_per_batch = 0;
    std::int64_t declared_duration_s = 1;
    double acceptance_rate = 1.0;  // in [0, 1]
    TimestampMs posted_at = 0;

    void validate() const;  // throws ConfigError on invariant breach
};

struct Schedule {
    struct Window {
        int start_min = 0;  // minutes from midnight
        int end_min = 0;
    };
    std::vector<Window> daily_windows;  // non-overlapping, start < end

    void validate() const;
};

enum class Condition { M_CF, P_CF, M_S, P_S };

std::string to_string(Condition c);
Condition condition_from_string(const std::string& s);
Chronotype chronotype_of(Condition c);
bool uses_engine(Condition c);

// Simulator-facing behavior knobs carried on each worker.
struct BehaviorParams {
    double context_switch_rate_per_hour = 4.0;
    double offplatform_accept_prob = 0.6;
    int max_concurrent_tasks = 1;
    double speed_factor = 1.0;       // actual duration = declared * factor * noise
    double base_start_prob = 0.5;    // chance a previewed, liked task is started
    std::vector<std::string> preferred_categories;
};

struct Worker {
    std::string worker_id;
    ChronotypeProfile profile;
    Schedule schedule;
    Condition condition = Condition::M_S;
    BehaviorParams behavior;

    void validate() const;  // condition chronotype must match profile
};

enum class Outcome { Ignored, Previewed, StartedAbandoned, Completed };

std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

// Engagement target used for model training: completed 1.0,
// started-then-abandoned 0.5, shown-or-previewed-only 0.0.
double label_for(Outcome o);

struct InteractionRecord {
    std::string worker_id;
    std::string task_id;
    Outcome outcome = Outcome::Ignored;
    double label = 0.0;
    std::optional<std::int64_t> observed_duration_s;  // present iff completed
    TimestampMs timestamp = 0;

    static InteractionRecord make(std::string worker_id, std::string task_id,
                                  Outcome outcome, TimestampMs ts,
                                  std::optional<std::int64_t> duration_s = {});
};

struct SummaryStats {
    double median = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample (n-1); defined as 0 for n == 1
    std::size_t n = 0;
};

// Lower median for even n. Throws EmptySample.
double lower_median(std::vector<double> sample);

SummaryStats summarize(std::span<const double> sample);

}  // namespace tempora
