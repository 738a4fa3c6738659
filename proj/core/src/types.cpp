#include "tempora/types.hpp"

#include <algorithm>
#include <cmath>

namespace tempora {

std::string to_string(TaskType t) {
    switch (t) {
        case TaskType::Regular: return "regular";
        case TaskType::Training: return "training";
        case TaskType::Exam: return "exam";
    }
    return "regular";
}

TaskType task_type_from_string(const std::string& s) {
    if (s == "regular") return TaskType::Regular;
    if (s == "training") return TaskType::Training;
    if (s == "exam") return TaskType::Exam;
    throw ParseError("unknown task type: '" + s + "'");
}

void Task::validate() const {
    if (payment_per_task < 0) throw ConfigError("payment_per_task < 0: " + task_id);
    if (payment_per_batch < payment_per_task) {
        throw ConfigError("payment_per_batch < payment_per_task: " + task_id);
    }
    if (acceptance_rate < 0.0 || acceptance_rate > 1.0) {
        throw ConfigError("acceptance_rate outside [0,1]: " + task_id);
    }
    if (declared_duration_s <= 0) {
        throw ConfigError("declared_duration must be positive: " + task_id);
    }
}

void Schedule::validate() const {
    std::vector<Window> sorted = daily_windows;
    std::sort(sorted.begin(), sorted.end(),
              [](const Window& a, const Window& b) { return a.start_min < b.start_min; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].start_min >= sorted[i].end_min) {
            throw ConfigError("schedule window with start >= end");
        }
        if (i > 0 && sorted[i].start_min < sorted[i - 1].end_min) {
            throw ConfigError("overlapping schedule windows");
        }
    }
}

std::string to_string(Condition c) {
    switch (c) {
        case Condition::M_CF: return "M/CF";
        case Condition::P_CF: return "P/CF";
        case Condition::M_S: return "M/S";
        case Condition::P_S: return "P/S";
    }
    return "M/S";
}

Condition condition_from_string(const std::string& s) {
    if (s == "M/CF") return Condition::M_CF;
    if (s == "P/CF") return Condition::P_CF;
    if (s == "M/S") return Condition::M_S;
    if (s == "P/S") return Condition::P_S;
    throw ParseError("unknown condition: '" + s + "'");
}

Chronotype chronotype_of(Condition c) {
    return (c == Condition::M_CF || c == Condition::M_S) ? Chronotype::Monochronic
                                                         : Chronotype::Polychronic;
}

bool uses_engine(Condition c) {
    return c == Condition::M_CF || c == Condition::P_CF;
}

void Worker::validate() const {
    if (chronotype_of(condition) != profile.classification) {
        throw ConfigError("worker " + worker_id +
                          " condition does not match chronotype classification");
    }
    schedule.validate();
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Ignored: return "ignored";
        case Outcome::Previewed: return "previewed";
        case Outcome::StartedAbandoned: return "started_abandoned";
        case Outcome::Completed: return "completed";
    }
    return "ignored";
}

Outcome outcome_from_string(const std::string& s) {
    if (s == "ignored") return Outcome::Ignored;
    if (s == "previewed") return Outcome::Previewed;
    if (s == "started_abandoned") return Outcome::StartedAbandoned;
    if (s == "completed") return Outcome::Completed;
    throw ParseError("unknown outcome: '" + s + "'");
}

double label_for(Outcome o) {
    switch (o) {
        case Outcome::Completed: return 1.0;
        case Outcome::StartedAbandoned: return 0.5;
        default: return 0.0;
    }
}

InteractionRecord InteractionRecord::make(std::string worker_id,
                                          std::string task_id, Outcome outcome,
                                          TimestampMs ts,
                                          std::optional<std::int64_t> duration_s) {
    InteractionRecord r;
    r.worker_id = std::move(worker_id);
    r.task_id = std::move(task_id);
    r.outcome = outcome;
    r.label = label_for(outcome);
    r.timestamp = ts;
    if (outcome == Outcome::Completed) {
        r.observed_duration_s = duration_s.value_or(0);
    }
    return r;
}

double lower_median(std::vector<double> sample) {
    if (sample.empty()) throw EmptySample("median of empty sample");
    const std::size_t k = (sample.size() - 1) / 2;
    std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(k),
                     sample.end());
    return sample[k];
}

SummaryStats summarize(std::span<const double> sample) {
    if (sample.empty()) throw EmptySample("summarize of empty sample");
    SummaryStats s;
    s.n = sample.size();
    double sum = 0.0;
    for (double v : sample) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : sample) ss += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    s.median = lower_median(std::vector<double>(sample.begin(), sample.end()));
    return s;
}

}  // namespace tempora
