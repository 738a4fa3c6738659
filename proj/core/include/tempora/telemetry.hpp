// Bit-exact activity log: one JSON object per line with fixed key order
// (ts, worker_id, event, context, payload). Payload values are integers or
// strings only, so parse -> re-serialize reproduces files byte for byte.
// Currency amounts in payloads are integer micro-dollars.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempora/policy.hpp"
#include "tempora/types.hpp"

namespace tempora {

enum class EventKind {
    Click,
    Scroll,
    Key,
    PageTransition,
    TaskPreview,
    TaskStart,
    TaskComplete,
    Payment,
    NotificationShown,
    NotificationSuppressed,
    NotificationClicked,
    Stipend,
};

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct TelemetryEvent {
    TimestampMs ts = 0;
    std::string worker_id;
    EventKind event = EventKind::Click;
    Location context = Location::OnPlatform;
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();

    MicroUsd amount() const;  // payload["amount"], 0 when absent
    std::string task_id() const;
};

std::string serialize_event(const TelemetryEvent& e);
// line_no is only used for error messages.
TelemetryEvent parse_event(const std::string& line, std::size_t line_no = 0);

void write_jsonl(const std::filesystem::path& path,
                 std::span<const TelemetryEvent> events);
std::vector<TelemetryEvent> read_jsonl(const std::filesystem::path& path);

// Throws OrderError on a time-unsorted stream, ParseError on a task_complete
// without a prior task_start for the same worker/task.
void validate_stream(std::span<const TelemetryEvent> events);

struct Session {
    std::string worker_id;
    TimestampMs start_ts = 0;
    TimestampMs end_ts = 0;
    std::size_t first = 0;  // [first, last] indices into the input stream
    std::size_t last = 0;

    std::int64_t span_seconds() const { return (end_ts - start_ts) / 1000; }
};

constexpr std::int64_t kDefaultIdleGapSeconds = 600;

// Splits one worker's sorted stream wherever the inter-event gap exceeds
// idle_gap. Throws OrderError on unsorted input.
std::vector<Session> sessionize(std::span<const TelemetryEvent> events,
                                std::int64_t idle_gap_s = kDefaultIdleGapSeconds);

// Median (lower) of per-session hourly wages over sessions holding at least
// one payment event. Stipend events are dropped before sessionization, so
// they can neither earn nor glue sessions together. Paid sessions get a 60s
// active-time floor. Throws NoWageData when no session holds a payment.
double compute_hourly_wage(std::span<const TelemetryEvent> events,
                           std::int64_t idle_gap_s = kDefaultIdleGapSeconds);

// 100 * (test - pre) / pre. Throws UndefinedBaseline when pre <= 0.
double wage_change_pct(double pre_median, double test_median);

struct WageSummaryRow {
    std::string worker_id;
    std::string condition;
    std::string stage;
    double median_hourly_wage = 0.0;
    std::int64_t tasks_completed = 0;
};

extern const char* const kWageCsvHeader;

std::string wage_summary_csv(std::span<const WageSummaryRow> rows);

// Core-type serialization (used by the run ledger and worker manifests).
nlohmann::ordered_json task_to_json(const Task& t);
Task task_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json record_to_json(const InteractionRecord& r);
InteractionRecord record_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json worker_to_json(const Worker& w);
Worker worker_from_json(const nlohmann::ordered_json& j);

}  // namespace tempora
