#include "tempora/telemetry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tempora {

using nlohmann::ordered_json;

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::Click: return "click";
        case EventKind::Scroll: return "scroll";
        case EventKind::Key: return "key";
        case EventKind::PageTransition: return "page_transition";
        case EventKind::TaskPreview: return "task_preview";
        case EventKind::TaskStart: return "task_start";
        case EventKind::TaskComplete: return "task_complete";
        case EventKind::Payment: return "payment";
        case EventKind::NotificationShown: return "notification_shown";
        case EventKind::NotificationSuppressed: return "notification_suppressed";
        case EventKind::NotificationClicked: return "notification_clicked";
        case EventKind::Stipend: return "stipend";
    }
    return "click";
}

EventKind event_kind_from_string(const std::string& s) {
    static const std::map<std::string, EventKind> kMap = {
        {"click", EventKind::Click},
        {"scroll", EventKind::Scroll},
        {"key", EventKind::Key},
        {"page_transition", EventKind::PageTransition},
        {"task_preview", EventKind::TaskPreview},
        {"task_start", EventKind::TaskStart},
        {"task_complete", EventKind::TaskComplete},
        {"payment", EventKind::Payment},
        {"notification_shown", EventKind::NotificationShown},
        {"notification_suppressed", EventKind::NotificationSuppressed},
        {"notification_clicked", EventKind::NotificationClicked},
        {"stipend", EventKind::Stipend},
    };
    const auto it = kMap.find(s);
    if (it == kMap.end()) throw ParseError("unknown event kind: '" + s + "'");
    return it->second;
}

MicroUsd TelemetryEvent::amount() const {
    const auto it = payload.find("amount");
    if (it == payload.end()) return 0;
    return it->get<std::int64_t>();
}

std::string TelemetryEvent::task_id() const {
    const auto it = payload.find("task_id");
    if (it == payload.end()) return {};
    return it->get<std::string>();
}

std::string serialize_event(const TelemetryEvent& e) {
    ordered_json j;
    j["ts"] = e.ts;
    j["worker_id"] = e.worker_id;
    j["event"] = to_string(e.event);
    j["context"] = to_string(e.context);
    j["payload"] = e.payload;
    return j.dump();
}

TelemetryEvent parse_event(const std::string& line, std::size_t line_no) {
    const std::string where =
        line_no ? " (line " + std::to_string(line_no) + ")" : std::string();
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed telemetry line" + where + ": " + e.what());
    }
    for (const char* key : {"ts", "worker_id", "event", "context", "payload"}) {
        if (!j.contains(key)) {
            throw ParseError(std::string("telemetry line missing '") + key + "'" + where);
        }
    }
    TelemetryEvent e;
    try {
        e.ts = j["ts"].get<std::int64_t>();
        e.worker_id = j["worker_id"].get<std::string>();
        e.event = event_kind_from_string(j["event"].get<std::string>());
        e.context = location_from_string(j["context"].get<std::string>());
        if (!j["payload"].is_object()) throw ParseError("payload must be an object");
        e.payload = j["payload"];
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError("bad telemetry field" + where + ": " + ex.what());
    } catch (const ParseError& ex) {
        throw ParseError(std::string(ex.what()) + where);
    }
    return e;
}

void write_jsonl(const std::filesystem::path& path,
                 std::span<const TelemetryEvent> events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (const auto& e : events) out << serialize_event(e) << '\n';
}

std::vector<TelemetryEvent> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::vector<TelemetryEvent> events;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        events.push_back(parse_event(line, line_no));
    }
    return events;
}

void validate_stream(std::span<const TelemetryEvent> events) {
    std::map<std::string, TimestampMs> last_ts;
    std::set<std::pair<std::string, std::string>> started;
    for (const auto& e : events) {
        const auto it = last_ts.find(e.worker_id);
        if (it != last_ts.end() && e.ts < it->second) {
            throw OrderError("worker " + e.worker_id + " stream not sorted at ts " +
                             std::to_string(e.ts));
        }
        last_ts[e.worker_id] = e.ts;
        if (e.event == EventKind::TaskStart) {
            started.insert({e.worker_id, e.task_id()});
        } else if (e.event == EventKind::TaskComplete) {
            if (!started.count({e.worker_id, e.task_id()})) {
                throw ParseError("task_complete without prior task_start: " +
                                 e.worker_id + "/" + e.task_id());
            }
        }
        if ((e.event == EventKind::Payment || e.event == EventKind::Stipend) &&
            e.amount() < 0) {
            throw ParseError("negative amount for worker " + e.worker_id);
        }
    }
}

std::vector<Session> sessionize(std::span<const TelemetryEvent> events,
                                std::int64_t idle_gap_s) {
    std::vector<Session> sessions;
    if (events.empty()) return sessions;

    const std::int64_t gap_ms = idle_gap_s * 1000;
    Session current{events[0].worker_id, events[0].ts, events[0].ts, 0, 0};
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].ts < events[i - 1].ts) {
            throw OrderError("sessionize: stream not sorted at index " +
                             std::to_string(i));
        }
        if (events[i].ts - events[i - 1].ts > gap_ms) {
            sessions.push_back(current);
            current = Session{events[i].worker_id, events[i].ts, events[i].ts, i, i};
        } else {
            current.end_ts = events[i].ts;
            current.last = i;
        }
    }
    sessions.push_back(current);
    return sessions;
}

double compute_hourly_wage(std::span<const TelemetryEvent> events,
                           std::int64_t idle_gap_s) {
    // Stipends are remuneration for participation, not labor; drop them
    // before sessionization so they cannot bridge or pay sessions.
    std::vector<TelemetryEvent> work;
    work.reserve(events.size());
    for (const auto& e : events) {
        if (e.event != EventKind::Stipend) work.push_back(e);
    }

    const auto sessions = sessionize(work, idle_gap_s);
    std::vector<double> wages;
    for (const auto& s : sessions) {
        MicroUsd earned = 0;
        bool has_payment = false;
        for (std::size_t i = s.first; i <= s.last && i < work.size(); ++i) {
            if (work[i].event == EventKind::Payment) {
                earned += work[i].amount();
                has_payment = true;
            }
        }
        if (!has_payment) continue;
        const double active_s =
            std::max<double>(static_cast<double>(s.span_seconds()), 60.0);
        wages.push_back(to_usd(earned) / (active_s / 3600.0));
    }
    if (wages.empty()) throw NoWageData("no sessions with payments");
    return lower_median(std::move(wages));
}

double wage_change_pct(double pre_median, double test_median) {
    if (pre_median <= 0.0) {
        throw UndefinedBaseline("pre-test median must be positive, got " +
                                std::to_string(pre_median));
    }
    return 100.0 * (test_median - pre_median) / pre_median;
}

const char* const kWageCsvHeader =
    "worker_id,condition,stage,median_hourly_wage,tasks_completed";

std::string wage_summary_csv(std::span<const WageSummaryRow> rows) {
    std::string out = kWageCsvHeader;
    out += '\n';
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.median_hourly_wage);
        out += r.worker_id + "," + r.condition + "," + r.stage + "," + buf + "," +
               std::to_string(r.tasks_completed) + "\n";
    }
    return out;
}

ordered_json task_to_json(const Task& t) {
    ordered_json j;
    j["task_id"] = t.task_id;
    j["requester_id"] = t.requester_id;
    j["category"] = t.category;
    j["task_type"] = to_string(t.task_type);
    j["payment_per_task"] = t.payment_per_task;
    j["payment_per_batch"] = t.payment_per_batch;
    j["declared_duration_s"] = t.declared_duration_s;
    j["acceptance_rate"] = t.acceptance_rate;
    j["posted_at"] = t.posted_at;
    return j;
}

Task task_from_json(const ordered_json& j) {
    Task t;
    t.task_id = j.at("task_id").get<std::string>();
    t.requester_id = j.at("requester_id").get<std::string>();
    t.category = j.at("category").get<std::string>();
    t.task_type = task_type_from_string(j.at("task_type").get<std::string>());
    t.payment_per_task = j.at("payment_per_task").get<std::int64_t>();
    t.payment_per_batch = j.at("payment_per_batch").get<std::int64_t>();
    t.declared_duration_s = j.at("declared_duration_s").get<std::int64_t>();
    t.acceptance_rate = j.at("acceptance_rate").get<double>();
    t.posted_at = j.at("posted_at").get<std::int64_t>();
    return t;
}

ordered_json record_to_json(const InteractionRecord& r) {
    ordered_json j;
    j["worker_id"] = r.worker_id;
    j["task_id"] = r.task_id;
    j["outcome"] = to_string(r.outcome);
    j["label"] = r.label;
    if (r.observed_duration_s) j["observed_duration_s"] = *r.observed_duration_s;
    j["timestamp"] = r.timestamp;
    return j;
}

InteractionRecord record_from_json(const ordered_json& j) {
    std::optional<std::int64_t> dur;
    if (j.contains("observed_duration_s")) {
        dur = j.at("observed_duration_s").get<std::int64_t>();
    }
    return InteractionRecord::make(
        j.at("worker_id").get<std::string>(), j.at("task_id").get<std::string>(),
        outcome_from_string(j.at("outcome").get<std::string>()),
        j.at("timestamp").get<std::int64_t>(), dur);
}

ordered_json worker_to_json(const Worker& w) {
    ordered_json j;
    j["worker_id"] = w.worker_id;
    j["chronotype"] = to_string(w.profile.classification);
    j["mpi_score"] = w.profile.score.value;
    j["condition"] = to_string(w.condition);
    ordered_json windows = ordered_json::array();
    for (const auto& win : w.schedule.daily_windows) {
        windows.push_back(ordered_json{{"start_min", win.start_min},
                                       {"end_min", win.end_min}});
    }
    j["schedule"] = windows;
    ordered_json b;
    b["context_switch_rate_per_hour"] = w.behavior.context_switch_rate_per_hour;
    b["offplatform_accept_prob"] = w.behavior.offplatform_accept_prob;
    b["max_concurrent_tasks"] = w.behavior.max_concurrent_tasks;
    b["speed_factor"] = w.behavior.speed_factor;
    b["base_start_prob"] = w.behavior.base_start_prob;
    b["preferred_categories"] = w.behavior.preferred_categories;
    j["behavior"] = b;
    return j;
}

Worker worker_from_json(const ordered_json& j) {
    Worker w;
    w.worker_id = j.at("worker_id").get<std::string>();
    w.profile.score.value = j.at("mpi_score").get<double>();
    w.profile.classification = j.at("chronotype").get<std::string>() == "polychronic"
                                   ? Chronotype::Polychronic
                                   : Chronotype::Monochronic;
    w.condition = condition_from_string(j.at("condition").get<std::string>());
    for (const auto& win : j.at("schedule")) {
        w.schedule.daily_windows.push_back(
            {win.at("start_min").get<int>(), win.at("end_min").get<int>()});
    }
    const auto& b = j.at("behavior");
    w.behavior.context_switch_rate_per_hour =
        b.at("context_switch_rate_per_hour").get<double>();
    w.behavior.offplatform_accept_prob = b.at("offplatform_accept_prob").get<double>();
    w.behavior.max_concurrent_tasks = b.at("max_concurrent_tasks").get<int>();
    w.behavior.speed_factor = b.at("speed_factor").get<double>();
    w.behavior.base_start_prob = b.at("base_start_prob").get<double>();
    w.behavior.preferred_categories =
        b.at("preferred_categories").get<std::vector<std::string>>();
    return w;
}

}  // namespace tempora
