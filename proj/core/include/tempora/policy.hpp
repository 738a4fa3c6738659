// Chronemic notification gate: decides whether a candidate notification
// reaches a worker given their chronotype, context and schedule, plus the
// task-duration predictor and schedule-fit check the monochronic gate needs.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tempora/engagement.hpp"
#include "tempora/types.hpp"

namespace tempora {

enum class Location { OnPlatform, OtherSite, Desktop };
enum class Activity { Idle, WorkingOnTask, JustCompletedTask };

std::string to_string(Location l);
Location location_from_string(const std::string& s);

struct WorkerContext {
    Location location = Location::OnPlatform;
    Activity activity = Activity::Idle;
    TimestampMs now = 0;

    void validate() const;  // JustCompletedTask implies OnPlatform
};

enum class NotificationKind { TaskOffer, SocialUpdate, RequesterMessage, CoworkerMessage };

std::string to_string(NotificationKind k);

struct Notification {
    NotificationKind kind = NotificationKind::TaskOffer;
    std::optional<Task> task;     // present iff TaskOffer
    std::string message_ref;      // present otherwise
    TimestampMs created_at = 0;

    static Notification task_offer(Task task, TimestampMs ts);
    static Notification message(NotificationKind kind, std::string ref, TimestampMs ts);
};

enum class GateVerdict { Deliver, Suppress };
enum class GateReason { OffPlatform, BusyOnTask, ScheduleOverrun, SocialSuppressed, Allowed };

std::string to_string(GateReason r);

struct GateDecision {
    GateVerdict verdict = GateVerdict::Suppress;
    GateReason reason = GateReason::OffPlatform;

    static GateDecision deliver() { return {GateVerdict::Deliver, GateReason::Allowed}; }
    static GateDecision suppress(GateReason r) { return {GateVerdict::Suppress, r}; }
    bool delivered() const { return verdict == GateVerdict::Deliver; }
};

// Observed completion durations keyed by (category, requester) with the
// fallback chain (category, requester) -> category -> global -> declared.
class DurationIndex {
  public:
    void add(const std::string& category, const std::string& requester,
             std::int64_t seconds);

    // Lower-median of the most specific non-empty bucket.
    std::int64_t predict(const Task& task) const;

    std::optional<std::int64_t> global_median() const;
    std::size_t observation_count() const { return global_.size(); }

    static DurationIndex from_history(std::span<const InteractionRecord> completed,
                                      const TaskIndex& tasks);

  private:
    std::map<std::pair<std::string, std::string>, std::vector<double>> by_cat_req_;
    std::map<std::string, std::vector<double>> by_cat_;
    std::vector<double> global_;
};

std::int64_t predict_duration(const Task& task,
                              std::span<const InteractionRecord> completed,
                              const TaskIndex& tasks);

// True iff `now` falls inside a schedule window whose remaining span can
// absorb the predicted duration (>= rule; timestamps are UTC-day relative).
bool schedule_fit(std::int64_t predicted_s, const Schedule& schedule, TimestampMs now);

// Pure chronemic gate. Monochronic workers only receive task offers, on the
// platform, while not working, and only when the task fits the remaining
// schedule; polychronic workers receive everything everywhere.
GateDecision evaluate_gate(const ChronotypeProfile& profile, const WorkerContext& ctx,
                           const Notification& notif, const Schedule& schedule,
                           std::int64_t predicted_s);

struct SelectionResult {
    std::vector<Notification> delivered;
    std::vector<std::pair<Notification, GateReason>> suppressed;
};

// Walks ranked tasks, gating each offer; for monochronic workers close to a
// window's end (remaining < 2x global median duration) schedule-fitting tasks
// are moved ahead of non-fitting ones before gating. At most `limit` offers
// are delivered.
SelectionResult select_notifications(std::span<const ScoredTask> ranked,
                                     const ChronotypeProfile& profile,
                                     const WorkerContext& ctx, const Schedule& schedule,
                                     const DurationIndex& durations, std::size_t limit);

}  // namespace tempora
