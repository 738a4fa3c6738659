#include "tempora/policy.hpp"

#include <algorithm>

namespace tempora {

std::string to_string(Location l) {
    switch (l) {
        case Location::OnPlatform: return "on_platform";
        case Location::OtherSite: return "other_site";
        case Location::Desktop: return "desktop";
    }
    return "on_platform";
}

Location location_from_string(const std::string& s) {
    if (s == "on_platform") return Location::OnPlatform;
    if (s == "other_site") return Location::OtherSite;
    if (s == "desktop") return Location::Desktop;
    throw ParseError("unknown location: '" + s + "'");
}

void WorkerContext::validate() const {
    if (activity == Activity::JustCompletedTask && location != Location::OnPlatform) {
        throw ConfigError("JustCompletedTask requires OnPlatform");
    }
}

std::string to_string(NotificationKind k) {
    switch (k) {
        case NotificationKind::TaskOffer: return "task_offer";
        case NotificationKind::SocialUpdate: return "social_update";
        case NotificationKind::RequesterMessage: return "requester_message";
        case NotificationKind::CoworkerMessage: return "coworker_message";
    }
    return "task_offer";
}

Notification Notification::task_offer(Task task, TimestampMs ts) {
    Notification n;
    n.kind = NotificationKind::TaskOffer;
    n.task = std::move(task);
    n.created_at = ts;
    return n;
}

Notification Notification::message(NotificationKind kind, std::string ref,
                                   TimestampMs ts) {
    if (kind == NotificationKind::TaskOffer) {
        throw ConfigError("task offers carry a task, not a message ref");
    }
    Notification n;
    n.kind = kind;
    n.message_ref = std::move(ref);
    n.created_at = ts;
    return n;
}

std::string to_string(GateReason r) {
    switch (r) {
        case GateReason::OffPlatform: return "off_platform";
        case GateReason::BusyOnTask: return "busy_on_task";
        case GateReason::ScheduleOverrun: return "schedule_overrun";
        case GateReason::SocialSuppressed: return "social_suppressed";
        case GateReason::Allowed: return "allowed";
    }
    return "allowed";
}

void DurationIndex::add(const std::string& category, const std::string& requester,
                        std::int64_t seconds) {
    const double s = static_cast<double>(seconds);
    by_cat_req_[{category, requester}].push_back(s);
    by_cat_[category].push_back(s);
    global_.push_back(s);
}

std::int64_t DurationIndex::predict(const Task& task) const {
    const auto cr = by_cat_req_.find({task.category, task.requester_id});
    if (cr != by_cat_req_.end() && !cr->second.empty()) {
        return static_cast<std::int64_t>(lower_median(cr->second));
    }
    const auto c = by_cat_.find(task.category);
    if (c != by_cat_.end() && !c->second.empty()) {
        return static_cast<std::int64_t>(lower_median(c->second));
    }
    if (!global_.empty()) return static_cast<std::int64_t>(lower_median(global_));
    return task.declared_duration_s;
}

std::optional<std::int64_t> DurationIndex::global_median() const {
    if (global_.empty()) return std::nullopt;
    return static_cast<std::int64_t>(lower_median(global_));
}

DurationIndex DurationIndex::from_history(std::span<const InteractionRecord> completed,
                                          const TaskIndex& tasks) {
    DurationIndex index;
    for (const auto& r : completed) {
        if (r.outcome != Outcome::Completed || !r.observed_duration_s) continue;
        if (const Task* t = tasks.find(r.task_id)) {
            index.add(t->category, t->requester_id, *r.observed_duration_s);
        }
    }
    return index;
}

std::int64_t predict_duration(const Task& task,
                              std::span<const InteractionRecord> completed,
                              const TaskIndex& tasks) {
    return DurationIndex::from_history(completed, tasks).predict(task);
}

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t second_of_day(TimestampMs ts) {
    std::int64_t s = (ts / 1000) % kSecondsPerDay;
    if (s < 0) s += kSecondsPerDay;
    return s;
}

// Remaining seconds in the window containing `now`, or nullopt.
std::optional<std::int64_t> remaining_in_window(const Schedule& schedule,
                                                TimestampMs now) {
    const std::int64_t s = second_of_day(now);
    for (const auto& w : schedule.daily_windows) {
        const std::int64_t start = static_cast<std::int64_t>(w.start_min) * 60;
        const std::int64_t end = static_cast<std::int64_t>(w.end_min) * 60;
        if (s >= start && s < end) return end - s;
    }
    return std::nullopt;
}

}  // namespace

bool schedule_fit(std::int64_t predicted_s, const Schedule& schedule, TimestampMs now) {
    const auto remaining = remaining_in_window(schedule, now);
    return remaining.has_value() && *remaining >= predicted_s;
}

GateDecision evaluate_gate(const ChronotypeProfile& profile, const WorkerContext& ctx,
                           const Notification& notif, const Schedule& schedule,
                           std::int64_t predicted_s) {
    if (profile.classification == Chronotype::Polychronic) {
        return GateDecision::deliver();
    }
    if (notif.kind != NotificationKind::TaskOffer) {
        return GateDecision::suppress(GateReason::SocialSuppressed);
    }
    if (ctx.location != Location::OnPlatform) {
        return GateDecision::suppress(GateReason::OffPlatform);
    }
    if (ctx.activity == Activity::WorkingOnTask) {
        return GateDecision::suppress(GateReason::BusyOnTask);
    }
    if (!schedule_fit(predicted_s, schedule, ctx.now)) {
        return GateDecision::suppress(GateReason::ScheduleOverrun);
    }
    return GateDecision::deliver();
}

SelectionResult select_notifications(std::span<const ScoredTask> ranked,
                                     const ChronotypeProfile& profile,
                                     const WorkerContext& ctx, const Schedule& schedule,
                                     const DurationIndex& durations, std::size_t limit) {
    std::vector<const ScoredTask*> order;
    order.reserve(ranked.size());
    for (const auto& st : ranked) order.push_back(&st);

    if (profile.classification == Chronotype::Monochronic) {
        const auto remaining = remaining_in_window(schedule, ctx.now);
        const auto median = durations.global_median();
        const bool near_end =
            remaining && median && *remaining < 2 * *median;
        if (near_end) {
            std::stable_partition(order.begin(), order.end(), [&](const ScoredTask* st) {
                return schedule_fit(durations.predict(st->task), schedule, ctx.now);
            });
        }
    }

    SelectionResult result;
    for (const ScoredTask* st : order) {
        if (result.delivered.size() >= limit) break;
        Notification n = Notification::task_offer(st->task, ctx.now);
        const GateDecision d =
            evaluate_gate(profile, ctx, n, schedule, durations.predict(st->task));
        if (d.delivered()) {
            result.delivered.push_back(std::move(n));
        } else {
            result.suppressed.emplace_back(std::move(n), d.reason);
        }
    }
    return result;
}

}  // namespace tempora
