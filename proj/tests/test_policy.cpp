#include <doctest.h>

#include "tempora/policy.hpp"
#include "tempora/rng.hpp"
#include "tempora/sim_config.hpp"

using namespace tempora;

namespace {

Task make_task(const std::string& id, const std::string& cat, const std::string& req,
               std::int64_t declared = 600, TimestampMs posted = 0) {
    Task t;
    t.task_id = id;
    t.requester_id = req;
    t.category = cat;
    t.payment_per_task = usd(0.2);
    t.payment_per_batch = usd(0.4);
    t.declared_duration_s = declared;
    t.acceptance_rate = 0.9;
    t.posted_at = posted;
    return t;
}

ChronotypeProfile mono_profile() {
    ChronotypeProfile p;
    p.classification = Chronotype::Monochronic;
    p.score.value = 2.1;
    return p;
}

ChronotypeProfile poly_profile() {
    ChronotypeProfile p;
    p.classification = Chronotype::Polychronic;
    p.score.value = 4.2;
    return p;
}

// 09:00-17:00 window
Schedule day_schedule() {
    Schedule s;
    s.daily_windows = {{540, 1020}};
    return s;
}

TimestampMs at_clock(int hour, int minute = 0) {
    return kSimEpochMs + (hour * 3600 + minute * 60) * 1000LL;
}

}  // namespace

TEST_CASE("duration prediction fallback chain") {
    TaskIndex index;
    const Task target = make_task("T1", "survey", "R1");
    index.add(target);

    SUBCASE("no history falls back to the declared duration") {
        CHECK(predict_duration(target, {}, index) == 600);
    }

    SUBCASE("single exact observation wins") {
        Task same = make_task("T2", "survey", "R1");
        index.add(same);
        std::vector<InteractionRecord> history = {
            InteractionRecord::make("W1", "T2", Outcome::Completed, 1, 600)};
        CHECK(predict_duration(target, history, index) == 600);
    }

    SUBCASE("category median when the requester is unseen") {
        Task c1 = make_task("T2", "survey", "R2");
        Task c2 = make_task("T3", "survey", "R3");
        Task c3 = make_task("T4", "survey", "R4");
        index.add(c1);
        index.add(c2);
        index.add(c3);
        std::vector<InteractionRecord> history = {
            InteractionRecord::make("W1", "T2", Outcome::Completed, 1, 300),
            InteractionRecord::make("W1", "T3", Outcome::Completed, 2, 600),
            InteractionRecord::make("W2", "T4", Outcome::Completed, 3, 1200),
        };
        CHECK(predict_duration(target, history, index) == 600);
    }

    SUBCASE("global median when the category is unseen") {
        Task g1 = make_task("T5", "ocr_check", "R9");
        index.add(g1);
        std::vector<InteractionRecord> history = {
            InteractionRecord::make("W1", "T5", Outcome::Completed, 1, 450)};
        CHECK(predict_duration(target, history, index) == 450);
    }
}

TEST_CASE("schedule fit boundary behavior") {
    const Schedule s = day_schedule();
    // 16:00, one hour left in the window
    CHECK(schedule_fit(1800, s, at_clock(16)));
    CHECK_FALSE(schedule_fit(5400, s, at_clock(16)));
    CHECK(schedule_fit(3600, s, at_clock(16)));  // exactly equal: >= rule
    // outside every window
    CHECK_FALSE(schedule_fit(60, s, at_clock(18)));
    CHECK_FALSE(schedule_fit(60, s, at_clock(8, 59)));
}

TEST_CASE("worker context invariant") {
    WorkerContext ctx;
    ctx.location = Location::OtherSite;
    ctx.activity = Activity::JustCompletedTask;
    CHECK_THROWS_AS(ctx.validate(), ConfigError);
    ctx.location = Location::OnPlatform;
    CHECK_NOTHROW(ctx.validate());
}

TEST_CASE("notification constructors enforce the payload invariant") {
    const Notification offer = Notification::task_offer(make_task("T1", "a", "R1"), 5);
    CHECK(offer.task.has_value());
    CHECK_THROWS_AS(Notification::message(NotificationKind::TaskOffer, "m", 5),
                    ConfigError);
    const Notification msg =
        Notification::message(NotificationKind::SocialUpdate, "m1", 5);
    CHECK_FALSE(msg.task.has_value());
}

TEST_CASE("monochronic gate matrix") {
    const Schedule s = day_schedule();
    const Notification offer =
        Notification::task_offer(make_task("T1", "a", "R1"), at_clock(10));
    WorkerContext ctx{Location::OnPlatform, Activity::Idle, at_clock(10)};

    SUBCASE("off platform suppresses the offer") {
        ctx.location = Location::OtherSite;
        const auto d = evaluate_gate(mono_profile(), ctx, offer, s, 600);
        CHECK_FALSE(d.delivered());
        CHECK(d.reason == GateReason::OffPlatform);
    }
    SUBCASE("social content is suppressed everywhere, even after finishing work") {
        ctx.activity = Activity::JustCompletedTask;
        const auto social =
            Notification::message(NotificationKind::SocialUpdate, "m", ctx.now);
        const auto d = evaluate_gate(mono_profile(), ctx, social, s, 600);
        CHECK(d.reason == GateReason::SocialSuppressed);
        const auto requester =
            Notification::message(NotificationKind::RequesterMessage, "m", ctx.now);
        CHECK(evaluate_gate(mono_profile(), ctx, requester, s, 600).reason ==
              GateReason::SocialSuppressed);
    }
    SUBCASE("busy on a task suppresses") {
        ctx.activity = Activity::WorkingOnTask;
        const auto d = evaluate_gate(mono_profile(), ctx, offer, s, 600);
        CHECK(d.reason == GateReason::BusyOnTask);
    }
    SUBCASE("schedule overrun suppresses") {
        ctx.now = at_clock(16, 55);  // five minutes left
        const auto d = evaluate_gate(mono_profile(), ctx, offer, s, 600);
        CHECK(d.reason == GateReason::ScheduleOverrun);
    }
    SUBCASE("otherwise the offer is delivered") {
        const auto d = evaluate_gate(mono_profile(), ctx, offer, s, 600);
        CHECK(d.delivered());
        CHECK(d.reason == GateReason::Allowed);
    }
}

TEST_CASE("polychronic gate delivers everything") {
    const Schedule s = day_schedule();
    for (Location loc : {Location::OnPlatform, Location::OtherSite, Location::Desktop}) {
        for (Activity act :
             {Activity::Idle, Activity::WorkingOnTask, Activity::JustCompletedTask}) {
            if (act == Activity::JustCompletedTask && loc != Location::OnPlatform) {
                continue;
            }
            WorkerContext ctx{loc, act, at_clock(23)};  // outside the schedule
            const Notification offer =
                Notification::task_offer(make_task("T1", "a", "R1"), ctx.now);
            CHECK(evaluate_gate(poly_profile(), ctx, offer, s, 999999).delivered());
            const auto social =
                Notification::message(NotificationKind::CoworkerMessage, "m", ctx.now);
            CHECK(evaluate_gate(poly_profile(), ctx, social, s, 0).delivered());
        }
    }
}

TEST_CASE("gate decisions are pure") {
    const Schedule s = day_schedule();
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        WorkerContext ctx;
        ctx.location = static_cast<Location>(rng.uniform_int(0, 2));
        ctx.activity = static_cast<Activity>(rng.uniform_int(0, 2));
        if (ctx.activity == Activity::JustCompletedTask) {
            ctx.location = Location::OnPlatform;
        }
        ctx.now = at_clock(static_cast<int>(rng.uniform_int(0, 23)));
        const auto profile = rng.bernoulli(0.5) ? mono_profile() : poly_profile();
        const auto notif =
            rng.bernoulli(0.5)
                ? Notification::task_offer(make_task("T1", "a", "R1"), ctx.now)
                : Notification::message(NotificationKind::SocialUpdate, "m", ctx.now);
        const std::int64_t predicted = rng.uniform_int(10, 7200);
        const auto d1 = evaluate_gate(profile, ctx, notif, s, predicted);
        const auto d2 = evaluate_gate(profile, ctx, notif, s, predicted);
        CHECK(d1.verdict == d2.verdict);
        CHECK(d1.reason == d2.reason);
    }
}

namespace {

std::vector<ScoredTask> scored(std::vector<Task> tasks) {
    std::vector<ScoredTask> out;
    double score = 1.0;
    for (auto& t : tasks) {
        out.push_back({std::move(t), score});
        score -= 0.05;
    }
    return out;
}

}  // namespace

TEST_CASE("selection for a polychronic worker keeps rank order up to the limit") {
    DurationIndex durations;
    WorkerContext ctx{Location::Desktop, Activity::Idle, at_clock(22)};
    std::vector<Task> tasks;
    for (int i = 0; i < 5; ++i) {
        tasks.push_back(make_task("T" + std::to_string(i), "a", "R1", 600, i));
    }
    const auto result = select_notifications(scored(tasks), poly_profile(), ctx,
                                             day_schedule(), durations, 3);
    REQUIRE(result.delivered.size() == 3);
    CHECK(result.delivered[0].task->task_id == "T0");
    CHECK(result.delivered[1].task->task_id == "T1");
    CHECK(result.delivered[2].task->task_id == "T2");
    CHECK(result.suppressed.empty());
}

TEST_CASE("selection for an off-platform monochronic worker is empty") {
    DurationIndex durations;
    WorkerContext ctx{Location::OtherSite, Activity::Idle, at_clock(10)};
    std::vector<Task> tasks = {make_task("T1", "a", "R1"), make_task("T2", "a", "R1")};
    const auto result = select_notifications(scored(tasks), mono_profile(), ctx,
                                             day_schedule(), durations, 3);
    CHECK(result.delivered.empty());
    CHECK(result.suppressed.size() == 2);
    for (const auto& [notif, reason] : result.suppressed) {
        CHECK(reason == GateReason::OffPlatform);
    }
}

TEST_CASE("near the schedule end fitting tasks are preferred and overruns dropped") {
    DurationIndex durations;
    // global median duration 600s; remaining time 15 min < 2x median
    for (int i = 0; i < 3; ++i) durations.add("a", "R1", 600);
    durations.add("b", "R2", 3600);  // the long task's own observed duration
    WorkerContext ctx{Location::OnPlatform, Activity::Idle, at_clock(16, 45)};

    // ranked order: the long task first, the fitting one second
    std::vector<Task> tasks = {make_task("LONG", "b", "R2", 3600),
                               make_task("FITS", "c", "R3", 600)};
    const auto result = select_notifications(scored(tasks), mono_profile(), ctx,
                                             day_schedule(), durations, 3);
    REQUIRE(result.delivered.size() == 1);
    CHECK(result.delivered[0].task->task_id == "FITS");
    REQUIRE(result.suppressed.size() == 1);
    CHECK(result.suppressed[0].second == GateReason::ScheduleOverrun);
}

TEST_CASE("selection respects the delivery limit") {
    DurationIndex durations;
    WorkerContext ctx{Location::OnPlatform, Activity::Idle, at_clock(9, 30)};
    std::vector<Task> tasks;
    for (int i = 0; i < 8; ++i) {
        tasks.push_back(make_task("T" + std::to_string(i), "a", "R1", 60, i));
    }
    const auto result = select_notifications(scored(tasks), mono_profile(), ctx,
                                             day_schedule(), durations, 2);
    CHECK(result.delivered.size() == 2);
}
