#include <doctest.h>

#include "tempora/offline_eval.hpp"
#include "tempora/simulator.hpp"

using namespace tempora;

namespace {

SyntheticStreamConfig tiny_synthetic(std::uint64_t seed) {
    SyntheticStreamConfig c;
    c.workers = 3;
    c.interactions_per_worker = 60;
    c.categories = 5;
    c.drift_every = 30;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("synthetic streams are deterministic and well-formed") {
    const auto a = make_synthetic_streams(tiny_synthetic(4));
    const auto b = make_synthetic_streams(tiny_synthetic(4));
    REQUIRE(a.streams.size() == 3);
    for (std::size_t w = 0; w < a.streams.size(); ++w) {
        REQUIRE(a.streams[w].records.size() == 60);
        for (std::size_t i = 0; i < 60; ++i) {
            const auto& ra = a.streams[w].records[i];
            const auto& rb = b.streams[w].records[i];
            CHECK(ra.task_id == rb.task_id);
            CHECK(ra.outcome == rb.outcome);
            CHECK(ra.timestamp == rb.timestamp);
            if (i > 0) {
                CHECK(ra.timestamp > a.streams[w].records[i - 1].timestamp);
            }
            CHECK(a.tasks.find(ra.task_id) != nullptr);
        }
    }
}

TEST_CASE("variant evaluation produces scores in range for every variant") {
    const auto data = make_synthetic_streams(tiny_synthetic(6));
    OfflineEvalConfig config;
    config.k_list = {3};
    config.train.epochs = 40;
    const auto scores = evaluate_variants(data.streams, data.tasks, data.categories,
                                          config, kAllVariants);
    REQUIRE(scores.size() == 4);
    for (const auto& vs : scores) {
        REQUIRE_FALSE(vs.per_worker_ap.empty());
        REQUIRE(vs.mean_ap.count(3));
        CHECK(vs.mean_ap.at(3) >= 0.0);
        CHECK(vs.mean_ap.at(3) <= 1.0);
        CHECK(vs.median_ap.at(3) >= 0.0);
        CHECK(vs.median_ap.at(3) <= 1.0);
    }
}

TEST_CASE("variant evaluation is deterministic") {
    const auto data = make_synthetic_streams(tiny_synthetic(8));
    OfflineEvalConfig config;
    config.k_list = {3, 5};
    config.train.epochs = 40;
    const RecommenderVariant variants[] = {RecommenderVariant::Model,
                                           RecommenderVariant::Popularity};
    const auto s1 =
        evaluate_variants(data.streams, data.tasks, data.categories, config, variants);
    const auto s2 =
        evaluate_variants(data.streams, data.tasks, data.categories, config, variants);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].mean_ap == s2[i].mean_ap);
        CHECK(s1[i].per_worker_ap == s2[i].per_worker_ap);
    }
}

TEST_CASE("variant names round-trip") {
    for (const auto v : kAllVariants) {
        CHECK(variant_from_string(to_string(v)) == v);
    }
    CHECK_THROWS_AS(variant_from_string("bogus"), ParseError);
}

TEST_CASE("records are reconstructed from telemetry with final outcomes") {
    TaskIndex tasks;
    for (const char* id : {"T1", "T2", "T3", "T4"}) {
        Task t;
        t.task_id = id;
        t.requester_id = "R1";
        t.category = "survey";
        t.payment_per_task = usd(0.1);
        t.payment_per_batch = usd(0.2);
        t.declared_duration_s = 60;
        t.posted_at = 0;
        tasks.add(t);
    }
    auto ev = [](TimestampMs ts, EventKind kind, const std::string& task) {
        TelemetryEvent e;
        e.ts = ts;
        e.worker_id = "W1";
        e.event = kind;
        e.context = Location::OnPlatform;
        e.payload["task_id"] = task;
        return e;
    };
    std::vector<TelemetryEvent> events = {
        // T1: completed
        ev(1000, EventKind::TaskPreview, "T1"),
        ev(2000, EventKind::TaskStart, "T1"),
        ev(62000, EventKind::TaskComplete, "T1"),
        // T2: started then never completed
        ev(70000, EventKind::TaskStart, "T2"),
        // T3: previewed only
        ev(80000, EventKind::TaskPreview, "T3"),
        // T4: shown but never touched
        ev(90000, EventKind::NotificationShown, "T4"),
    };
    const auto records = records_from_telemetry(events, tasks);
    REQUIRE(records.size() == 4);
    std::map<std::string, Outcome> by_task;
    for (const auto& r : records) by_task[r.task_id] = r.outcome;
    CHECK(by_task["T1"] == Outcome::Completed);
    CHECK(by_task["T2"] == Outcome::StartedAbandoned);
    CHECK(by_task["T3"] == Outcome::Previewed);
    CHECK(by_task["T4"] == Outcome::Ignored);
    // completed record carries the observed duration
    for (const auto& r : records) {
        if (r.task_id == "T1") {
            REQUIRE(r.observed_duration_s.has_value());
            CHECK(*r.observed_duration_s == 60);
        }
    }
}

TEST_CASE("reconstruction matches the simulator's own records") {
    auto config = [] {
        ExperimentConfig c;
        c.seed = 41;
        c.population = {1, 2, 1, 1};
        c.stages = {2, 2};
        c.market.category_count = 4;
        c.train.epochs = 30;
        return c;
    }();
    const auto result = run_experiment(config);
    for (const auto& wr : result.workers) {
        const auto rebuilt = records_from_telemetry(wr.events, result.task_index);
        // Every completed/previewed record the simulator kept must be
        // recoverable from telemetry with the same outcome.
        std::map<std::string, Outcome> rebuilt_by_task;
        for (const auto& r : rebuilt) rebuilt_by_task[r.task_id] = r.outcome;
        for (const auto& r : wr.records) {
            REQUIRE(rebuilt_by_task.count(r.task_id));
            CHECK(rebuilt_by_task[r.task_id] == r.outcome);
        }
        CHECK(rebuilt.size() == wr.records.size());
    }
}
