#include <doctest.h>

#include <algorithm>

#include "tempora/rng.hpp"
#include "tempora/telemetry.hpp"
#include "tempora/types.hpp"

using namespace tempora;

TEST_CASE("summarize single element") {
    const double v[] = {5.0};
    const SummaryStats s = summarize(v);
    CHECK(s.median == 5.0);
    CHECK(s.mean == 5.0);
    CHECK(s.std_dev == 0.0);
    CHECK(s.n == 1);
}

TEST_CASE("summarize even count uses the lower median") {
    const double v[] = {1.0, 2.0, 3.0, 4.0};
    const SummaryStats s = summarize(v);
    CHECK(s.median == 2.0);
    CHECK(s.mean == doctest::Approx(2.5));
}

TEST_CASE("summarize odd count") {
    const double v[] = {0.48, 1.05, 1.40};
    const SummaryStats s = summarize(v);
    CHECK(s.median == doctest::Approx(1.05));
    CHECK(s.mean == doctest::Approx(0.976666666666667));
}

TEST_CASE("summarize rejects empty input") {
    CHECK_THROWS_AS(summarize({}), EmptySample);
}

TEST_CASE("summarize is permutation invariant") {
    Rng rng(99);
    std::vector<double> sample;
    for (int i = 0; i < 37; ++i) sample.push_back(rng.uniform(-5.0, 5.0));
    const SummaryStats base = summarize(sample);
    for (int round = 0; round < 20; ++round) {
        rng.shuffle(sample);
        const SummaryStats s = summarize(sample);
        CHECK(s.median == base.median);
        CHECK(s.mean == doctest::Approx(base.mean).epsilon(1e-12));
        CHECK(s.std_dev == doctest::Approx(base.std_dev).epsilon(1e-12));
    }
}

TEST_CASE("task invariants") {
    Task t;
    t.task_id = "T1";
    t.requester_id = "R1";
    t.category = "survey";
    t.payment_per_task = usd(0.10);
    t.payment_per_batch = usd(0.05);  // below per-task
    t.declared_duration_s = 60;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.payment_per_batch = usd(0.50);
    CHECK_NOTHROW(t.validate());
    t.acceptance_rate = 1.2;
    CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("schedule windows must be ordered and disjoint") {
    Schedule s;
    s.daily_windows = {{600, 540}};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.daily_windows = {{540, 660}, {600, 720}};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.daily_windows = {{540, 660}, {700, 800}};
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("interaction labels follow the outcome") {
    CHECK(label_for(Outcome::Completed) == 1.0);
    CHECK(label_for(Outcome::StartedAbandoned) == 0.5);
    CHECK(label_for(Outcome::Previewed) == 0.0);
    CHECK(label_for(Outcome::Ignored) == 0.0);

    const auto r = InteractionRecord::make("W1", "T1", Outcome::Completed, 123, 600);
    CHECK(r.label == 1.0);
    CHECK(r.observed_duration_s.has_value());
    const auto r2 = InteractionRecord::make("W1", "T2", Outcome::Previewed, 124);
    CHECK_FALSE(r2.observed_duration_s.has_value());
}

TEST_CASE("worker condition must match chronotype") {
    Worker w;
    w.worker_id = "W1";
    w.profile.classification = Chronotype::Monochronic;
    w.condition = Condition::P_CF;
    w.schedule.daily_windows = {{540, 900}};
    CHECK_THROWS_AS(w.validate(), ConfigError);
    w.condition = Condition::M_CF;
    CHECK_NOTHROW(w.validate());
}

TEST_CASE("core types round-trip through json") {
    Task t;
    t.task_id = "T00042";
    t.requester_id = "R007";
    t.category = "moderation";
    t.task_type = TaskType::Exam;
    t.payment_per_task = usd(0.37);
    t.payment_per_batch = usd(1.11);
    t.declared_duration_s = 321;
    t.acceptance_rate = 0.625;
    t.posted_at = kMicroPerUsd + 17;  // arbitrary
    const Task t2 = task_from_json(task_to_json(t));
    CHECK(t2.task_id == t.task_id);
    CHECK(t2.requester_id == t.requester_id);
    CHECK(t2.category == t.category);
    CHECK(t2.task_type == t.task_type);
    CHECK(t2.payment_per_task == t.payment_per_task);
    CHECK(t2.payment_per_batch == t.payment_per_batch);
    CHECK(t2.declared_duration_s == t.declared_duration_s);
    CHECK(t2.acceptance_rate == t.acceptance_rate);
    CHECK(t2.posted_at == t.posted_at);

    const auto r = InteractionRecord::make("W9", "T00042", Outcome::Completed,
                                           998877, 640);
    const auto r2 = record_from_json(record_to_json(r));
    CHECK(r2.worker_id == r.worker_id);
    CHECK(r2.task_id == r.task_id);
    CHECK(r2.outcome == r.outcome);
    CHECK(r2.label == r.label);
    CHECK(r2.observed_duration_s == r.observed_duration_s);
    CHECK(r2.timestamp == r.timestamp);

    Worker w;
    w.worker_id = "W010";
    w.profile.classification = Chronotype::Polychronic;
    w.profile.score.value = 3.9286;
    w.condition = Condition::P_S;
    w.schedule.daily_windows = {{480, 1380}};
    w.behavior.context_switch_rate_per_hour = 6.5;
    w.behavior.offplatform_accept_prob = 0.6;
    w.behavior.max_concurrent_tasks = 3;
    w.behavior.speed_factor = 1.07;
    w.behavior.base_start_prob = 0.51;
    w.behavior.preferred_categories = {"survey", "translation"};
    const Worker w2 = worker_from_json(worker_to_json(w));
    CHECK(w2.worker_id == w.worker_id);
    CHECK(w2.profile.classification == w.profile.classification);
    CHECK(w2.profile.score.value == w.profile.score.value);
    CHECK(w2.condition == w.condition);
    CHECK(w2.schedule.daily_windows.size() == 1);
    CHECK(w2.behavior.preferred_categories == w.behavior.preferred_categories);
    CHECK(w2.behavior.speed_factor == w.behavior.speed_factor);
}

TEST_CASE("currency conversion is exact for cents") {
    CHECK(usd(0.01) == 10000);
    CHECK(usd(2.00) == 2000000);
    CHECK(to_usd(500000) == doctest::Approx(0.5));
}
