#include <benchmark/benchmark.h>

#include "tempora/rng.hpp"
#include "tempora/telemetry.hpp"

using namespace tempora;

namespace {

std::vector<TelemetryEvent> make_stream(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TelemetryEvent> events;
    TimestampMs ts = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ts += rng.uniform_int(500, 400000);
        TelemetryEvent e;
        e.ts = ts;
        e.worker_id = "W001";
        e.event = rng.bernoulli(0.2) ? EventKind::Payment : EventKind::Click;
        e.context = Location::OnPlatform;
        if (e.event == EventKind::Payment) {
            e.payload["task_id"] = "T" + std::to_string(i);
            e.payload["amount"] = rng.uniform_int(10000, 500000);
        }
        events.push_back(std::move(e));
    }
    return events;
}

void BM_SerializeEvent(benchmark::State& state) {
    const auto events = make_stream(1, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(serialize_event(events[0]));
    }
}
BENCHMARK(BM_SerializeEvent);

void BM_ParseEvent(benchmark::State& state) {
    const auto line = serialize_event(make_stream(1, 2)[0]);
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_event(line));
    }
}
BENCHMARK(BM_ParseEvent);

void BM_Sessionize(benchmark::State& state) {
    const auto events = make_stream(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sessionize(events).size());
    }
}
BENCHMARK(BM_Sessionize)->Arg(1000)->Arg(10000);

void BM_HourlyWage(benchmark::State& state) {
    const auto events = make_stream(5000, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_hourly_wage(events));
    }
}
BENCHMARK(BM_HourlyWage);

}  // namespace
