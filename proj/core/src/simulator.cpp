#include "tempora/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <set>

#include "tempora/chronotype.hpp"
#include "tempora/policy.hpp"
#include "tempora/rng.hpp"

namespace tempora {

std::string to_string(Stage s) { return s == Stage::PreTest ? "pre_test" : "test"; }

Stage ExperimentResult::stage_of(TimestampMs ts) const {
    return ts < config.test_start_ms() ? Stage::PreTest : Stage::Test;
}

std::pair<TimestampMs, TimestampMs> ExperimentResult::stage_window(Stage s) const {
    if (s == Stage::PreTest) return {config.pre_test_start_ms(), config.test_start_ms()};
    return {config.test_start_ms(), config.end_ms()};
}

std::vector<std::string> category_names(int count) {
    static const char* kNames[] = {
        "image_label",   "survey",        "audio_transcribe", "search_eval",
        "data_entry",    "moderation",    "translation",      "video_tag",
        "web_research",  "sentiment",     "ocr_check",        "geo_verify",
    };
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        if (i < static_cast<int>(std::size(kNames))) {
            out.emplace_back(kNames[i]);
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "cat%02d", i);
            out.emplace_back(buf);
        }
    }
    return out;
}

namespace {

// Answer distributions for sampling MPI responses. `high` favors 4-5.
int sample_answer(Rng& rng, bool high) {
    const double u = rng.u01();
    // weights for 1..5
    static const double kHigh[5] = {0.04, 0.08, 0.14, 0.34, 0.40};
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
        acc += high ? kHigh[i] : kHigh[4 - i];
        if (u < acc) return i + 1;
    }
    return high ? 5 : 1;
}

MpiResponse sample_mpi_response(Rng& rng, Chronotype target) {
    MpiResponse r;
    for (int attempt = 0; attempt < 200; ++attempt) {
        for (std::size_t i = 0; i < MpiResponse::kItemCount; ++i) {
            const bool switch_item = is_switch_keyed(i);
            const bool high = (target == Chronotype::Polychronic) == switch_item;
            r.answers[i] = sample_answer(rng, high);
        }
        if (classify(score_mpi(r)).classification == target) break;
    }
    r.attention_checks = {{3, 3}};
    return r;
}

}  // namespace

std::vector<Worker> generate_population(const ExperimentConfig& config) {
    config.validate();
    const auto cats = category_names(config.market.category_count);
    Rng root(config.seed);
    Rng pop_rng = root.fork("population");

    std::vector<Worker> workers;
    const int total = config.population.total();
    const int mono_count = config.population.monochronic();
    for (int i = 0; i < total; ++i) {
        const Chronotype target =
            i < mono_count ? Chronotype::Monochronic : Chronotype::Polychronic;
        char id[16];
        std::snprintf(id, sizeof id, "W%03d", i + 1);
        Worker w;
        w.worker_id = id;
        Rng wr = pop_rng.fork(w.worker_id);

        w.profile = classify(score_mpi(sample_mpi_response(wr, target)));
        if (w.profile.classification != target) {
            throw ConfigError("could not sample an MPI response classifying as " +
                              to_string(target));
        }

        const ChronotypeBehaviorConfig& b = target == Chronotype::Monochronic
                                                ? config.monochronic
                                                : config.polychronic;
        if (target == Chronotype::Monochronic) {
            const int start = 480 + 30 * static_cast<int>(wr.uniform_int(0, 6));
            const int len = 180 + 30 * static_cast<int>(wr.uniform_int(0, 6));
            w.schedule.daily_windows = {{start, std::min(start + len, 1439)}};
        } else {
            w.schedule.daily_windows = {{480, 1380}};
        }

        w.behavior.context_switch_rate_per_hour = 60.0 / b.dwell_minutes_mean;
        w.behavior.offplatform_accept_prob = b.offplatform_accept_prob;
        w.behavior.max_concurrent_tasks = b.max_concurrent_tasks;
        w.behavior.speed_factor = std::clamp(wr.lognormal(0.0, 0.15), 0.7, 1.5);
        w.behavior.base_start_prob =
            std::clamp(b.base_start_prob + wr.uniform(-0.08, 0.08), 0.1, 0.95);
        std::vector<std::string> pool = cats;
        wr.shuffle(pool);
        pool.resize(static_cast<std::size_t>(b.preferred_category_count));
        std::sort(pool.begin(), pool.end());
        w.behavior.preferred_categories = pool;

        workers.push_back(std::move(w));
    }

    const auto condition_map =
        assign_conditions(workers, config.population, config.seed);
    for (auto& w : workers) {
        w.condition = condition_map.at(w.worker_id);
        w.validate();
    }
    return workers;
}

std::map<std::string, Condition> assign_conditions(std::span<const Worker> workers,
                                                   const PopulationConfig& population,
                                                   std::uint64_t seed) {
    std::vector<std::string> mono_ids, poly_ids;
    for (const auto& w : workers) {
        (w.profile.classification == Chronotype::Monochronic ? mono_ids : poly_ids)
            .push_back(w.worker_id);
    }
    if (static_cast<int>(mono_ids.size()) != population.monochronic() ||
        static_cast<int>(poly_ids.size()) != population.polychronic()) {
        throw ConfigError("chronotype counts do not match condition totals");
    }
    Rng rng = Rng(seed).fork("conditions");
    rng.shuffle(mono_ids);
    rng.shuffle(poly_ids);

    std::map<std::string, Condition> out;
    for (std::size_t i = 0; i < mono_ids.size(); ++i) {
        out[mono_ids[i]] = static_cast<int>(i) < population.m_cf ? Condition::M_CF
                                                                 : Condition::M_S;
    }
    for (std::size_t i = 0; i < poly_ids.size(); ++i) {
        out[poly_ids[i]] = static_cast<int>(i) < population.p_cf ? Condition::P_CF
                                                                 : Condition::P_S;
    }
    return out;
}

double start_probability(const Worker& worker, const Task& task,
                         const ChronotypeBehaviorConfig& behavior) {
    const auto& prefs = worker.behavior.preferred_categories;
    const bool preferred =
        std::find(prefs.begin(), prefs.end(), task.category) != prefs.end();
    double p = worker.behavior.base_start_prob *
               (preferred ? 1.0 : behavior.nonpreferred_start_factor);
    p *= 0.8 + 0.4 * task.acceptance_rate;
    return std::clamp(p, 0.0, 0.97);
}

// ===========================================================================
// Event-driven marketplace
// ===========================================================================

namespace {

constexpr TimestampMs kMsPerDay = 86400000;

struct Segment {
    TimestampMs start_ms = 0;
    TimestampMs end_ms = 0;
    Location location = Location::OnPlatform;
};

struct RunningTask {
    std::int64_t id = 0;
    std::size_t ledger_index = 0;
    TimestampMs started_ms = 0;
    TimestampMs finish_ms = 0;
    bool will_complete = true;
};

enum class EvKind : std::uint8_t {
    TaskArrival,
    SegmentStart,
    SegmentEnd,
    BrowseWake,
    ScanWake,
    TaskFinish,
    KeepAlive,
    Stipend,
};

struct Event {
    TimestampMs ms = 0;
    std::uint64_t seq = 0;
    EvKind kind = EvKind::TaskArrival;
    std::int32_t worker = -1;
    std::int64_t a = 0;  // segment index / running-task id / ledger index
    std::int64_t b = 0;  // stipend amount, keepalive task id

    bool operator>(const Event& other) const {
        if (ms != other.ms) return ms > other.ms;
        return seq > other.seq;
    }
};

struct SimWorker {
    Worker info;
    const ChronotypeBehaviorConfig* behavior = nullptr;
    Rng rng{0};
    std::vector<Segment> segments;
    std::int64_t current_segment = -1;  // index into segments, -1 inactive
    std::vector<RunningTask> running;
    std::int64_t next_running_id = 0;
    std::deque<Notification> queued_offers;
    std::set<std::string> interacted;
    std::vector<TelemetryEvent> events;
    std::vector<InteractionRecord> records;
    std::optional<EngagementModel> model;
    bool dropped = false;
    TimestampMs dropped_at = 0;
    int delivered_this_hour = 0;
    TimestampMs hour_anchor = 0;

    bool active_at(TimestampMs ms) const {
        return !dropped_out(ms) && current_segment >= 0;
    }
    bool dropped_out(TimestampMs ms) const { return dropped && ms >= dropped_at; }
    Location location() const {
        return current_segment >= 0
                   ? segments[static_cast<std::size_t>(current_segment)].location
                   : Location::OnPlatform;
    }
};

class Simulation {
  public:
    explicit Simulation(const ExperimentConfig& config)
        : config_(config),
          categories_(category_names(config.market.category_count)),
          root_(config.seed) {}

    ExperimentResult run();

  private:
    void build_market();
    void build_workers();
    void build_segments(SimWorker& w);
    void schedule_stipends();
    void push(TimestampMs ms, EvKind kind, std::int32_t worker, std::int64_t a = 0,
              std::int64_t b = 0);

    void on_task_arrival(const Event& ev);
    void on_segment_start(const Event& ev);
    void on_segment_end(const Event& ev);
    void on_browse_wake(const Event& ev);
    void on_scan_wake(const Event& ev);
    void on_task_finish(const Event& ev);
    void on_keep_alive(const Event& ev);
    void on_stipend(const Event& ev);

    void emit(SimWorker& w, TimestampMs ms, EventKind kind,
              nlohmann::ordered_json payload = nlohmann::ordered_json::object());
    void emit_activity(SimWorker& w, TimestampMs ms);
    void add_record(SimWorker& w, InteractionRecord record, std::size_t ledger_index);
    void start_task(SimWorker& w, TimestampMs ms, std::size_t ledger_index);
    void try_click_offers(SimWorker& w, TimestampMs ms,
                          std::span<const Notification> offers);
    std::vector<Task> feed_candidates(const SimWorker& w, TimestampMs ms,
                                      std::size_t cap) const;
    void deliver_queued(SimWorker& w, TimestampMs ms);
    bool in_test_stage(TimestampMs ms) const {
        return ms >= config_.test_start_ms() && ms < config_.end_ms();
    }

    ExperimentConfig config_;
    CategorySet categories_;
    Rng root_;
    std::vector<Task> ledger_;
    TaskIndex task_index_;
    std::deque<std::size_t> feed_;  // ledger indices currently in the feed
    std::vector<SimWorker> workers_;
    PopularityCounts popularity_;
    DurationIndex durations_;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
    std::uint64_t seq_ = 0;
};

void Simulation::push(TimestampMs ms, EvKind kind, std::int32_t worker,
                      std::int64_t a, std::int64_t b) {
    queue_.push(Event{ms, seq_++, kind, worker, a, b});
}

void Simulation::build_market() {
    Rng market = root_.fork("market");

    // Per-category base popularity, heavier head after a seeded shuffle.
    std::vector<std::size_t> order(categories_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    market.shuffle(order);
    std::vector<double> weight(categories_.size());
    double weight_sum = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        weight[order[pos]] = 1.0 / static_cast<double>(pos + 1);
        weight_sum += weight[order[pos]];
    }

    const double mean_gap_s = 3600.0 / config_.market.task_arrival_rate_per_hour;
    const double mu_pay = std::log(config_.market.payment_median_usd);
    const double mu_dur = std::log(config_.market.duration_median_s);

    TimestampMs t = config_.pre_test_start_ms();
    std::int64_t n = 0;
    while (true) {
        t += static_cast<TimestampMs>(
            std::max(1.0, market.exponential(mean_gap_s)) * 1000.0);
        if (t >= config_.end_ms()) break;

        Task task;
        char id[24];
        std::snprintf(id, sizeof id, "T%05lld", static_cast<long long>(++n));
        task.task_id = id;
        char req[16];
        std::snprintf(req, sizeof req, "R%03d",
                      static_cast<int>(market.uniform_int(1, config_.market.requester_count)));
        task.requester_id = req;

        double u = market.u01() * weight_sum;
        std::size_t cat = 0;
        for (std::size_t i = 0; i < weight.size(); ++i) {
            u -= weight[i];
            if (u <= 0.0) {
                cat = i;
                break;
            }
        }
        task.category = categories_.names()[cat];

        const double tf = market.u01();
        task.task_type = tf < config_.market.exam_fraction ? TaskType::Exam
                         : tf < config_.market.exam_fraction + config_.market.training_fraction
                             ? TaskType::Training
                             : TaskType::Regular;
        const double pay =
            std::clamp(market.lognormal(mu_pay, config_.market.payment_sigma_log),
                       0.01, 4.0);
        task.payment_per_task = usd(pay);
        task.payment_per_batch =
            task.payment_per_task *
            market.uniform_int(1, std::max(1, config_.market.batch_max_multiple));
        task.declared_duration_s = static_cast<std::int64_t>(std::clamp(
            market.lognormal(mu_dur, config_.market.duration_sigma_log), 60.0, 3600.0));
        task.acceptance_rate = 0.5 + 0.5 * market.u01() * market.u01();
        task.posted_at = t;
        task.validate();

        push(t, EvKind::TaskArrival, -1, static_cast<std::int64_t>(ledger_.size()));
        task_index_.add(task);
        ledger_.push_back(std::move(task));
    }
}

void Simulation::build_workers() {
    const auto population = generate_population(config_);
    Rng drop_rng = root_.fork("dropout");
    for (const auto& w : population) {
        SimWorker sw;
        sw.info = w;
        sw.behavior = w.profile.classification == Chronotype::Monochronic
                          ? &config_.monochronic
                          : &config_.polychronic;
        sw.rng = root_.fork("worker:" + w.worker_id);
        if (uses_engine(w.condition)) {
            sw.model.emplace(w.worker_id, categories_, config_.retrain_policy,
                             fnv1a64("model:" + w.worker_id) ^ config_.seed);
        }
        if (config_.dropout.enabled) {
            for (int day = 0; day < config_.stages.pre_test_days; ++day) {
                if (drop_rng.bernoulli(config_.dropout.hazard_per_day)) {
                    sw.dropped = true;
                    sw.dropped_at = config_.pre_test_start_ms() + day * kMsPerDay +
                                    static_cast<TimestampMs>(
                                        drop_rng.uniform(3600.0, 43200.0) * 1000.0);
                    break;
                }
            }
        }
        build_segments(sw);
        workers_.push_back(std::move(sw));
    }
    for (std::size_t wi = 0; wi < workers_.size(); ++wi) {
        for (std::size_t si = 0; si < workers_[wi].segments.size(); ++si) {
            push(workers_[wi].segments[si].start_ms, EvKind::SegmentStart,
                 static_cast<std::int32_t>(wi), static_cast<std::int64_t>(si));
            push(workers_[wi].segments[si].end_ms, EvKind::SegmentEnd,
                 static_cast<std::int32_t>(wi), static_cast<std::int64_t>(si));
        }
    }
}

void Simulation::build_segments(SimWorker& w) {
    const int total_days = config_.stages.pre_test_days + config_.stages.test_days;
    const bool mono = w.info.profile.classification == Chronotype::Monochronic;
    for (int day = 0; day < total_days; ++day) {
        const TimestampMs day_start = config_.pre_test_start_ms() + day * kMsPerDay;
        if (mono) {
            // Long focused platform blocks spanning the schedule window, with
            // the occasional brief off-platform excursion.
            const auto& win = w.info.schedule.daily_windows[0];
            TimestampMs t = day_start + static_cast<TimestampMs>(win.start_min) * 60000;
            const TimestampMs win_end =
                day_start + static_cast<TimestampMs>(win.end_min) * 60000;
            while (t < win_end) {
                Segment s;
                s.start_ms = t;
                if (w.rng.u01() < w.behavior->onplatform_share) {
                    const double dwell_min = std::clamp(
                        w.rng.exponential(w.behavior->dwell_minutes_mean), 10.0, 180.0);
                    s.end_ms = std::min(
                        t + static_cast<TimestampMs>(dwell_min * 60000.0), win_end);
                    s.location = Location::OnPlatform;
                } else {
                    const double dwell_min =
                        std::clamp(w.rng.exponential(5.0), 2.0, 12.0);
                    s.end_ms = std::min(
                        t + static_cast<TimestampMs>(dwell_min * 60000.0), win_end);
                    s.location = Location::OtherSite;
                }
                w.segments.push_back(s);
                t = s.end_ms;
            }
            continue;
        }
        // Polychronic: scattered bursts with location churn inside each.
        const int bursts = std::max(
            1, static_cast<int>(std::lround(w.behavior->bursts_per_day +
                                            w.rng.uniform(-1.2, 1.2))));
        std::vector<TimestampMs> starts;
        for (int burst = 0; burst < bursts; ++burst) {
            starts.push_back(day_start +
                             static_cast<TimestampMs>(w.rng.uniform(8.0, 22.0) *
                                                      3600000.0));
        }
        std::sort(starts.begin(), starts.end());
        TimestampMs cursor = 0;
        for (TimestampMs burst_start : starts) {
            burst_start = std::max(burst_start, cursor);
            const double len_min = std::clamp(
                w.rng.exponential(w.behavior->burst_minutes_mean), 15.0, 110.0);
            const TimestampMs burst_end =
                std::min(burst_start + static_cast<TimestampMs>(len_min * 60000.0),
                         day_start + kMsPerDay - 60000);
            TimestampMs t = burst_start;
            while (t < burst_end) {
                const double dwell_min =
                    std::clamp(w.rng.exponential(w.behavior->dwell_minutes_mean), 2.0, 30.0);
                const TimestampMs seg_end =
                    std::min(t + static_cast<TimestampMs>(dwell_min * 60000.0), burst_end);
                Segment s;
                s.start_ms = t;
                s.end_ms = seg_end;
                if (w.rng.u01() < w.behavior->onplatform_share) {
                    s.location = Location::OnPlatform;
                } else {
                    s.location = w.rng.bernoulli(0.5) ? Location::OtherSite
                                                      : Location::Desktop;
                }
                w.segments.push_back(s);
                t = seg_end;
            }
            cursor = burst_end + 300000;  // 5 min gap before the next burst
        }
    }
}

void Simulation::schedule_stipends() {
    const int total_days = config_.stages.pre_test_days + config_.stages.test_days;
    for (std::size_t wi = 0; wi < workers_.size(); ++wi) {
        const auto widx = static_cast<std::int32_t>(wi);
        push(config_.pre_test_start_ms() + static_cast<TimestampMs>(wi + 1) * 30000,
             EvKind::Stipend, widx, config_.stipend.install);
        for (int day = 0; day < total_days; ++day) {
            push(config_.pre_test_start_ms() + (day + 1) * kMsPerDay - 1000,
                 EvKind::Stipend, widx, config_.stipend.per_day);
        }
        push(config_.end_ms() - 500, EvKind::Stipend, widx, config_.stipend.post_survey);
    }
}

void Simulation::emit(SimWorker& w, TimestampMs ms, EventKind kind,
                      nlohmann::ordered_json payload) {
    TelemetryEvent e;
    e.ts = ms;
    e.worker_id = w.info.worker_id;
    e.event = kind;
    switch (kind) {
        // Task work and payment happen in the platform tab even when the
        // worker's ambient attention is elsewhere.
        case EventKind::TaskPreview:
        case EventKind::TaskStart:
        case EventKind::TaskComplete:
        case EventKind::Payment:
        case EventKind::Stipend:
            e.context = Location::OnPlatform;
            break;
        default:
            e.context = w.location();
    }
    e.payload = std::move(payload);
    w.events.push_back(std::move(e));
}

void Simulation::emit_activity(SimWorker& w, TimestampMs ms) {
    const double u = w.rng.u01();
    const EventKind kind = u < 0.45   ? EventKind::Click
                           : u < 0.75 ? EventKind::Scroll
                           : u < 0.9  ? EventKind::Key
                                      : EventKind::PageTransition;
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();
    if (kind == EventKind::PageTransition) {
        payload["url_class"] = w.location() == Location::OnPlatform ? "platform" : "external";
    }
    emit(w, ms, kind, std::move(payload));
}

void Simulation::add_record(SimWorker& w, InteractionRecord record,
                            std::size_t ledger_index) {
    const Task& task = ledger_[ledger_index];
    const TimestampMs now = record.timestamp;
    w.records.push_back(record);
    if (w.model) {
        w.model->update_on_event(w.records.back(), task, now, config_.train);
        w.model->maybe_bootstrap(now, config_.train);
    }
}

void Simulation::start_task(SimWorker& w, TimestampMs ms, std::size_t ledger_index) {
    const Task& task = ledger_[ledger_index];
    RunningTask rt;
    rt.id = w.next_running_id++;
    rt.ledger_index = ledger_index;
    rt.started_ms = ms;
    const double noise = w.rng.lognormal(0.0, w.behavior->speed_sigma_log);
    const double actual_s =
        std::clamp(static_cast<double>(task.declared_duration_s) *
                       w.info.behavior.speed_factor * noise,
                   30.0, 7200.0);
    rt.finish_ms = ms + static_cast<TimestampMs>(actual_s * 1000.0);
    rt.will_complete = !w.rng.bernoulli(w.behavior->abandon_prob);
    // No events may fall outside the experiment window; a task that cannot
    // finish in time is abandoned just before the end.
    if (rt.finish_ms >= config_.end_ms() - 1000) {
        rt.finish_ms = config_.end_ms() - 2000;
        rt.will_complete = false;
        if (rt.finish_ms <= ms) rt.finish_ms = ms + 1;
    }
    emit(w, ms, EventKind::TaskStart, {{"task_id", task.task_id}});
    const auto wi = static_cast<std::int32_t>(&w - workers_.data());
    push(rt.finish_ms, EvKind::TaskFinish, wi, rt.id);
    // Keep the telemetry stream alive during long tasks.
    for (TimestampMs ka = ms + 90000; ka < rt.finish_ms; ka += 90000) {
        push(ka, EvKind::KeepAlive, wi, rt.id);
    }
    w.running.push_back(rt);
}

std::vector<Task> Simulation::feed_candidates(const SimWorker& w, TimestampMs ms,
                                              std::size_t cap) const {
    std::vector<Task> out;
    for (auto it = feed_.rbegin(); it != feed_.rend() && out.size() < cap; ++it) {
        const Task& t = ledger_[*it];
        if (t.posted_at > ms) continue;
        if (w.interacted.count(t.task_id)) continue;
        bool running = false;
        for (const auto& rt : w.running) {
            if (rt.ledger_index == *it) running = true;
        }
        if (!running) out.push_back(t);
    }
    return out;
}

void Simulation::try_click_offers(SimWorker& w, TimestampMs ms,
                                  std::span<const Notification> offers) {
    for (const auto& offer : offers) {
        const Task& task = *offer.task;
        w.interacted.insert(task.task_id);
        const std::size_t ledger_index =
            static_cast<std::size_t>(std::stoll(task.task_id.substr(1))) - 1;

        const auto& prefs = w.info.behavior.preferred_categories;
        const bool preferred =
            std::find(prefs.begin(), prefs.end(), task.category) != prefs.end();
        double click_p =
            preferred ? w.behavior->notif_click_pref : w.behavior->notif_click_nonpref;
        if (w.location() != Location::OnPlatform) {
            click_p *= w.info.behavior.offplatform_accept_prob;
        }
        const bool capacity =
            static_cast<int>(w.running.size()) < w.info.behavior.max_concurrent_tasks;

        if (capacity && w.rng.bernoulli(click_p)) {
            emit(w, ms, EventKind::NotificationClicked, {{"task_id", task.task_id}});
            emit(w, ms, EventKind::TaskPreview, {{"task_id", task.task_id}});
            const double p_start = std::min(
                0.95, 1.25 * start_probability(w.info, task, *w.behavior));
            if (w.rng.bernoulli(p_start)) {
                start_task(w, ms, ledger_index);
            } else {
                add_record(w,
                           InteractionRecord::make(w.info.worker_id, task.task_id,
                                                   Outcome::Previewed, ms),
                           ledger_index);
            }
        } else {
            add_record(w,
                       InteractionRecord::make(w.info.worker_id, task.task_id,
                                               Outcome::Ignored, ms),
                       ledger_index);
        }
    }
}

void Simulation::on_task_arrival(const Event& ev) {
    const auto idx = static_cast<std::size_t>(ev.a);
    feed_.push_back(idx);
    const TimestampMs horizon =
        ev.ms - static_cast<TimestampMs>(config_.market.feed_window_hours * 3600000.0);
    while (!feed_.empty() && ledger_[feed_.front()].posted_at < horizon) {
        feed_.pop_front();
    }
}

void Simulation::on_segment_start(const Event& ev) {
    SimWorker& w = workers_[static_cast<std::size_t>(ev.worker)];
    if (w.dropped_out(ev.ms)) return;
    w.current_segment = ev.a;
    emit(w, ev.ms, EventKind::PageTransition,
         {{"url_class",
           w.location() == Location::OnPlatform ? "platform" : "external"}});
    const double wake_s = w.rng.exponential(w.behavior->browse_wake_minutes * 30.0);
    push(ev.ms + static_cast<TimestampMs>(std::max(1.0, wake_s) * 1000.0),
         EvKind::BrowseWake, ev.worker, ev.a);
    if (w.model && config_.engine.enabled && in_test_stage(ev.ms)) {
        const double scan_s =
            w.rng.exponential(config_.engine.scan_interval_minutes * 30.0);
        push(ev.ms + static_cast<TimestampMs>(std::max(1.0, scan_s) * 1000.0),
             EvKind::ScanWake, ev.worker, ev.a);
    }
}

void Simulation::on_segment_end(const Event& ev) {
    SimWorker& w = workers_[static_cast<std::size_t>(ev.worker)];
    if (w.current_segment == ev.a) w.current_segment = -1;
}

void Simulation::on_browse_wake(const Event& ev) {
    SimWorker& w = workers_[static_cast<std::size_t>(ev.worker)];
    if (w.dropped_out(ev.ms) || w.current_segment != ev.a) return;

    emit_activity(w, ev.ms);
    if (w.rng.bernoulli(0.5)) emit_activity(w, ev.ms);

    const bool capacity =
        static_cast<int>(w.running.size()) < w.info.behavior.max_concurrent_tasks;
    if (w.location() == Location::OnPlatform && capacity &&
        w.rng.bernoulli(w.behavior->preview_prob)) {
        const auto candidates = feed_candidates(w, ev.ms, 10);
        if (!candidates.empty()) {
            const std::size_t top = w.rng.bernoulli(0.6)
                                        ? std::min<std::size_t>(3, candidates.size())
                                        : candidates.size();
            const auto pick = static_cast<std::size_t>(
                w.rng.uniform_int(0, static_cast<std::int64_t>(top) - 1));
            const Task& task = candidates[pick];
            const std::size_t ledger_index =
                static_cast<std::size_t>(std::stoll(task.task_id.substr(1))) - 1;
            w.interacted.insert(task.task_id);
            emit(w, ev.ms, EventKind::TaskPreview, {{"task_id", task.task_id}});
            if (w.rng.bernoulli(start_probability(w.info, task, *w.behavior))) {
                start_task(w, ev.ms, ledger_index);
            } else {
                add_record(w,
                           InteractionRecord::make(w.info.worker_id, task.task_id,
                                                   Outcome::Previewed, ev.ms),
                           ledger_index);
            }
        }
    }

    const double wake_s = w.rng.exponential(w.behavior->browse_wake_minutes * 60.0);
    push(ev.ms + static_cast<TimestampMs>(std::max(1.0, wake_s) * 1000.0),
         EvKind::BrowseWake, ev.worker, ev.a);
}

void Simulation::on_scan_wake(const Event& ev) {
    SimWorker& w = workers_[static_cast<std::size_t>(ev.worker)];
    if (w.dropped_out(ev.ms) || w.current_segment != ev.a || !w.model ||
        !config_.engine.enabled || !in_test_stage(ev.ms)) {
        return;
    }

    // Hourly delivery cap for polychronic workers (0 = unlimited).
    if (ev.ms - w.hour_anchor >= 3600000) {
        w.hour_anchor = ev.ms;
        w.delivered_this_hour = 0;
    }
    const bool poly = w.info.profile.classification == Chronotype::Polychronic;
    const bool capped = poly && config_.engine.poly_hourly_cap > 0 &&
                        w.delivered_this_hour >= config_.engine.poly_hourly_cap;

    if (!capped) {
        const auto candidates = feed_candidates(w, ev.ms, 30);
        if (!candidates.empty()) {
            std::vector<ScoredTask> ranked;
            try {
                ranked = rank(*w.model, candidates);
            } catch (const ColdStart&) {
                ranked = popularity_baseline_rank(candidates, popularity_);
            }
            WorkerContext ctx;
            ctx.location = w.location();
            ctx.activity = !w.running.empty() ? Activity::WorkingOnTask : Activity::Idle;
            ctx.now = ev.ms;
            const SelectionResult sel =
                select_notifications(ranked, w.info.profile, ctx, w.info.schedule,
                                     durations_, config_.engine.notification_limit);
            for (const auto& [notif, reason] : sel.suppressed) {
                emit(w, ev.ms, EventKind::NotificationSuppressed,
                     {{"task_id", notif.task->task_id}, {"reason", to_string(reason)}});
                if (reason == GateReason::BusyOnTask && config_.engine.queue_busy &&
                    w.queued_offers.size() < config_.engine.queue_depth) {
                    const bool already_queued = std::any_of(
                        w.queued_offers.begin(), w.queued_offers.end(),
                        [&](const Notification& q) {
                            return q.task->task_id == notif.task->task_id;
                        });
                    if (!already_queued) w.queued_offers.push_back(notif);
                }
            }
            for (const auto& notif : sel.delivered) {
                emit(w, ev.ms, EventKind::NotificationShown,
                     {{"task_id", notif.task->task_id}});
                w.delivered_this_hour += 1;
            }
            try_click_offers(w, ev.ms, sel.delivered);
        }
    }

    const double scan_s = w.rng.exponential(config_.engine.scan_interval_minutes * 60.0);
    push(ev.ms + static_cast<TimestampMs>(std::max(1.0, scan_s) * 1000.0),
         EvKind::ScanWake, ev.worker, ev.a);
}

void Simulation::on_task_finish(const Event& ev) {
    SimWorker& w = workers_[static_cast<std::size_t>(ev.worker)];
    if (w.dropped_out(ev.ms)) return;
    const auto it = std::find_if(w.running.begin(), w.running.end(),
                                 [&](const RunningTask& rt) { return rt.id == ev.a; });
    if (it == w.running.end()) return;
    const RunningTask rt = *it;
    w.running.erase(it);
    const Task& task = ledger_[rt.ledger_index];

    if (rt.will_complete) {
        const std::int64_t observed_s = (ev.ms - rt.started_ms) / 1000;
        emit(w, ev.ms, EventKind::TaskComplete, {{"task_id", task.task_id}});
        emit(w, ev.ms, EventKind::Payment,
             {{"task_id", task.task_id}, {"amount", task.payment_per_task}});
        popularity_.record_completion(task.category);
        durations_.add(task.category, task.requester_id, observed_s);
        add_record(w,
                   InteractionRecord::make(w.info.worker_id, task.task_id,
                                           Outcome::Completed, ev.ms, observed_s),
                   rt.ledger_index);
        // A monochronic worker turns to queued offers right after finishing.
        if (w.info.profile.classification == Chronotype::Monochronic) {
            deliver_queued(w, ev.ms);
        }
    } else {
        emit(w, ev.ms, EventKind::PageTransition, {{"url_class", "platform"}});
        add_record(w,
                   InteractionRecord::make(w.info.worker_id, task.task_id,
                                           Outcome::StartedAbandoned, ev.ms),
                   rt.ledger_index);
    }
}

void Simulation::deliver_queued(SimWorker& w, TimestampMs ms) {
    if (w.queued_offers.empty() || !config_.engine.enabled || !in_test_stage(ms)) {
        w.queued_offers.clear();
        return;
    }
    WorkerContext ctx;
    ctx.location = Location::OnPlatform;
    ctx.activity = Activity::JustCompletedTask;
    ctx.now = ms;
    std::vector<Notification> delivered;
    std::set<std::string> flushed;
    while (!w.queued_offers.empty()) {
        Notification notif = w.queued_offers.front();
        w.queued_offers.pop_front();
        if (w.interacted.count(notif.task->task_id)) continue;
        if (!flushed.insert(notif.task->task_id).second) continue;
        const GateDecision d = evaluate_gate(w.info.profile, ctx, notif,
                                             w.info.schedule,
                                             durations_.predict(*notif.task));
        if (d.delivered()) {
            emit(w, ms, EventKind::NotificationShown,
                 {{"task_id", notif.task->task_id}, {"reason", "queued"}});
            delivered.push_back(std::move(notif));
            if (delivered.size() >= config_.engine.notification_limit) break;
        } else {
            emit(w, ms, EventKind::NotificationSuppressed,
                 {{"task_id", notif.task->task_id}, {"reason", to_string(d.reason)}});
        }
    }
    try_click_offers(w, ms, delivered);
}

void Simulation::on_keep_alive(const Event& ev) {
    SimWorker& w = workers_[static_cast<std::size_t>(ev.worker)];
    if (w.dropped_out(ev.ms)) return;
    for (const auto& rt : w.running) {
        if (rt.id == ev.a) {
            emit_activity(w, ev.ms);
            return;
        }
    }
}

void Simulation::on_stipend(const Event& ev) {
    SimWorker& w = workers_[static_cast<std::size_t>(ev.worker)];
    if (w.dropped_out(ev.ms)) return;
    emit(w, ev.ms, EventKind::Stipend, {{"amount", ev.a}});
}

ExperimentResult Simulation::run() {
    config_.validate();
    build_market();
    build_workers();
    schedule_stipends();

    while (!queue_.empty()) {
        const Event ev = queue_.top();
        queue_.pop();
        if (ev.ms >= config_.end_ms()) continue;
        switch (ev.kind) {
            case EvKind::TaskArrival: on_task_arrival(ev); break;
            case EvKind::SegmentStart: on_segment_start(ev); break;
            case EvKind::SegmentEnd: on_segment_end(ev); break;
            case EvKind::BrowseWake: on_browse_wake(ev); break;
            case EvKind::ScanWake: on_scan_wake(ev); break;
            case EvKind::TaskFinish: on_task_finish(ev); break;
            case EvKind::KeepAlive: on_keep_alive(ev); break;
            case EvKind::Stipend: on_stipend(ev); break;
        }
    }

    ExperimentResult result;
    result.config = config_;
    result.categories = categories_;
    result.task_ledger = std::move(ledger_);
    result.task_index = std::move(task_index_);
    for (auto& sw : workers_) {
        WorkerResult wr;
        wr.worker = sw.info;
        wr.events = std::move(sw.events);
        wr.records = std::move(sw.records);
        wr.model = std::move(sw.model);
        wr.dropped_out = sw.dropped;
        wr.dropout_ts = sw.dropped_at;
        result.workers.push_back(std::move(wr));
    }
    return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    Simulation sim(config);
    return sim.run();
}

}  // namespace tempora
