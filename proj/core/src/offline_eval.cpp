#include "tempora/offline_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "tempora/rng.hpp"
#include "tempora/simulator.hpp"

namespace tempora {

std::string to_string(RecommenderVariant v) {
    switch (v) {
        case RecommenderVariant::Model: return "model";
        case RecommenderVariant::EveryThreeDays: return "every_3_days";
        case RecommenderVariant::NeverRetrain: return "never";
        case RecommenderVariant::Popularity: return "popularity";
    }
    return "model";
}

RecommenderVariant variant_from_string(const std::string& s) {
    if (s == "model") return RecommenderVariant::Model;
    if (s == "every_3_days") return RecommenderVariant::EveryThreeDays;
    if (s == "never") return RecommenderVariant::NeverRetrain;
    if (s == "popularity") return RecommenderVariant::Popularity;
    throw ParseError("unknown recommender variant: '" + s + "'");
}

namespace {

RetrainPolicy policy_for(RecommenderVariant v) {
    switch (v) {
        case RecommenderVariant::Model: return RetrainPolicy::immediate();
        case RecommenderVariant::EveryThreeDays:
            return RetrainPolicy::every(3LL * 86400000LL);
        default: return RetrainPolicy::never();
    }
}

// Global completed-count timeline so popularity ranking at time ts uses only
// completions strictly before ts, across all workers.
class PopularityTimeline {
  public:
    PopularityTimeline(std::span<const EvalStream> streams, const TaskIndex& tasks) {
        for (const auto& s : streams) {
            for (const auto& r : s.records) {
                if (r.outcome != Outcome::Completed) continue;
                if (const Task* t = tasks.find(r.task_id)) {
                    by_category_[t->category].push_back(r.timestamp);
                }
            }
        }
        for (auto& [cat, v] : by_category_) std::sort(v.begin(), v.end());
    }

    PopularityCounts counts_before(TimestampMs ts) const {
        PopularityCounts counts;
        for (const auto& [cat, v] : by_category_) {
            const auto n = std::lower_bound(v.begin(), v.end(), ts) - v.begin();
            for (std::ptrdiff_t i = 0; i < n; ++i) counts.record_completion(cat);
        }
        return counts;
    }

  private:
    std::map<std::string, std::vector<TimestampMs>> by_category_;
};

}  // namespace

std::vector<VariantScores> evaluate_variants(std::span<const EvalStream> streams,
                                             const TaskIndex& tasks,
                                             const CategorySet& categories,
                                             const OfflineEvalConfig& config,
                                             std::span<const RecommenderVariant> variants) {
    if (streams.empty()) throw EmptyInput("evaluate_variants: no streams");
    const PopularityTimeline timeline(streams, tasks);

    std::vector<VariantScores> out;
    for (const RecommenderVariant variant : variants) {
        VariantScores scores;
        scores.variant = variant;
        const bool pure_popularity = variant == RecommenderVariant::Popularity;

        for (const auto& stream : streams) {
            EngagementModel model(stream.worker_id, categories, policy_for(variant),
                                  fnv1a64(stream.worker_id) ^ config.seed_salt);
            std::map<std::size_t, double> ap_sum;
            std::size_t eval_points = 0;

            const auto& recs = stream.records;
            for (std::size_t t = 0; t < recs.size(); ++t) {
                if (t >= config.warmup && t + 1 < recs.size()) {
                    // Candidate window: the next tasks this worker encounters.
                    std::vector<Task> candidates;
                    std::set<std::string> relevant;
                    bool has_negative = false;
                    for (std::size_t j = t + 1;
                         j < recs.size() && candidates.size() < config.window; ++j) {
                        const Task* task = tasks.find(recs[j].task_id);
                        if (!task) continue;
                        candidates.push_back(*task);
                        if (recs[j].label > 0.0) {
                            relevant.insert(recs[j].task_id);
                        } else {
                            has_negative = true;
                        }
                    }
                    if (candidates.size() >= 2 && !relevant.empty() && has_negative) {
                        std::vector<ScoredTask> ranked;
                        if (!pure_popularity && model.ready()) {
                            ranked = rank(model, candidates);
                        } else {
                            ranked = popularity_baseline_rank(
                                candidates, timeline.counts_before(recs[t].timestamp));
                        }
                        std::vector<std::string> ranked_ids;
                        ranked_ids.reserve(ranked.size());
                        for (const auto& st : ranked) ranked_ids.push_back(st.task.task_id);
                        for (std::size_t k : config.k_list) {
                            ap_sum[k] += average_precision_at_k(ranked_ids, relevant, k);
                        }
                        ++eval_points;
                    }
                }
                if (!pure_popularity) {
                    const Task* task = tasks.find(recs[t].task_id);
                    if (task) {
                        model.update_on_event(recs[t], *task, recs[t].timestamp,
                                              config.train);
                        model.maybe_bootstrap(recs[t].timestamp, config.train);
                    }
                }
            }

            if (eval_points > 0) {
                for (std::size_t k : config.k_list) {
                    scores.per_worker_ap[stream.worker_id][k] =
                        ap_sum[k] / static_cast<double>(eval_points);
                }
            }
        }

        for (std::size_t k : config.k_list) {
            std::vector<double> values;
            for (const auto& [worker, by_k] : scores.per_worker_ap) {
                const auto it = by_k.find(k);
                if (it != by_k.end()) values.push_back(it->second);
            }
            if (!values.empty()) {
                double sum = 0.0;
                for (double v : values) sum += v;
                scores.mean_ap[k] = sum / static_cast<double>(values.size());
                scores.median_ap[k] = lower_median(values);
            }
        }
        out.push_back(std::move(scores));
    }
    return out;
}

std::vector<InteractionRecord> records_from_telemetry(
    std::span<const TelemetryEvent> events, const TaskIndex& tasks) {
    struct TaskTrace {
        TimestampMs shown = 0, previewed = 0, started = 0, completed = 0;
        std::string worker_id;
        TimestampMs order = 0;  // first touch, for output ordering
    };
    std::map<std::string, TaskTrace> traces;
    for (const auto& e : events) {
        const std::string id = e.task_id();
        if (id.empty() || !tasks.find(id)) continue;
        auto& tr = traces[id];
        if (tr.order == 0) tr.order = e.ts;
        tr.worker_id = e.worker_id;
        switch (e.event) {
            case EventKind::NotificationShown: tr.shown = e.ts; break;
            case EventKind::TaskPreview: tr.previewed = e.ts; break;
            case EventKind::TaskStart: tr.started = e.ts; break;
            case EventKind::TaskComplete: tr.completed = e.ts; break;
            default: break;
        }
    }
    std::vector<InteractionRecord> records;
    for (const auto& [task_id, tr] : traces) {
        if (tr.completed) {
            records.push_back(InteractionRecord::make(
                tr.worker_id, task_id, Outcome::Completed, tr.completed,
                tr.started ? (tr.completed - tr.started) / 1000 : 0));
        } else if (tr.started) {
            records.push_back(InteractionRecord::make(tr.worker_id, task_id,
                                                      Outcome::StartedAbandoned,
                                                      tr.started));
        } else if (tr.previewed) {
            records.push_back(InteractionRecord::make(tr.worker_id, task_id,
                                                      Outcome::Previewed, tr.previewed));
        } else if (tr.shown) {
            records.push_back(InteractionRecord::make(tr.worker_id, task_id,
                                                      Outcome::Ignored, tr.shown));
        }
    }
    std::sort(records.begin(), records.end(),
              [](const InteractionRecord& a, const InteractionRecord& b) {
                  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                  return a.task_id < b.task_id;
              });
    return records;
}

SyntheticData make_synthetic_streams(const SyntheticStreamConfig& config) {
    SyntheticData data;
    data.categories = CategorySet(category_names(config.categories));
    Rng root(config.seed);

    // Two globally popular categories shared by everyone.
    std::vector<std::string> pool = data.categories.names();
    root.shuffle(pool);
    const std::set<std::string> popular(pool.begin(),
                                        pool.begin() + std::min<std::size_t>(2, pool.size()));

    std::int64_t task_counter = 0;
    for (int wi = 0; wi < config.workers; ++wi) {
        char id[16];
        std::snprintf(id, sizeof id, "S%03d", wi + 1);
        EvalStream stream;
        stream.worker_id = id;
        stream.condition = Condition::P_CF;
        Rng rng = root.fork(stream.worker_id);

        // Personal preferences live outside the globally popular head, so the
        // per-worker signal is exactly what the popularity baseline cannot see.
        // Re-draws avoid the previous set: a shift really moves the target.
        std::set<std::string> preferred;
        auto draw_preferences = [&] {
            std::vector<std::string> cats;
            for (const auto& c : data.categories.names()) {
                if (!popular.count(c) && !preferred.count(c)) cats.push_back(c);
            }
            rng.shuffle(cats);
            cats.resize(std::min<std::size_t>(
                static_cast<std::size_t>(config.preferred_categories), cats.size()));
            return std::set<std::string>(cats.begin(), cats.end());
        };
        preferred = draw_preferences();

        TimestampMs ts = kSimEpochMs;
        for (int i = 0; i < config.interactions_per_worker; ++i) {
            if (config.initial_shift_at > 0 && i == config.initial_shift_at) {
                preferred = draw_preferences();
            }
            if (config.drift_every > 0 && i > 0 && i % config.drift_every == 0) {
                preferred = draw_preferences();
            }
            ts += static_cast<TimestampMs>(
                config.interaction_gap_hours * 3600000.0 * rng.uniform(0.6, 1.4));

            Task task;
            char tid[24];
            std::snprintf(tid, sizeof tid, "ST%06lld",
                          static_cast<long long>(++task_counter));
            task.task_id = tid;
            char req[16];
            std::snprintf(req, sizeof req, "SR%02d",
                          static_cast<int>(rng.uniform_int(1, config.requesters)));
            task.requester_id = req;
            task.category = data.categories.names()[static_cast<std::size_t>(
                rng.uniform_int(0, config.categories - 1))];
            task.task_type = rng.u01() < 0.9 ? TaskType::Regular
                             : rng.bernoulli(0.7) ? TaskType::Training
                                                  : TaskType::Exam;
            task.payment_per_task = usd(std::clamp(rng.lognormal(-1.6, 0.7), 0.01, 3.0));
            task.payment_per_batch =
                task.payment_per_task * rng.uniform_int(1, 6);
            task.declared_duration_s =
                static_cast<std::int64_t>(std::clamp(rng.lognormal(5.9, 0.6), 60.0, 3600.0));
            task.acceptance_rate = 0.5 + 0.5 * rng.u01();
            task.posted_at = ts - static_cast<TimestampMs>(rng.uniform(0.0, 3600000.0));
            task.validate();

            double engage = config.base_engage;
            if (popular.count(task.category)) engage += config.popular_engage;
            if (preferred.count(task.category)) engage += config.preferred_engage;
            engage = std::min(engage, 0.92);

            Outcome outcome;
            std::optional<std::int64_t> duration;
            if (rng.bernoulli(engage)) {
                if (rng.bernoulli(0.8)) {
                    outcome = Outcome::Completed;
                    duration = static_cast<std::int64_t>(
                        static_cast<double>(task.declared_duration_s) *
                        rng.uniform(0.7, 1.4));
                } else {
                    outcome = Outcome::StartedAbandoned;
                }
            } else {
                outcome = rng.bernoulli(0.5) ? Outcome::Previewed : Outcome::Ignored;
            }
            data.tasks.add(task);
            stream.records.push_back(InteractionRecord::make(
                stream.worker_id, task.task_id, outcome, ts, duration));
        }
        data.streams.push_back(std::move(stream));
    }
    return data;
}

}  // namespace tempora
