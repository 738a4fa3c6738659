#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "tempora/chronotype.hpp"
#include "tempora/metrics.hpp"
#include "tempora/offline_eval.hpp"
#include "tempora/rng.hpp"
#include "tempora/stats.hpp"
#include "tempora/telemetry.hpp"
#include "tempora/version.hpp"

namespace tempora::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_wage(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Runs fn(i) for i in [0, n) across `threads` workers; results land by index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t stride = static_cast<std::size_t>(threads);
    for (std::size_t t = 0; t < stride; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += stride) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

ordered_json RunManifest::to_json() const {
    ordered_json j;
    j["tool_version"] = tool_version;
    j["seed"] = seed;
    j["config_hash"] = config_hash_hex;
    j["pre_test_start_ms"] = pre_test_start_ms;
    j["test_start_ms"] = test_start_ms;
    j["end_ms"] = end_ms;
    j["config_file"] = config_file;
    j["workers_file"] = workers_file;
    j["tasks_file"] = tasks_file;
    j["telemetry_files"] = telemetry_files;
    j["model_files"] = model_files;
    if (created_at) j["created_at"] = *created_at;
    return j;
}

RunManifest RunManifest::from_json(const ordered_json& j) {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_hash_hex = j.at("config_hash").get<std::string>();
    m.pre_test_start_ms = j.at("pre_test_start_ms").get<std::int64_t>();
    m.test_start_ms = j.at("test_start_ms").get<std::int64_t>();
    m.end_ms = j.at("end_ms").get<std::int64_t>();
    m.config_file = j.at("config_file").get<std::string>();
    m.workers_file = j.at("workers_file").get<std::string>();
    m.tasks_file = j.at("tasks_file").get<std::string>();
    m.telemetry_files = j.at("telemetry_files").get<std::vector<std::string>>();
    m.model_files = j.at("model_files").get<std::vector<std::string>>();
    if (j.contains("created_at")) m.created_at = j.at("created_at").get<std::string>();
    return m;
}

void RunManifest::save(const fs::path& path) const {
    write_text(path, to_json().dump(2) + "\n");
}

RunManifest RunManifest::load(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read manifest: " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad manifest: " + std::string(e.what()));
    }
    return from_json(j);
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOptions& opts) {
    ExperimentConfig config;
    try {
        if (opts.config) config = ExperimentConfig::load(*opts.config);
        if (opts.seed) config.seed = *opts.seed;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (!opts.out) {
        std::cerr << "simulate requires --out <dir>\n";
        return kExitUsage;
    }

    try {
        const ExperimentResult result = run_experiment(config);

        const fs::path out = *opts.out;
        fs::create_directories(out / "telemetry");
        fs::create_directories(out / "models");

        RunManifest manifest;
        manifest.tool_version = kVersion;
        manifest.seed = config.seed;
        manifest.config_hash_hex = hex64(config.config_hash());
        manifest.pre_test_start_ms = config.pre_test_start_ms();
        manifest.test_start_ms = config.test_start_ms();
        manifest.end_ms = config.end_ms();
        manifest.config_file = "config_canonical.toml";
        manifest.workers_file = "workers.jsonl";
        manifest.tasks_file = "tasks.jsonl";
        if (opts.timestamps) manifest.created_at = iso_now();

        write_text(out / manifest.config_file, config.canonical_toml());

        std::ostringstream workers_out;
        for (const auto& wr : result.workers) {
            ordered_json j = worker_to_json(wr.worker);
            j["dropped_out"] = wr.dropped_out;
            if (wr.dropped_out) j["dropout_ts"] = wr.dropout_ts;
            workers_out << j.dump() << "\n";
        }
        write_text(out / manifest.workers_file, workers_out.str());

        std::ostringstream tasks_out;
        for (const auto& t : result.task_ledger) {
            tasks_out << task_to_json(t).dump() << "\n";
        }
        write_text(out / manifest.tasks_file, tasks_out.str());

        for (const auto& wr : result.workers) {
            const std::string rel = "telemetry/" + wr.worker.worker_id + ".jsonl";
            write_jsonl(out / rel, wr.events);
            manifest.telemetry_files.push_back(rel);
            if (wr.model) {
                const std::string mrel = "models/" + wr.worker.worker_id + ".model";
                std::ofstream mout(out / mrel, std::ios::binary);
                if (!mout) throw IoError("cannot write " + (out / mrel).string());
                wr.model->save(mout);
                manifest.model_files.push_back(mrel);
            }
        }
        manifest.save(out / "manifest.json");

        std::cout << "run written to " << out.string() << " (" << result.workers.size()
                  << " workers, " << result.task_ledger.size() << " tasks, seed "
                  << config.seed << ", config " << manifest.config_hash_hex << ")\n";
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

// ---------------------------------------------------------------------------
// run loading
// ---------------------------------------------------------------------------

RunData load_run(const fs::path& run_dir) {
    if (!fs::exists(run_dir / "manifest.json")) {
        throw ConfigError("no manifest.json in " + run_dir.string());
    }
    RunData data;
    data.manifest = RunManifest::load(run_dir / "manifest.json");
    data.config = ExperimentConfig::load(run_dir / data.manifest.config_file);
    data.categories = CategorySet(category_names(data.config.market.category_count));

    std::ifstream win(run_dir / data.manifest.workers_file, std::ios::binary);
    if (!win) throw ConfigError("missing workers file in " + run_dir.string());
    std::string line;
    while (std::getline(win, line)) {
        if (line.empty()) continue;
        const auto j = ordered_json::parse(line);
        data.workers.push_back(worker_from_json(j));
        data.dropped.push_back(j.value("dropped_out", false));
    }

    std::ifstream tin(run_dir / data.manifest.tasks_file, std::ios::binary);
    if (!tin) throw ConfigError("missing tasks file in " + run_dir.string());
    while (std::getline(tin, line)) {
        if (line.empty()) continue;
        data.tasks.add(task_from_json(ordered_json::parse(line)));
    }

    for (const auto& rel : data.manifest.telemetry_files) {
        data.streams.push_back(read_jsonl(run_dir / rel));
    }
    if (data.streams.size() != data.workers.size()) {
        throw ConfigError("telemetry file count does not match worker count");
    }
    return data;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

int cmd_evaluate(const fs::path& run_dir, const std::vector<std::size_t>& k_list,
                 const std::vector<std::string>& variant_names,
                 const CommonOptions& opts) {
    RunData data;
    try {
        data = load_run(run_dir);
    } catch (const std::exception& e) {
        std::cerr << "cannot load run: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        std::vector<RecommenderVariant> variants;
        if (variant_names.empty()) {
            variants.assign(std::begin(kAllVariants), std::end(kAllVariants));
        } else {
            for (const auto& name : variant_names) {
                variants.push_back(variant_from_string(name));
            }
        }

        std::vector<EvalStream> streams;
        for (std::size_t i = 0; i < data.workers.size(); ++i) {
            if (data.dropped[i]) continue;
            EvalStream s;
            s.worker_id = data.workers[i].worker_id;
            s.condition = data.workers[i].condition;
            s.records = records_from_telemetry(data.streams[i], data.tasks);
            if (!s.records.empty()) streams.push_back(std::move(s));
        }

        OfflineEvalConfig eval_config;
        eval_config.k_list = k_list;
        eval_config.train = data.config.train;
        const auto scores =
            evaluate_variants(streams, data.tasks, data.categories, eval_config, variants);

        std::map<std::string, Condition> condition_of;
        for (const auto& s : streams) condition_of[s.worker_id] = s.condition;

        static const char* kConditions[] = {"all", "M/CF", "P/CF", "M/S", "P/S"};
        std::ostringstream csv;
        csv << "variant,condition,k,map\n";
        std::ostringstream table;
        table << "variant        condition ";
        for (std::size_t k : k_list) table << " mAP@" << k << "   ";
        table << "\n";
        for (const auto& vs : scores) {
            for (const char* cond : kConditions) {
                std::map<std::size_t, std::vector<double>> by_k;
                for (const auto& [worker, ap] : vs.per_worker_ap) {
                    if (std::string(cond) != "all" &&
                        to_string(condition_of.at(worker)) != cond) {
                        continue;
                    }
                    for (const auto& [k, v] : ap) by_k[k].push_back(v);
                }
                if (by_k.empty()) continue;
                table << to_string(vs.variant)
                      << std::string(15 - std::min<std::size_t>(
                                              15, to_string(vs.variant).size()), ' ')
                      << cond << std::string(10 - std::min<std::size_t>(
                                                      10, std::string(cond).size()), ' ');
                for (std::size_t k : k_list) {
                    double mean = 0.0;
                    for (double v : by_k[k]) mean += v;
                    mean /= static_cast<double>(by_k[k].size());
                    csv << to_string(vs.variant) << "," << cond << "," << k << ","
                        << fmt_wage(mean) << "\n";
                    table << fmt_wage(mean) << " ";
                }
                table << "\n";
            }
        }

        const fs::path out_csv =
            (opts.out ? *opts.out : run_dir) / "map_report.csv";
        write_text(out_csv, csv.str());
        std::cout << table.str();
        std::cout << "map report written to " << out_csv.string() << "\n";
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

namespace {

struct StageMetrics {
    std::optional<double> wage;  // median hourly wage, absent when no paid session
    std::int64_t tasks_completed = 0;
};

StageMetrics stage_metrics(std::span<const TelemetryEvent> events, TimestampMs lo,
                           TimestampMs hi) {
    std::vector<TelemetryEvent> slice;
    for (const auto& e : events) {
        if (e.ts >= lo && e.ts < hi) slice.push_back(e);
    }
    StageMetrics m;
    for (const auto& e : slice) {
        if (e.event == EventKind::TaskComplete) ++m.tasks_completed;
    }
    try {
        m.wage = compute_hourly_wage(slice);
    } catch (const NoWageData&) {
        m.wage = std::nullopt;
    }
    return m;
}

void append_test_row(std::ostringstream& csv, const std::string& comparison,
                     const TestResult& r, std::optional<double> p_adj = {}) {
    csv << r.method << "," << comparison << "," << r.statistic_name << ","
        << fmt_num(r.statistic) << "," << (r.df ? fmt_num(*r.df) : "") << ","
        << fmt_num(r.p_value) << "," << (p_adj ? fmt_num(*p_adj) : "") << "\n";
}

}  // namespace

int cmd_stats(const fs::path& run_dir, const CommonOptions& opts) {
    RunData data;
    try {
        data = load_run(run_dir);
    } catch (const std::exception& e) {
        std::cerr << "cannot load run: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        const TimestampMs pre_lo = data.manifest.pre_test_start_ms;
        const TimestampMs pre_hi = data.manifest.test_start_ms;
        const TimestampMs test_hi = data.manifest.end_ms;
        if (pre_hi <= pre_lo || test_hi <= pre_hi) {
            std::cerr << "manifest has empty stages\n";
            return kExitUsage;
        }

        const std::size_t n = data.workers.size();
        std::vector<StageMetrics> pre(n), test(n);
        parallel_for(n, opts.threads, [&](std::size_t i) {
            pre[i] = stage_metrics(data.streams[i], pre_lo, pre_hi);
            test[i] = stage_metrics(data.streams[i], pre_hi, test_hi);
        });

        // Per-worker wage summary rows (both stages).
        std::vector<WageSummaryRow> rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (data.dropped[i]) continue;
            for (const auto& [stage, metrics] :
                 {std::pair{std::string("pre_test"), pre[i]},
                  std::pair{std::string("test"), test[i]}}) {
                WageSummaryRow row;
                row.worker_id = data.workers[i].worker_id;
                row.condition = to_string(data.workers[i].condition);
                row.stage = stage;
                row.median_hourly_wage = metrics.wage.value_or(0.0);
                row.tasks_completed = metrics.tasks_completed;
                rows.push_back(row);
            }
        }

        // Condition x stage wage table (Table-3 layout: condition, Pre-Test, Test).
        std::ostringstream wage_csv;
        wage_csv << "condition,pre_median,pre_mean,pre_std,pre_n,test_median,"
                    "test_mean,test_std,test_n,change_pct\n";
        std::ostringstream table;
        table << "condition  Pre-Test                      Test\n";
        std::map<Condition, std::vector<double>> pre_by_cond, test_by_cond;
        std::map<Condition, std::vector<std::pair<double, double>>> paired_by_cond;
        std::map<Chronotype, std::vector<double>> pre_wage_by_chrono, pre_tasks_by_chrono;
        for (std::size_t i = 0; i < n; ++i) {
            if (data.dropped[i]) continue;
            const Condition c = data.workers[i].condition;
            if (pre[i].wage) pre_by_cond[c].push_back(*pre[i].wage);
            if (test[i].wage) test_by_cond[c].push_back(*test[i].wage);
            if (pre[i].wage && test[i].wage) {
                paired_by_cond[c].push_back({*pre[i].wage, *test[i].wage});
            }
            const Chronotype ch = data.workers[i].profile.classification;
            if (pre[i].wage) pre_wage_by_chrono[ch].push_back(*pre[i].wage);
            pre_tasks_by_chrono[ch].push_back(
                static_cast<double>(pre[i].tasks_completed));
        }

        std::ostringstream tests_csv;
        tests_csv << "method,comparison,statistic,value,df,p,p_adjusted\n";

        for (Condition c :
             {Condition::M_CF, Condition::P_CF, Condition::M_S, Condition::P_S}) {
            const auto& pw = pre_by_cond[c];
            const auto& tw = test_by_cond[c];
            if (pw.empty() || tw.empty()) continue;
            const SummaryStats ps = summarize(pw);
            const SummaryStats ts = summarize(tw);
            double change = 0.0;
            if (ps.median > 0.0) change = wage_change_pct(ps.median, ts.median);
            wage_csv << to_string(c) << "," << fmt_wage(ps.median) << ","
                     << fmt_wage(ps.mean) << "," << fmt_wage(ps.std_dev) << "," << ps.n
                     << "," << fmt_wage(ts.median) << "," << fmt_wage(ts.mean) << ","
                     << fmt_wage(ts.std_dev) << "," << ts.n << "," << fmt_num(change)
                     << "\n";
            char line[160];
            std::snprintf(line, sizeof line,
                          "%-9s  $%.2f (u=$%.2f, s=$%.2f)    $%.2f (u=$%.2f, s=$%.2f)\n",
                          to_string(c).c_str(), ps.median, ps.mean, ps.std_dev,
                          ts.median, ts.mean, ts.std_dev);
            table << line;

            // Normality screen per condition and stage.
            for (const auto& [stage, sample] :
                 {std::pair{std::string("pre"), pw}, std::pair{std::string("test"), tw}}) {
                if (sample.size() >= 3) {
                    try {
                        append_test_row(tests_csv, to_string(c) + ":" + stage + ":wage",
                                        shapiro_wilk(sample));
                    } catch (const DegenerateSample&) {
                    }
                }
            }
            // Pre-vs-test within condition (paired).
            const auto& pairs = paired_by_cond[c];
            if (pairs.size() >= 2) {
                std::vector<double> before, after;
                for (const auto& [p0, p1] : pairs) {
                    before.push_back(p0);
                    after.push_back(p1);
                }
                try {
                    append_test_row(tests_csv, to_string(c) + ":pre_vs_test:wage",
                                    wilcoxon_signed_rank(before, after));
                } catch (const DegenerateSample&) {
                }
            }
        }

        // Omnibus across conditions, per stage, with post-hoc on the test stage.
        for (const auto& [stage, by_cond] :
             {std::pair{std::string("pre"), &pre_by_cond},
              std::pair{std::string("test"), &test_by_cond}}) {
            std::vector<std::vector<double>> groups;
            for (Condition c :
                 {Condition::M_CF, Condition::P_CF, Condition::M_S, Condition::P_S}) {
                if (!(*by_cond)[c].empty()) groups.push_back((*by_cond)[c]);
            }
            if (groups.size() >= 2) {
                try {
                    append_test_row(tests_csv, "conditions:" + stage + ":wage",
                                    kruskal_wallis(groups));
                    if (stage == "test") {
                        for (const auto& d : dunn_bonferroni(groups)) {
                            TestResult r;
                            r.method = "dunn_bonferroni";
                            r.statistic_name = "Z";
                            r.statistic = d.z;
                            r.p_value = d.p_value;
                            append_test_row(tests_csv,
                                            "test:wage:pair" + std::to_string(d.group_a) +
                                                "v" + std::to_string(d.group_b),
                                            r, d.p_adjusted);
                        }
                    }
                } catch (const Error&) {
                }
            }
        }

        // Chronotype comparisons on the pre-test stage.
        if (!pre_wage_by_chrono[Chronotype::Monochronic].empty() &&
            !pre_wage_by_chrono[Chronotype::Polychronic].empty()) {
            append_test_row(tests_csv, "mono_vs_poly:pre:wage",
                            mann_whitney_u(pre_wage_by_chrono[Chronotype::Monochronic],
                                           pre_wage_by_chrono[Chronotype::Polychronic]));
        }
        if (!pre_tasks_by_chrono[Chronotype::Monochronic].empty() &&
            !pre_tasks_by_chrono[Chronotype::Polychronic].empty()) {
            append_test_row(tests_csv, "mono_vs_poly:pre:tasks",
                            mann_whitney_u(pre_tasks_by_chrono[Chronotype::Monochronic],
                                           pre_tasks_by_chrono[Chronotype::Polychronic]));
        }

        // Dropout analysis, only meaningful when the dropout scenario ran.
        if (data.config.dropout.enabled) {
            double mono_drop = 0, mono_stay = 0, poly_drop = 0, poly_stay = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool mono = data.workers[i].profile.classification ==
                                  Chronotype::Monochronic;
                if (data.dropped[i]) {
                    (mono ? mono_drop : poly_drop) += 1;
                } else {
                    (mono ? mono_stay : poly_stay) += 1;
                }
            }
            std::vector<std::vector<double>> tab = {{mono_drop, mono_stay},
                                                    {poly_drop, poly_stay}};
            try {
                append_test_row(tests_csv, "dropout_vs_chronotype",
                                chi_square_independence(tab));
            } catch (const DegenerateTable&) {
            }
        }

        const fs::path out_dir = opts.out ? *opts.out : run_dir;
        fs::create_directories(out_dir);
        write_text(out_dir / "wage_table.csv", wage_csv.str());
        write_text(out_dir / "stat_tests.csv", tests_csv.str());
        write_text(out_dir / "wage_summary.csv",
                   wage_summary_csv(rows));
        std::cout << table.str();
        std::cout << "stats written to " << out_dir.string()
                  << " (wage_table.csv, stat_tests.csv, wage_summary.csv)\n";
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

// ---------------------------------------------------------------------------
// classify-mpi
// ---------------------------------------------------------------------------

int cmd_classify_mpi(const fs::path& csv_in, const fs::path& csv_out) {
    std::ifstream in(csv_in, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read " << csv_in.string() << "\n";
        return kExitUsage;
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("worker_id,", 0) != 0) {
        std::cerr << "missing or bad CSV header (expected '" << kMpiCsvHeader << "')\n";
        return kExitUsage;
    }

    std::ostringstream out;
    out << kMpiCsvHeader << ",score,classification,status\n";
    std::size_t warnings = 0;
    std::size_t mono = 0, poly = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const MpiCsvRow row = parse_mpi_csv_row(line);
            const MpiScore score = score_mpi(row.response);
            const ChronotypeProfile profile = classify(score);
            const bool attentive = validate_attention(row.response);
            char score_buf[16];
            std::snprintf(score_buf, sizeof score_buf, "%.4f", score.value);
            out << line << "," << score_buf << "," << to_string(profile.classification)
                << "," << (attentive ? "ok" : "attention_fail") << "\n";
            if (attentive) {
                (profile.classification == Chronotype::Monochronic ? mono : poly) += 1;
            } else {
                ++warnings;
            }
        } catch (const Error&) {
            out << line << ",,,error\n";
            ++warnings;
        }
    }
    try {
        write_text(csv_out, out.str());
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
    std::cout << "classified " << (mono + poly) << " respondents (" << mono
              << " monochronic, " << poly << " polychronic), " << warnings
              << " flagged\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

int cmd_replay(const fs::path& run_dir, const CommonOptions& opts) {
    RunData data;
    try {
        data = load_run(run_dir);
    } catch (const std::exception& e) {
        std::cerr << "cannot load run: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        // Round-trip check: parse + re-serialize must reproduce each file.
        for (std::size_t i = 0; i < data.streams.size(); ++i) {
            validate_stream(data.streams[i]);
            std::ostringstream rebuilt;
            for (const auto& e : data.streams[i]) {
                rebuilt << serialize_event(e) << "\n";
            }
            std::ifstream orig(run_dir / data.manifest.telemetry_files[i],
                               std::ios::binary);
            std::stringstream original;
            original << orig.rdbuf();
            if (original.str() != rebuilt.str()) {
                std::cerr << "re-serialization mismatch for "
                          << data.manifest.telemetry_files[i] << "\n";
                return kExitInternal;
            }
        }

        // Config hash must match the stored canonical config bytes.
        std::ifstream cin_file(run_dir / data.manifest.config_file, std::ios::binary);
        std::stringstream config_bytes;
        config_bytes << cin_file.rdbuf();
        if (hex64(fnv1a64(config_bytes.str())) != data.manifest.config_hash_hex) {
            std::cerr << "config hash mismatch\n";
            return kExitInternal;
        }

        return cmd_stats(run_dir, opts);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace tempora::cli
