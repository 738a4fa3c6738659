#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tempora/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"tempora: chronemics-aware crowd-work notification engine "
                 "and marketplace simulator"};
    app.set_version_flag("--version", tempora::kVersion);
    app.require_subcommand(1);

    tempora::cli::CommonOptions opts;
    std::uint64_t seed_value = 0;
    std::string config_path, out_path;
    app.add_option("--seed", seed_value, "Seed override")
        ->each([&](const std::string&) { opts.seed = seed_value; });
    app.add_option("--config", config_path, "TOML experiment config")
        ->each([&](const std::string& v) { opts.config = v; });
    app.add_option("--out", out_path, "Output directory")
        ->each([&](const std::string& v) { opts.out = v; });
    app.add_option("--threads", opts.threads, "Worker threads for per-worker fanout");
    app.add_flag("--timestamps", opts.timestamps,
                 "Include wall-clock timestamps in reports");

    auto* simulate = app.add_subcommand(
        "simulate", "Run the marketplace experiment and write a run directory");

    std::string run_dir;
    std::vector<std::size_t> k_list{3, 5};
    std::vector<std::string> variants;
    auto* evaluate = app.add_subcommand(
        "evaluate", "Replay a run through the recommender variants, report MAP@k");
    evaluate->add_option("run_dir", run_dir, "Run directory")->required();
    evaluate->add_option("--k", k_list, "Cutoffs for MAP@k");
    evaluate->add_option("--variants", variants,
                         "Subset of {model,every_3_days,never,popularity}");

    auto* stats = app.add_subcommand(
        "stats", "Wage tables and the nonparametric test battery for a run");
    stats->add_option("run_dir", run_dir, "Run directory")->required();

    std::string csv_in, csv_out;
    auto* classify = app.add_subcommand(
        "classify-mpi", "Score an MPI response CSV and classify respondents");
    classify->add_option("csv_in", csv_in, "Input CSV")->required();
    classify->add_option("csv_out", csv_out, "Output CSV")->required();

    auto* replay = app.add_subcommand(
        "replay", "Re-ingest a run's telemetry, verify it, re-derive metrics");
    replay->add_option("run_dir", run_dir, "Run directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return tempora::cli::cmd_simulate(opts);
    if (evaluate->parsed()) {
        return tempora::cli::cmd_evaluate(run_dir, k_list, variants, opts);
    }
    if (stats->parsed()) return tempora::cli::cmd_stats(run_dir, opts);
    if (classify->parsed()) return tempora::cli::cmd_classify_mpi(csv_in, csv_out);
    if (replay->parsed()) return tempora::cli::cmd_replay(run_dir, opts);
    return tempora::cli::kExitUsage;
}
