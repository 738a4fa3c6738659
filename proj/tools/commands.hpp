// Batch entry points behind the CLI: simulate, evaluate, stats, classify-mpi,
// replay. Each returns a process exit code: 0 success, 2 usage/config,
// 3 I/O failure, 4 internal invariant violation.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempora/sim_config.hpp"
#include "tempora/simulator.hpp"

namespace tempora::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct RunManifest {
    std::string tool_version;
    std::uint64_t seed = 0;
    std::string config_hash_hex;
    TimestampMs pre_test_start_ms = 0;
    TimestampMs test_start_ms = 0;
    TimestampMs end_ms = 0;
    std::string config_file;
    std::string workers_file;
    std::string tasks_file;
    std::vector<std::string> telemetry_files;  // run-dir relative
    std::vector<std::string> model_files;
    std::optional<std::string> created_at;  // only with --timestamps

    nlohmann::ordered_json to_json() const;
    static RunManifest from_json(const nlohmann::ordered_json& j);
    void save(const std::filesystem::path& path) const;
    static RunManifest load(const std::filesystem::path& path);
};

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> out;
    int threads = 1;
    bool timestamps = false;
};

int cmd_simulate(const CommonOptions& opts);
int cmd_evaluate(const std::filesystem::path& run_dir,
                 const std::vector<std::size_t>& k_list,
                 const std::vector<std::string>& variant_names,
                 const CommonOptions& opts);
int cmd_stats(const std::filesystem::path& run_dir, const CommonOptions& opts);
int cmd_classify_mpi(const std::filesystem::path& csv_in,
                     const std::filesystem::path& csv_out);
int cmd_replay(const std::filesystem::path& run_dir, const CommonOptions& opts);

// Loaded run data shared by evaluate/stats/replay.
struct RunData {
    RunManifest manifest;
    ExperimentConfig config;
    std::vector<Worker> workers;
    std::vector<bool> dropped;
    TaskIndex tasks;
    CategorySet categories;
    std::vector<std::vector<TelemetryEvent>> streams;  // parallel to workers
};

RunData load_run(const std::filesystem::path& run_dir);

}  // namespace tempora::cli
