#pragma once

// The user-facing operations behind the command-line tool. Each returns the
// process exit code; errors escape as hsflow exceptions and are mapped by
// exit_code_for().
//
// A flow run directory contains
//   config.json        resolved configuration and its hash
//   diagnostics.csv    one row per diagnostic step
//   snapshots/         step_<n>.hsf checkpoints, each with a .json sidecar
//   run.json           outcome (steps, final time, abort reason)
// and `report` adds summary.json and decay.csv.

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "hsflow/config.hpp"
#include "hsflow/verify.hpp"

namespace hsflow {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitIo = 3 };

int exit_code_for(const std::exception& e);

int cmd_verify(int trials, std::uint64_t seed, std::ostream& out, const Star3Table& table = star3_T3);

/// `out_dir` overrides the config's output directory.
int cmd_flow(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& out_dir,
             std::ostream& log);
int cmd_flow(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

struct LiftReport {
    double max_star7 = 0.0;
    double max_torsion = 0.0;
    double max_block = 0.0;
    int samples = 0;
    bool pass() const { return max_star7 <= 1e-9 && max_torsion <= 1e-9 && max_block <= 1e-9; }
};

LiftReport lift_snapshot(const std::filesystem::path& snapshot, int samples = 64, std::uint64_t seed = 1);
int cmd_lift(const std::filesystem::path& snapshot, std::ostream& out);

struct RunSummary {
    nlohmann::json summary;
    std::string decay_csv;
};

/// Reads diagnostics.csv (and run.json when present) from a run directory.
RunSummary summarize_run(const std::filesystem::path& run_dir);
int cmd_report(const std::filesystem::path& run_dir, std::ostream& out);

}  // namespace hsflow
