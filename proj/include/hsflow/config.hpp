#pragma once

// Experiment configuration. Two equivalent on-disk forms:
//
//   INI:   [lattice] n = 64 4 4 4, L = 1 1 1 1
//          [initial] generator, amplitude, seed, modes
//          [flow]    dt_policy, dt, cfl, t_end, max_steps, order, integrator,
//                    diagnostic_every, checkpoint_every, degeneration_threshold,
//                    fiber_samples, seed, coflow_constant_a
//          [output]  dir
//   JSON:  the same sections as nested objects; n and L as arrays.
//
// configs/schema.json documents both. Unknown keys are rejected.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "hsflow/flow_engine.hpp"
#include "hsflow/initial_data.hpp"

namespace hsflow {

struct ExperimentConfig {
    std::array<int, 4> n{16, 8, 8, 8};
    std::array<double, 4> lengths{1.0, 1.0, 1.0, 1.0};
    InitialSpec initial;
    FlowConfig flow;
    std::string output_dir;
    // Constant of the modified coflow; the descent needs it to vanish.
    double coflow_constant_a = 0.0;

    Lattice lattice() const { return Lattice(n, lengths); }
    void validate() const;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

ExperimentConfig parse_ini(const std::string& text, const std::string& source = "<string>");
ExperimentConfig parse_json(const std::string& text, const std::string& source = "<string>");
/// Dispatches on the extension (.json -> JSON, anything else -> INI). Throws IoError.
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& c);
std::string to_ini(const ExperimentConfig& c);

/// Compact JSON with sorted keys; the hashed form.
std::string canonical_json(const ExperimentConfig& c);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

std::string to_string(DtPolicy p);
std::string to_string(Integrator i);

}  // namespace hsflow
