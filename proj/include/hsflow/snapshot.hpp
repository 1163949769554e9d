#pragma once

// HSF1 snapshot files.
//
// Layout (all little-endian):
//   char[4]  "HSF1"
//   u32[4]   lattice points per axis n0..n3
//   f64[4]   period lengths L0..L3
//   f64      time
//   u32      number of stored 2-form fields (3 for a triple)
//   f64[]    field-major, then component (01,02,03,23,31,12), then lattice
//            point (row-major, x^3 fastest)
//
// A JSON sidecar `<snapshot>.json` carries provenance.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hsflow/grid_calculus.hpp"

namespace hsflow {

struct Snapshot {
    TripleField field;
    double time = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const TripleField& field, double time);
Snapshot read_snapshot(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& snapshot);
void write_sidecar(const std::filesystem::path& snapshot, const nlohmann::json& provenance);

}  // namespace hsflow
