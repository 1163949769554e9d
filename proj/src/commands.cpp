#include "hsflow/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "hsflow/errors.hpp"
#include "hsflow/flow_engine.hpp"
#include "hsflow/initial_data.hpp"
#include "hsflow/parallel.hpp"
#include "hsflow/snapshot.hpp"

namespace hsflow {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCsvHeader =
    "step,time,dt,max_dw,min_eig_Q,max_abs_detQ_minus_1,period_drift,rhs_l2,q_dev,torsion_sample";

nlohmann::json diagnostics_json(const DiagnosticsRow& row) {
    const Diagnostics& d = row.diag;
    return {{"step", row.step},
            {"time", row.time},
            {"dt", row.dt},
            {"max_dw", d.max_dw},
            {"min_eig_Q", d.min_eig_q},
            {"max_abs_detQ_minus_1", d.max_abs_detq_minus_1},
            {"period_drift", d.period_drift},
            {"rhs_l2", d.rhs_l2},
            {"q_dev", d.q_dev},
            {"torsion_sample", d.torsion_sample},
            {"star7_sample", d.star7_sample}};
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << j.dump(2) << '\n';
    if (!os) throw IoError("failed writing " + path.string());
}

void make_dirs(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string snapshot_name(std::int64_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "step_%08lld.hsf", static_cast<long long>(step));
    return buf;
}

std::vector<DiagnosticsRow> read_diagnostics_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path.string() + ":1: empty diagnostics file");
    if (line != kCsvHeader) throw ValidationError(path.string() + ":1: unexpected header '" + line + "'");
    std::vector<DiagnosticsRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 10)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected 10 columns, got " +
                                  std::to_string(cells.size()));
        std::array<double, 9> v{};
        DiagnosticsRow row;
        try {
            std::size_t used = 0;
            row.step = std::stoll(cells[0], &used);
            if (used != cells[0].size()) throw std::invalid_argument(cells[0]);
            for (int c = 0; c < 9; ++c) {
                v[c] = std::stod(cells[c + 1], &used);
                if (used != cells[c + 1].size()) throw std::invalid_argument(cells[c + 1]);
            }
        } catch (const std::logic_error&) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
        row.time = v[0];
        row.dt = v[1];
        row.diag.max_dw = v[2];
        row.diag.min_eig_q = v[3];
        row.diag.max_abs_detq_minus_1 = v[4];
        row.diag.period_drift = v[5];
        row.diag.rhs_l2 = v[6];
        row.diag.q_dev = v[7];
        row.diag.torsion_sample = v[8];
        rows.push_back(row);
    }
    if (in.bad()) throw IoError("error reading " + path.string());
    return rows;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
    if (dynamic_cast<const NotPositive*>(&e) || dynamic_cast<const StepRejected*>(&e) ||
        dynamic_cast<const SingularMatrix*>(&e) || dynamic_cast<const DetNotOne*>(&e))
        return kExitNumerical;
    if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitIo;
    return kExitValidation;
}

int cmd_verify(int trials, std::uint64_t seed, std::ostream& out, const Star3Table& table) {
    const VerifyReport report = run_verify(trials, seed, table);
    out << report.to_json().dump(2) << '\n';
    return report.pass() ? kExitOk : kExitValidation;
}

int cmd_flow(const fs::path& config_path, const std::optional<fs::path>& out_dir, std::ostream& log) {
    ExperimentConfig config = load_config(config_path);
    if (out_dir) config.output_dir = out_dir->string();
    if (config.output_dir.empty()) throw ValidationError("no output directory: pass --out or set [output] dir");
    return cmd_flow(config, config.output_dir, log);
}

int cmd_flow(const ExperimentConfig& config, const fs::path& out_dir, std::ostream& log) {
    config.validate();
    const std::string hash = config_hash(config);
    make_dirs(out_dir / "snapshots");

    nlohmann::json cfg = to_json(config);
    cfg["output"]["dir"] = out_dir.string();
    write_json_file(out_dir / "config.json", {{"config", cfg}, {"config_hash", hash}});

    const Lattice lattice = config.lattice();
    const TripleField initial =
        generate_initial(lattice, config.initial, config.flow.order, config.flow.degeneration_threshold);

    const fs::path csv_path = out_dir / "diagnostics.csv";
    std::ofstream csv(csv_path, std::ios::trunc | std::ios::binary);
    if (!csv) throw IoError("cannot open " + csv_path.string() + " for writing");
    write_diagnostics_header(csv);

    std::vector<std::string> snapshots;
    RunHooks hooks;
    hooks.on_row = [&](const DiagnosticsRow& row) {
        write_diagnostics_row(csv, row);
        if (!csv) throw IoError("failed writing " + csv_path.string());
    };
    hooks.on_checkpoint = [&](const FlowState& state, const DiagnosticsRow& row) {
        const fs::path snap = out_dir / "snapshots" / snapshot_name(state.step);
        write_snapshot(snap, state.tf, state.time);
        write_sidecar(snap, {{"config_hash", hash}, {"step", state.step}, {"time", state.time},
                             {"diagnostics", diagnostics_json(row)}});
        snapshots.push_back(fs::relative(snap, out_dir).generic_string());
    };

    log << "flow: " << lattice.points() << " points, config " << hash << ", workers " << worker_count() << '\n';
    const RunResult result = run(config.flow, initial, hooks);
    csv.close();
    if (!csv) throw IoError("failed writing " + csv_path.string());

    const DiagnosticsRow& last = result.rows.back();
    nlohmann::json run_json{{"config_hash", hash},
                            {"steps", result.final_state.step},
                            {"final_time", result.final_state.time},
                            {"aborted", result.aborted},
                            {"abort_reason", result.abort_reason},
                            {"diagnostic_rows", result.rows.size()},
                            {"snapshots", snapshots},
                            {"final_diagnostics", diagnostics_json(last)}};
    write_json_file(out_dir / "run.json", run_json);

    if (result.aborted) {
        log << "flow: aborted: " << result.abort_reason << '\n';
        return kExitNumerical;
    }
    log << "flow: " << result.final_state.step << " steps to t = " << result.final_state.time
        << ", q_dev = " << last.diag.q_dev << '\n';
    return kExitOk;
}

LiftReport lift_snapshot(const fs::path& snapshot, int samples, std::uint64_t seed) {
    const Snapshot snap = read_snapshot(snapshot);
    const TripleField& tf = snap.field;
    const Lattice& lat = tf.lattice();
    const std::array<FormField, 3> dw{d(tf[0]), d(tf[1]), d(tf[2])};
    LiftReport rep;
    const int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(samples), lat.points()));
    for (std::size_t p : fiber_sample_points(lat, count, seed)) {
        const FiberLift f = lift(tf.at(p));
        std::array<Three4Form, 3> dwp;
        for (int j = 0; j < 3; ++j)
            for (int c = 0; c < 4; ++c) dwp[j].c[c] = dw[j].at(c, p);
        rep.max_star7 = std::fmax(rep.max_star7, check_star7(f.phi, f.psi, f.g7.g));
        rep.max_torsion = std::fmax(rep.max_torsion, std::fabs(torsion_trace(f.phi, assemble_dphi(dwp), f.g7.g)));
        rep.max_block = std::fmax(rep.max_block, f.g7.g.max_abs_diff(block_metric(f.q, f.g4)));
        ++rep.samples;
    }
    return rep;
}

int cmd_lift(const fs::path& snapshot, std::ostream& out) {
    const LiftReport rep = lift_snapshot(snapshot);
    nlohmann::json j{{"snapshot", snapshot.string()},
                     {"samples", rep.samples},
                     {"max_star7_residual", rep.max_star7},
                     {"max_torsion_trace", rep.max_torsion},
                     {"max_g2_block_residual", rep.max_block},
                     {"bound", 1e-9},
                     {"pass", rep.pass()}};
    const fs::path side = sidecar_path(snapshot);
    if (fs::exists(side)) {
        std::ifstream in(side);
        try {
            const auto prov = nlohmann::json::parse(in);
            if (prov.contains("config_hash")) j["config_hash"] = prov["config_hash"];
        } catch (const nlohmann::json::exception& e) {
            throw IoError("malformed sidecar " + side.string() + ": " + e.what());
        }
    }
    out << j.dump(2) << '\n';
    return rep.pass() ? kExitOk : kExitValidation;
}

RunSummary summarize_run(const fs::path& run_dir) {
    const auto rows = read_diagnostics_csv(run_dir / "diagnostics.csv");
    if (rows.empty()) throw ValidationError((run_dir / "diagnostics.csv").string() + ": no diagnostic rows");

    nlohmann::json s;
    if (fs::exists(run_dir / "run.json")) {
        std::ifstream in(run_dir / "run.json");
        try {
            const auto run = nlohmann::json::parse(in);
            for (const char* k : {"config_hash", "aborted", "abort_reason"})
                if (run.contains(k)) s[k] = run[k];
        } catch (const nlohmann::json::exception& e) {
            throw IoError("malformed " + (run_dir / "run.json").string() + ": " + e.what());
        }
    }

    double max_dw = 0.0, drift = 0.0, det = 0.0, torsion = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    std::ostringstream decay;
    decay << "step,time,q_dev,rhs_l2\n";
    char buf[128];
    for (const auto& r : rows) {
        max_dw = std::fmax(max_dw, r.diag.max_dw);
        drift = std::fmax(drift, r.diag.period_drift);
        det = std::fmax(det, r.diag.max_abs_detq_minus_1);
        torsion = std::fmax(torsion, r.diag.torsion_sample);
        min_eig = std::fmin(min_eig, r.diag.min_eig_q);
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(r.step), r.time, r.diag.q_dev,
                      r.diag.rhs_l2);
        decay << buf;
    }

    // the monotone tail: longest suffix over which q_dev never increases
    std::size_t tail_start = rows.size() - 1;
    while (tail_start > 0 && rows[tail_start - 1].diag.q_dev >= rows[tail_start].diag.q_dev) --tail_start;
    const double q0 = rows.front().diag.q_dev;
    const double q1 = rows.back().diag.q_dev;

    s["rows"] = rows.size();
    s["first_step"] = rows.front().step;
    s["last_step"] = rows.back().step;
    s["t_start"] = rows.front().time;
    s["t_end"] = rows.back().time;
    s["q_dev_start"] = q0;
    s["q_dev_end"] = q1;
    s["q_dev_ratio"] = q0 > 0.0 ? q1 / q0 : 0.0;
    s["monotone_tail_from_step"] = rows[tail_start].step;
    s["monotone_tail_rows"] = rows.size() - tail_start;
    // "monotone tail" = the last half of the run never increases q_dev
    s["q_dev_monotone_tail"] = rows.size() - tail_start >= (rows.size() + 1) / 2;
    s["max_dw"] = max_dw;
    s["max_period_drift"] = drift;
    s["max_abs_detQ_minus_1"] = det;
    s["min_eig_Q"] = min_eig;
    s["max_torsion_sample"] = torsion;
    return {s, decay.str()};
}

int cmd_report(const fs::path& run_dir, std::ostream& out) {
    const RunSummary sum = summarize_run(run_dir);
    write_json_file(run_dir / "summary.json", sum.summary);
    std::ofstream csv(run_dir / "decay.csv", std::ios::trunc | std::ios::binary);
    if (!csv) throw IoError("cannot open " + (run_dir / "decay.csv").string() + " for writing");
    csv << sum.decay_csv;
    if (!csv) throw IoError("failed writing " + (run_dir / "decay.csv").string());
    out << sum.summary.dump(2) << '\n';
    return kExitOk;
}

}  // namespace hsflow
