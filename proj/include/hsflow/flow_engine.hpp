#pragma once

// Explicit time integration of the hypersymplectic flow
//
//     d/dt w_i = d( Q_ik d*( Q^{kl} w_l ) )
//
// on a TripleField. Q is re-normalised against mu_w at every evaluation so
// det Q = 1 everywhere. The same PDE is the descent of the coclosed G2
// coflow for the dual triple, so the stored field can be read either as the
// hypersymplectic triple itself or as the evolved dual triple.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hsflow/grid_calculus.hpp"

namespace hsflow {

enum class DtPolicy { fixed, cfl };
enum class Integrator { rk4, euler };

struct FlowConfig {
    DtPolicy dt_policy = DtPolicy::cfl;
    double dt = 0.0;    // used with DtPolicy::fixed
    double cfl = 0.25;  // c in dt = c h_min^2 / Lambda
    double t_end = 0.0;
    std::int64_t max_steps = 0;  // when > 0 the run stops after this many steps
    int order = 4;
    Integrator integrator = Integrator::rk4;
    int diagnostic_every = 1;
    int checkpoint_every = 0;  // 0: final state only
    double degeneration_threshold = 1e-6;
    int fiber_samples = 8;
    std::uint64_t seed = 1;

    void validate() const;
};

using PeriodTable = std::array<std::array<double, 6>, 3>;

struct Diagnostics {
    double max_dw = 0.0;
    double min_eig_q = 0.0;
    double max_abs_detq_minus_1 = 0.0;
    double period_drift = 0.0;
    double rhs_l2 = 0.0;
    double q_dev = 0.0;
    double torsion_sample = 0.0;
    /// max |*psi - phi| at the sampled fibers; reported in sidecars only.
    double star7_sample = 0.0;
};

struct FlowState {
    double time = 0.0;
    std::int64_t step = 0;
    TripleField tf;
    PeriodTable initial_periods{};
    std::optional<PointwiseGeometry> geometry;
    std::optional<TripleField> rhs_cache;

    /// Validates closedness (max |dw| <= 1e-10) and positivity, records the periods.
    static FlowState initialize(TripleField tf, const FlowConfig& config);
};

/// The right-hand side; the result lies in the image of the discrete d.
TripleField rhs(const TripleField& tf, int order = 4, double degeneration_threshold = 0.0);
TripleField rhs(FlowState& state, const FlowConfig& config);

/// c h_min^2 / Lambda with Lambda = max over points of maxeig(Q) * maxeig(g^{-1}).
double cfl_dt(FlowState& state, const FlowConfig& config);

/// One explicit step. Throws StepRejected if a stage or the result leaves the
/// positive cone.
FlowState step(FlowState state, double dt, const FlowConfig& config);

PeriodTable triple_periods(const TripleField& tf);

/// Flat indices of the fibers sampled for torsion/star checks.
std::vector<std::size_t> fiber_sample_points(const Lattice& lattice, int count, std::uint64_t seed);

Diagnostics diagnostics(FlowState& state, const FlowConfig& config);

struct DiagnosticsRow {
    std::int64_t step = 0;
    double time = 0.0;
    double dt = 0.0;
    Diagnostics diag;
};

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& row);
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);

struct RunHooks {
    std::function<void(const DiagnosticsRow&)> on_row;
    std::function<void(const FlowState&, const DiagnosticsRow&)> on_checkpoint;
};

struct RunResult {
    std::vector<DiagnosticsRow> rows;
    FlowState final_state;
    bool aborted = false;
    std::string abort_reason;
};

/// Integrates to t_end (or max_steps). Initial-data validation failures
/// throw; numerical aborts during the run are reported in the result.
RunResult run(const FlowConfig& config, TripleField initial, const RunHooks& hooks = {});

}  // namespace hsflow
