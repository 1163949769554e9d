#include "hsflow/flow_engine.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "hsflow/errors.hpp"
#include "hsflow/fiber_g2.hpp"
#include "hsflow/parallel.hpp"

namespace hsflow {

namespace {

constexpr double kClosedTolerance = 1e-10;

TripleField rhs_from(const TripleField& tf, const PointwiseGeometry& geo, int order) {
    const Lattice& lat = tf.lattice();
    const std::size_t n = tf.points();
    const HodgeField stars = HodgeField::build(geo.g, geo.mu);

    std::vector<SymMat3> qinv(n);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) qinv[p] = inv3(geo.q[p]);
    });

    // sigma_k = Q^{kl} w_l, then d* sigma_k
    std::array<FormField, 3> codiffs{FormField(lat, 1), FormField(lat, 1), FormField(lat, 1)};
    for (int k = 0; k < 3; ++k) {
        FormField sigma(lat, 2);
        parallel_for(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p)
                for (int c = 0; c < 6; ++c)
                    sigma.at(c, p) = qinv[p](k, 0) * tf[0].at(c, p) + qinv[p](k, 1) * tf[1].at(c, p) +
                                     qinv[p](k, 2) * tf[2].at(c, p);
        });
        codiffs[k] = codiff2(sigma, stars, order);
    }

    // d( Q_ik d* sigma_k )
    TripleField out(lat);
    for (int i = 0; i < 3; ++i) {
        FormField gamma(lat, 1);
        parallel_for(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p)
                for (int c = 0; c < 4; ++c)
                    gamma.at(c, p) = geo.q[p](i, 0) * codiffs[0].at(c, p) + geo.q[p](i, 1) * codiffs[1].at(c, p) +
                                     geo.q[p](i, 2) * codiffs[2].at(c, p);
        });
        out[i] = d(gamma, order);
    }
    return out;
}

const PointwiseGeometry& ensure_geometry(FlowState& state, const FlowConfig& config) {
    if (!state.geometry) state.geometry = pointwise_normalize(state.tf, config.degeneration_threshold);
    return *state.geometry;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void FlowConfig::validate() const {
    if (dt_policy == DtPolicy::fixed && !(dt > 0.0)) throw ValidationError("flow: fixed dt must be positive");
    if (dt_policy == DtPolicy::cfl && !(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("flow: cfl factor must lie in (0, 1]");
    if (!(t_end >= 0.0)) throw ValidationError("flow: t_end must be non-negative");
    if (t_end == 0.0 && max_steps <= 0) throw ValidationError("flow: need t_end > 0 or max_steps > 0");
    if (order != 2 && order != 4) throw ValidationError("flow: stencil order must be 2 or 4");
    if (diagnostic_every < 1) throw ValidationError("flow: diagnostic cadence must be >= 1");
    if (checkpoint_every < 0) throw ValidationError("flow: checkpoint cadence must be >= 0");
    if (!(degeneration_threshold >= 0.0)) throw ValidationError("flow: degeneration threshold must be >= 0");
    if (fiber_samples < 0) throw ValidationError("flow: fiber sample count must be >= 0");
}

FlowState FlowState::initialize(TripleField tf, const FlowConfig& config) {
    double max_dw = 0.0;
    for (int i = 0; i < 3; ++i) max_dw = std::fmax(max_dw, d(tf[i], config.order).max_abs());
    if (max_dw > kClosedTolerance)
        throw ValidationError("initial triple is not closed: max |dw| = " + format_double(max_dw));
    FlowState s{0.0, 0, std::move(tf), {}, std::nullopt, std::nullopt};
    s.initial_periods = triple_periods(s.tf);
    s.geometry = pointwise_normalize(s.tf, config.degeneration_threshold);
    return s;
}

TripleField rhs(const TripleField& tf, int order, double degeneration_threshold) {
    return rhs_from(tf, pointwise_normalize(tf, degeneration_threshold), order);
}

TripleField rhs(FlowState& state, const FlowConfig& config) {
    if (!state.rhs_cache) state.rhs_cache = rhs_from(state.tf, ensure_geometry(state, config), config.order);
    return *state.rhs_cache;
}

double cfl_dt(FlowState& state, const FlowConfig& config) {
    const PointwiseGeometry& geo = ensure_geometry(state, config);
    double lambda = 0.0;
    for (std::size_t p = 0; p < geo.q.size(); ++p) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eq;
        eq.computeDirect(geo.q[p].dense(), Eigen::EigenvaluesOnly);
        const double g_min = geo.g[p].min_eigenvalue();
        lambda = std::fmax(lambda, eq.eigenvalues()(2) / g_min);
    }
    const double h = state.tf.lattice().min_h();
    return config.cfl * h * h / lambda;
}

FlowState step(FlowState state, double dt, const FlowConfig& config) {
    if (!(dt > 0.0)) throw ValidationError("step: dt must be positive");
    auto eval = [&](const TripleField& x) {
        try {
            return rhs(x, config.order, config.degeneration_threshold);
        } catch (const NotPositive& e) {
            throw StepRejected(std::string("stage evaluation left the positive cone: ") + e.what(), 0.5 * dt);
        }
    };

    const TripleField k1 = rhs(state, config);
    TripleField next = state.tf;
    if (config.integrator == Integrator::euler) {
        next.axpy(dt, k1);
    } else {
        TripleField stage = state.tf;
        stage.axpy(0.5 * dt, k1);
        const TripleField k2 = eval(stage);
        stage = state.tf;
        stage.axpy(0.5 * dt, k2);
        const TripleField k3 = eval(stage);
        stage = state.tf;
        stage.axpy(dt, k3);
        const TripleField k4 = eval(stage);
        // accumulate the weighted sum first, then add once
        TripleField incr = k1;
        incr.axpy(2.0, k2).axpy(2.0, k3).axpy(1.0, k4);
        next.axpy(dt / 6.0, incr);
    }

    FlowState out{state.time + dt, state.step + 1, std::move(next), state.initial_periods, std::nullopt, std::nullopt};
    try {
        out.geometry = pointwise_normalize(out.tf, config.degeneration_threshold);
    } catch (const NotPositive& e) {
        throw StepRejected(std::string("post-step positivity guard failed: ") + e.what(), 0.5 * dt);
    }
    return out;
}

PeriodTable triple_periods(const TripleField& tf) {
    PeriodTable t{};
    for (int i = 0; i < 3; ++i) t[i] = periods(tf[i]);
    return t;
}

std::vector<std::size_t> fiber_sample_points(const Lattice& lattice, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) pts.push_back(static_cast<std::size_t>(rng() % lattice.points()));
    return pts;
}

Diagnostics diagnostics(FlowState& state, const FlowConfig& config) {
    Diagnostics out;
    const PointwiseGeometry& geo = ensure_geometry(state, config);
    const Lattice& lat = state.tf.lattice();

    std::array<FormField, 3> dw{FormField(lat, 3), FormField(lat, 3), FormField(lat, 3)};
    for (int i = 0; i < 3; ++i) {
        dw[i] = d(state.tf[i], config.order);
        out.max_dw = std::fmax(out.max_dw, dw[i].max_abs());
    }

    SymMat3 mean;
    out.min_eig_q = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < geo.q.size(); ++p) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
        es.computeDirect(geo.q[p].dense(), Eigen::EigenvaluesOnly);
        out.min_eig_q = std::fmin(out.min_eig_q, es.eigenvalues()(0));
        out.max_abs_detq_minus_1 = std::fmax(out.max_abs_detq_minus_1, std::fabs(det3(geo.q[p]) - 1.0));
        mean = mean + geo.q[p];
    }
    mean *= 1.0 / static_cast<double>(geo.q.size());
    for (const auto& q : geo.q) out.q_dev = std::fmax(out.q_dev, (q.dense() - mean.dense()).norm());

    const PeriodTable now = triple_periods(state.tf);
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 6; ++c)
            out.period_drift = std::fmax(out.period_drift, std::fabs(now[i][c] - state.initial_periods[i][c]));

    const TripleField& r = rhs(state, config);
    double sq = 0.0;
    for (int i = 0; i < 3; ++i)
        for (double v : r[i].raw()) sq += v * v;
    out.rhs_l2 = std::sqrt(sq * lat.cell_volume());

    for (std::size_t p : fiber_sample_points(lat, config.fiber_samples, config.seed)) {
        const Triple t = state.tf.at(p);
        std::array<Three4Form, 3> dwp;
        for (int j = 0; j < 3; ++j)
            for (int c = 0; c < 4; ++c) dwp[j].c[c] = dw[j].at(c, p);
        const FiberLift fl = lift(t);
        out.torsion_sample = std::fmax(out.torsion_sample, std::fabs(torsion_trace(fl.phi, assemble_dphi(dwp), fl.g7.g)));
        out.star7_sample = std::fmax(out.star7_sample, check_star7(fl.phi, fl.psi, fl.g7.g));
    }
    return out;
}

void write_diagnostics_header(std::ostream& os) {
    os << "step,time,dt,max_dw,min_eig_Q,max_abs_detQ_minus_1,period_drift,rhs_l2,q_dev,torsion_sample\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& row) {
    const Diagnostics& g = row.diag;
    os << row.step << ',' << format_double(row.time) << ',' << format_double(row.dt) << ',' << format_double(g.max_dw)
       << ',' << format_double(g.min_eig_q) << ',' << format_double(g.max_abs_detq_minus_1) << ','
       << format_double(g.period_drift) << ',' << format_double(g.rhs_l2) << ',' << format_double(g.q_dev) << ','
       << format_double(g.torsion_sample) << '\n';
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
    std::ostringstream os;
    write_diagnostics_header(os);
    for (const auto& r : rows) write_diagnostics_row(os, r);
    return os.str();
}

RunResult run(const FlowConfig& config, TripleField initial, const RunHooks& hooks) {
    config.validate();
    RunResult result{{}, FlowState::initialize(std::move(initial), config), false, {}};
    FlowState& state = result.final_state;

    auto emit = [&](double dt) {
        DiagnosticsRow row{state.step, state.time, dt, diagnostics(state, config)};
        result.rows.push_back(row);
        if (hooks.on_row) hooks.on_row(row);
        return row;
    };
    auto finished = [&] {
        if (config.max_steps > 0) return state.step >= config.max_steps;
        return config.t_end - state.time <= 1e-12 * std::fmax(1.0, config.t_end);
    };

    DiagnosticsRow last = emit(0.0);
    bool last_emitted = true;
    double dt = 0.0;
    while (!finished()) {
        dt = config.dt_policy == DtPolicy::fixed ? config.dt : cfl_dt(state, config);
        if (config.max_steps <= 0 && state.time + dt > config.t_end) dt = config.t_end - state.time;
        try {
            state = step(std::move(state), dt, config);
        } catch (const StepRejected& e) {
            std::ostringstream msg;
            msg << "step " << state.step + 1 << " at t = " << format_double(state.time) << " with dt = "
                << format_double(dt) << " rejected: " << e.what() << " (suggested dt " << format_double(e.suggested_dt())
                << ")";
            result.aborted = true;
            result.abort_reason = msg.str();
            break;
        }
        last_emitted = false;
        if (state.step % config.diagnostic_every == 0) {
            last = emit(dt);
            last_emitted = true;
        }
        if (config.checkpoint_every > 0 && state.step % config.checkpoint_every == 0) {
            if (!last_emitted) {
                last = emit(dt);
                last_emitted = true;
            }
            if (hooks.on_checkpoint) hooks.on_checkpoint(state, last);
        }
    }
    if (!last_emitted) last = emit(dt);
    if (hooks.on_checkpoint && (config.checkpoint_every == 0 || state.step % config.checkpoint_every != 0 || result.aborted))
        hooks.on_checkpoint(state, last);
    return result;
}

}  // namespace hsflow
