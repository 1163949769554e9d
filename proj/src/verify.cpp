#include "hsflow/verify.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hsflow/grid_calculus.hpp"

namespace hsflow {

namespace {

// T^3 coefficient tuples <-> lexicographic forms on R^3.
// Two-forms: (dt^23, dt^31, dt^12) vs lex (dt^12, dt^13, dt^23).
ext::Form<3, 2> t3_two_to_lex(const T3Coeffs& c) { return ext::Form<3, 2>{{c[2], -c[1], c[0]}}; }
T3Coeffs t3_two_from_lex(const ext::Form<3, 2>& f) { return {f.c[2], -f.c[1], f.c[0]}; }

double max_diff(const T3Coeffs& a, const T3Coeffs& b) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

IdentityResult make(std::string name, double bound) { return IdentityResult{std::move(name), 0.0, bound, 0}; }

void record(IdentityResult& r, double residual) {
    // fmax would drop a NaN; it has to fail the suite
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    r.max_residual = std::fmax(r.max_residual, residual);
    ++r.samples;
}

// theta + eps * (non-exact smooth modes), positive for small eps
TripleField non_closed_field(Rng& rng, const Lattice& lat, double eps) {
    TripleField tf = TripleField::constant(lat, standard_triple());
    const auto& len = lat.lengths();
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 6; ++c) {
            std::array<int, 4> k{};
            for (auto& ka : k) ka = static_cast<int>(rng() % 3) - 1;
            const double amp = uniform(rng, -1.0, 1.0);
            const double shift = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            for (std::size_t p = 0; p < lat.points(); ++p) {
                const auto x = lat.position(p);
                double phase = shift;
                for (int a = 0; a < 4; ++a) phase += 2.0 * std::numbers::pi * k[a] * x[a] / len[a];
                tf[i].at(c, p) += eps * amp * std::sin(phase);
            }
        }
    return tf;
}

}  // namespace

IdentityResult check_levi_civita(Rng& rng, int samples) {
    IdentityResult r = make("levi_civita_contraction", 1e-10);
    for (int s = 0; s < samples; ++s) record(r, levi_civita_det_check(random_mat3(rng)));
    return r;
}

IdentityResult check_volume_lemma(Rng& rng, int samples, double max_cond) {
    IdentityResult r = make("volume_lemma", 1e-9);
    const VolumeCoeff mu{1.0};
    for (int s = 0; s < samples; ++s) {
        const Triple t = random_combination_triple(rng, max_cond);
        const double mu_w = metric_from_triple(t).mu.m();
        const double expected = std::cbrt(det3(gram(t, mu))) * mu.m();
        record(r, std::fabs(mu_w - expected) / mu_w);
    }
    return r;
}

IdentityResult check_dual_gram(Rng& rng, int samples) {
    IdentityResult r = make("dual_gram", 1e-9);
    for (int s = 0; s < samples; ++s) {
        const Triple t = random_positive_triple(rng);
        const Normalized n = normalize(t);
        const Triple sigma = dual_triple(t, n.q);
        const SymMat3 qi = inv3(n.q);
        record(r, gram(sigma, n.mu).max_abs_diff(qi) / qi.max_abs());
    }
    return r;
}

IdentityResult check_self_duality(Rng& rng, int samples) {
    IdentityResult r = make("self_duality", 1e-9);
    for (int s = 0; s < samples; ++s) {
        const Triple t = random_positive_triple(rng);
        const TripleMetric tm = metric_from_triple(t);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::fmax(worst, (hodge2(t[i], tm.g, tm.mu) - t[i]).max_abs() / t[i].max_abs());
        record(r, worst);
    }
    return r;
}

IdentityResult check_star3_one_forms(Rng& rng, int samples, const Star3Table& table) {
    IdentityResult r = make("star3_one_forms", 1e-10);
    for (int s = 0; s < samples; ++s) {
        const SymMat3 q = random_det1_spd(rng);
        double worst = 0.0;
        for (int b = 0; b < 3; ++b) {
            T3Coeffs c{};
            c[b] = 1.0;
            const auto oracle = ext::hodge(ext::Form<3, 1>{{c[0], c[1], c[2]}}, q);
            worst = std::fmax(worst, max_diff(table(1, c, q), t3_two_from_lex(oracle)));
        }
        record(r, worst);
    }
    return r;
}

IdentityResult check_star3_two_forms(Rng& rng, int samples, const Star3Table& table) {
    IdentityResult r = make("star3_two_forms", 1e-10);
    for (int s = 0; s < samples; ++s) {
        const SymMat3 q = random_det1_spd(rng);
        double worst = 0.0;
        for (int b = 0; b < 3; ++b) {
            T3Coeffs c{};
            c[b] = 1.0;
            const auto oracle = ext::hodge(t3_two_to_lex(c), q);
            worst = std::fmax(worst, max_diff(table(2, c, q), {oracle.c[0], oracle.c[1], oracle.c[2]}));
        }
        record(r, worst);
    }
    return r;
}

IdentityResult check_g2_block(Rng& rng, int samples) {
    IdentityResult r = make("g2_metric_block", 1e-9);
    for (int s = 0; s < samples; ++s) {
        const FiberLift f = lift(random_positive_triple(rng));
        record(r, f.g7.g.max_abs_diff(block_metric(f.q, f.g4)));
    }
    return r;
}

IdentityResult check_star7(Rng& rng, int samples) {
    IdentityResult r = make("star7_psi_phi", 1e-9);
    for (int s = 0; s < samples; ++s) {
        const FiberLift f = lift(random_positive_triple(rng));
        record(r, check_star7(f.phi, f.psi, f.g7.g));
    }
    return r;
}

IdentityResult check_torsion_trace(Rng& rng, int samples) {
    IdentityResult r = make("torsion_trace", 1e-9);
    const Lattice lat({8, 4, 4, 4}, {1.0, 1.0, 1.0, 1.0});
    const TripleField tf = non_closed_field(rng, lat, 0.05);
    const std::array<FormField, 3> dw{d(tf[0]), d(tf[1]), d(tf[2])};
    for (int s = 0; s < samples; ++s) {
        const std::size_t p = rng() % lat.points();
        std::array<Three4Form, 3> domega;
        for (int j = 0; j < 3; ++j)
            for (int c = 0; c < 4; ++c) domega[j].c[c] = dw[j].at(c, p);
        const FiberLift f = lift(tf.at(p));
        record(r, std::fabs(torsion_trace(f.phi, assemble_dphi(domega), f.g7.g)));
    }
    return r;
}

bool VerifyReport::pass() const {
    for (const auto& r : results)
        if (!r.pass()) return false;
    return !results.empty();
}

std::vector<std::string> VerifyReport::failing() const {
    std::vector<std::string> out;
    for (const auto& r : results)
        if (!r.pass()) out.push_back(r.name);
    return out;
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& r : results)
        ids.push_back({{"name", r.name}, {"max_residual", r.max_residual}, {"bound", r.bound}, {"samples", r.samples},
                       {"pass", r.pass()}});
    return {{"trials", trials}, {"seed", seed}, {"pass", pass()}, {"failing", failing()}, {"identities", ids}};
}

VerifyReport run_verify(int trials, std::uint64_t seed, const Star3Table& table) {
    if (trials < 1) throw ValidationError("verify: trials must be >= 1");
    VerifyReport report{trials, seed, {}};
    Rng rng(seed);
    report.results.push_back(check_levi_civita(rng, trials));
    report.results.push_back(check_volume_lemma(rng, trials));
    report.results.push_back(check_dual_gram(rng, trials));
    report.results.push_back(check_self_duality(rng, trials));
    report.results.push_back(check_star3_one_forms(rng, trials, table));
    report.results.push_back(check_star3_two_forms(rng, trials, table));
    report.results.push_back(check_g2_block(rng, trials));
    report.results.push_back(check_star7(rng, trials));
    report.results.push_back(check_torsion_trace(rng, trials));
    return report;
}

}  // namespace hsflow
