#include "hsflow/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hsflow/errors.hpp"
#include "hsflow/sampling.hpp"

namespace hsflow {

namespace {

struct Mode {
    std::array<int, 4> k;
    std::array<std::array<double, 4>, 3> cos_amp;
    std::array<std::array<double, 4>, 3> sin_amp;
};

std::vector<Mode> draw_modes(const InitialSpec& spec) {
    Rng rng(spec.seed);
    std::vector<Mode> modes;
    const bool x0_only = spec.generator == "t3-invariant";
    for (int m = 0; m < spec.modes; ++m) {
        Mode mode{};
        if (x0_only) {
            mode.k = {m + 1, 0, 0, 0};
        } else {
            do {
                for (int a = 0; a < 4; ++a) mode.k[a] = static_cast<int>(rng() % 3) - 1;
            } while (mode.k == std::array<int, 4>{0, 0, 0, 0});
        }
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 4; ++b) {
                mode.cos_amp[i][b] = uniform(rng, -1.0, 1.0);
                mode.sin_amp[i][b] = uniform(rng, -1.0, 1.0);
            }
        modes.push_back(mode);
    }
    return modes;
}

TripleField assemble(const Lattice& lattice, const std::array<FormField, 3>& dalpha, double amplitude) {
    TripleField tf = TripleField::constant(lattice, standard_triple());
    for (int i = 0; i < 3; ++i) tf[i].axpy(amplitude, dalpha[i]);
    return tf;
}

bool admissible(const Lattice& lattice, const std::array<FormField, 3>& dalpha, double amplitude, double threshold) {
    try {
        pointwise_normalize(assemble(lattice, dalpha, amplitude), threshold);
        return true;
    } catch (const NotPositive&) {
        return false;
    }
}

}  // namespace

std::array<FormField, 3> perturbation_potentials(const Lattice& lattice, const InitialSpec& spec) {
    std::array<FormField, 3> alpha{FormField(lattice, 1), FormField(lattice, 1), FormField(lattice, 1)};
    const auto modes = draw_modes(spec);
    const auto& len = lattice.lengths();
    for (std::size_t p = 0; p < lattice.points(); ++p) {
        const auto x = lattice.position(p);
        for (const Mode& m : modes) {
            double phase = 0.0;
            double knorm2 = 0.0;
            for (int a = 0; a < 4; ++a) {
                const double ka = 2.0 * std::numbers::pi * m.k[a] / len[a];
                phase += ka * x[a];
                knorm2 += ka * ka;
            }
            // 1/|k| keeps d(alpha) of order one
            const double scale = 1.0 / std::sqrt(knorm2);
            const double c = std::cos(phase);
            const double s = std::sin(phase);
            for (int i = 0; i < 3; ++i)
                for (int b = 0; b < 4; ++b) alpha[i].at(b, p) += scale * (m.cos_amp[i][b] * c + m.sin_amp[i][b] * s);
        }
    }
    return alpha;
}

TripleField generate_initial(const Lattice& lattice, const InitialSpec& spec, int order, double degeneration_threshold) {
    if (spec.generator == "hyperkahler-standard") return TripleField::constant(lattice, standard_triple());
    if (spec.generator != "t3-invariant" && spec.generator != "exact-perturbation")
        throw ValidationError("unknown initial-data generator '" + spec.generator + "'");
    if (spec.modes < 1) throw ValidationError("initial data needs at least one mode");
    if (!(spec.amplitude >= 0.0)) throw ValidationError("initial amplitude must be non-negative");
    if (spec.amplitude == 0.0) return TripleField::constant(lattice, standard_triple());

    const auto alpha = perturbation_potentials(lattice, spec);
    std::array<FormField, 3> dalpha{d(alpha[0], order), d(alpha[1], order), d(alpha[2], order)};
    if (admissible(lattice, dalpha, spec.amplitude, degeneration_threshold))
        return assemble(lattice, dalpha, spec.amplitude);

    double lo = 0.0;
    double hi = spec.amplitude;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (admissible(lattice, dalpha, mid, degeneration_threshold) ? lo : hi) = mid;
    }
    std::ostringstream msg;
    msg << "initial data with amplitude " << spec.amplitude << " leaves the positive cone; max admissible sampled amplitude is "
        << lo;
    throw NotPositive(msg.str());
}

}  // namespace hsflow
