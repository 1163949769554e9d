#pragma once

#include <cstdint>
#include <string>

#include "hsflow/grid_calculus.hpp"

namespace hsflow {

/// Named initial-data generators:
///   hyperkahler-standard  constant standard triple
///   t3-invariant          theta_i + d(alpha_i), alpha_i sinusoidal in x^0 only
///   exact-perturbation    theta_i + d(alpha_i), alpha_i with full 4D low modes
/// The potentials are differentiated with the lattice stencils, so the
/// result is closed to roundoff and has the periods of the standard triple.
struct InitialSpec {
    std::string generator = "hyperkahler-standard";
    double amplitude = 0.0;
    std::uint64_t seed = 1;
    int modes = 2;
};

TripleField generate_initial(const Lattice& lattice, const InitialSpec& spec, int order = 4,
                             double degeneration_threshold = 1e-6);

/// The potentials alpha_i (one-form fields) used for the perturbation, at unit amplitude.
std::array<FormField, 3> perturbation_potentials(const Lattice& lattice, const InitialSpec& spec);

}  // namespace hsflow
