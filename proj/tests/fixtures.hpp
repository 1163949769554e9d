#pragma once

// Shared flow fixtures for the unit tests and the acceptance binary.

#include <array>
#include <cmath>
#include <numbers>

#include "hsflow/flow_engine.hpp"
#include "hsflow/grid_calculus.hpp"

namespace fixture {

using namespace hsflow;

/// w_i = theta_i + sum_k F_ik(x^0) e^0k with F_ik = a cos(2 pi m x^0 / L0 + phase) sampled
/// analytically. Closed both exactly and on the lattice; depends on x^0 only.
inline TripleField analytic_t3(const Lattice& lat, double amplitude) {
    static constexpr double kAmp[3][3] = {{0.9, -0.4, 0.3}, {0.2, 0.7, -0.5}, {-0.6, 0.1, 0.8}};
    static constexpr int kMode[3][3] = {{1, 2, 1}, {1, 1, 2}, {2, 1, 1}};
    TripleField tf = TripleField::constant(lat, standard_triple());
    const double l0 = lat.lengths()[0];
    for (std::size_t p = 0; p < lat.points(); ++p) {
        const double x = lat.position(p)[0];
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
                const double arg = 2.0 * std::numbers::pi * kMode[i][k] * x / l0 + 0.7 * (i + 1) + 0.3 * k;
                tf[i].at(k, p) += amplitude * kAmp[i][k] * std::cos(arg);
            }
    }
    return tf;
}

/// max |rhs_n - rhs_ref| over the coarse points, ref on n_ref along x^0.
inline double rhs_error(int n, int n_ref, int order, double amplitude) {
    const Lattice coarse({n, 4, 4, 4}, {1, 1, 1, 1});
    const Lattice fine({n_ref, 4, 4, 4}, {1, 1, 1, 1});
    const TripleField rc = rhs(analytic_t3(coarse, amplitude), order);
    const TripleField rf = rhs(analytic_t3(fine, amplitude), order);
    const int ratio = n_ref / n;
    double err = 0.0;
    for (std::size_t p = 0; p < coarse.points(); ++p) {
        auto c = coarse.coords(p);
        c[0] *= ratio;
        const std::size_t q = fine.index(c);
        for (int i = 0; i < 3; ++i)
            for (int comp = 0; comp < 6; ++comp) err = std::fmax(err, std::fabs(rc[i].at(comp, p) - rf[i].at(comp, q)));
    }
    return err;
}

/// (error at n0, error at 2 n0) against a 256-point reference.
inline std::array<double, 2> rhs_convergence(int order, int n0 = 32, double amplitude = 0.05) {
    return {rhs_error(n0, 256, order, amplitude), rhs_error(2 * n0, 256, order, amplitude)};
}

}  // namespace fixture
