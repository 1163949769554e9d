#pragma once

// Random fixtures for the identity suites. Draws use only raw mt19937_64
// output so sequences are identical across standard libraries.

#include <cstdint>
#include <random>

#include "hsflow/symmat.hpp"
#include "hsflow/triple_algebra.hpp"

namespace hsflow {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Entries uniform in [lo, hi].
Mat3 random_mat3(Rng& rng, double lo = -1.0, double hi = 1.0);

/// Invertible M with cond(M) <= max_cond and det M > 0.
Mat3 random_invertible(Rng& rng, double max_cond = 100.0);

/// Random 4x4 coframe change with det > 0 and cond <= max_cond.
Eigen::Matrix4d random_coframe(Rng& rng, double max_cond = 20.0);

/// w_i = M_il theta_l with theta the standard triple.
Triple random_combination_triple(Rng& rng, double max_cond = 100.0);

/// w_i = M_il (E^* theta)_l: generic positive triple with a non-conformal metric.
Triple random_positive_triple(Rng& rng, double max_cond = 100.0);

/// Symmetric positive definite with det = 1.
SymMat3 random_det1_spd(Rng& rng, double spread = 1.0);

}  // namespace hsflow
