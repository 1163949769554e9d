#pragma once

// Randomised identity suites. Each suite draws its own samples from a shared
// generator and reports the worst residual against a fixed bound.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsflow/fiber_g2.hpp"
#include "hsflow/sampling.hpp"

namespace hsflow {

struct IdentityResult {
    std::string name;
    double max_residual = 0.0;
    double bound = 0.0;
    int samples = 0;
    bool pass() const { return max_residual <= bound; }
};

/// eps_ijk S_ip S_jq S_kl = det(S) eps_pql over random 3x3 matrices.
IdentityResult check_levi_civita(Rng& rng, int samples);
/// mu_w = det(Q)^{1/3} mu for w = M theta, relative error.
IdentityResult check_volume_lemma(Rng& rng, int samples, double max_cond = 100.0);
/// sigma_i ^ sigma_j = 2 Q^{ij} mu_w for the dual triple.
IdentityResult check_dual_gram(Rng& rng, int samples);
/// *w_i = w_i for the induced metric.
IdentityResult check_self_duality(Rng& rng, int samples);
/// Closed-form T^3 stars against the generic metric star, det Q = 1.
IdentityResult check_star3_one_forms(Rng& rng, int samples, const Star3Table& table = star3_T3);
IdentityResult check_star3_two_forms(Rng& rng, int samples, const Star3Table& table = star3_T3);
/// g_phi = Q + g_w on the fiber.
IdentityResult check_g2_block(Rng& rng, int samples);
/// *_7 psi = phi.
IdentityResult check_star7(Rng& rng, int samples);
/// Tr T = 1/4 *(phi ^ dphi) at lattice points of a smooth non-closed triple field.
IdentityResult check_torsion_trace(Rng& rng, int samples);

struct VerifyReport {
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<IdentityResult> results;

    bool pass() const;
    std::vector<std::string> failing() const;
    nlohmann::json to_json() const;
};

VerifyReport run_verify(int trials, std::uint64_t seed, const Star3Table& table = star3_T3);

}  // namespace hsflow
