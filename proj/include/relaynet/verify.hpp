#pragma once

// Seeded randomized invariant suites behind `relaynet verify`.

#include "relaynet/channel_model.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace relaynet {

struct SuiteResult {
    std::string name;
    int passed = 0;
    int failed = 0;
    /// Largest deviation seen; a draw fails when it exceeds the tolerance.
    double worst = -INFINITY;
    std::string first_failure;

    bool ok() const noexcept { return failed == 0; }
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int draws = 0;
    std::vector<SuiteResult> suites;

    bool ok() const noexcept;
};

/// Random single relay network: powers, noises and gains log-uniform over
/// [0.1, 10].
RelayNetwork random_single_relay(std::mt19937_64& rng);
/// Same ranges, T nodes, all links present.
RelayNetwork random_network(std::mt19937_64& rng, int t);

/// Broadcast mutual information at alpha = 0 versus a 101-point alpha grid.
SuiteResult verify_broadcast_alpha_t3(std::mt19937_64& rng, int draws);
/// Two-relay conditional mutual information across a 101-point beta grid.
SuiteResult verify_broadcast_beta_t4(std::mt19937_64& rng, int draws);
/// DF, CF and multihop never exceed the cut-set bound.
SuiteResult verify_dominance(std::mt19937_64& rng, int draws);
/// Closed-form CF rate versus the determinant route, random profiles.
SuiteResult verify_psi_identity(std::mt19937_64& rng, int draws);
/// Constraint-optimised CF never beats the closed-form single relay CF.
SuiteResult verify_cf_t2_bound(std::mt19937_64& rng, int draws);

VerifyReport run_verification(std::uint64_t seed, int draws);

} // namespace relaynet
