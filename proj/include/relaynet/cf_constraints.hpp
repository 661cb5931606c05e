#pragma once

// Feasibility of a quantisation profile for general-T compress-and-forward.
//
// For every non-empty relay subset S, partition {B_m} of S and routing
// r(m) in {2..T} \ B_m, the Gaussian sufficient condition reads
//
//   1/2 log( Lambda(S) / prod_{s in S} Q_s )
//       <= sum_m 1/2 log( 1 + sum_{i in B_m, i != r(m)} g_{i r(m)} P_i / (g_{1 r(m)} P1 + N_{r(m)}) )
//
// i.e. prod Q_s >= Lambda(S) / prod_m [1 + ...]. "lhs" and "rhs" below are
// the two sides of the log form, in the current rate unit.
//
// `forall` requires every (partition, routing) instance to hold; `exists`
// requires, for every S, at least one instance to hold. Relays with Q = +inf
// are removed from the relay set before enumeration: they appear neither in
// S nor as routing targets.

#include "relaynet/channel_model.hpp"
#include "relaynet/opt_core.hpp"
#include "relaynet/strategy_rates.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace relaynet {

enum class ConstraintMode { forall, exists };

const char* to_string(ConstraintMode mode) noexcept;
ConstraintMode constraint_mode_from_string(const std::string& name);

struct ConstraintInstance {
    std::vector<int> subset;               // S, ascending node ids
    std::vector<std::vector<int>> blocks;  // partition of S
    std::vector<int> routing;              // r(m), one per block
    double lhs = 0.0;
    double rhs = 0.0;

    double slack() const noexcept { return rhs - lhs; }
    bool holds() const noexcept { return lhs <= rhs; }
    /// e.g. "S={2,3} B={{2},{3}} r=(3,4)".
    std::string label() const;
};

/// Visits every (S, partition, routing) over `relays` in the documented
/// order: S by bitmask ascending (bit k = k-th relay), partitions in
/// restricted-growth-string order, routings lexicographic. Only the
/// skeleton fields are filled. Throws CapacityError above `relay_cap`.
void for_each_constraint(const RelayNetwork& net, const std::vector<int>& relays, int relay_cap,
                         const std::function<void(const ConstraintInstance&)>& visit);

/// Skeletons for the full relay set.
std::vector<ConstraintInstance> enumerate_constraints(const RelayNetwork& net,
                                                      int relay_cap = kDefaultPartitionCap);

/// Fills lhs/rhs of one instance, using lambda_det for the left side.
ConstraintInstance evaluate_constraint(const RelayNetwork& net, const QuantizationProfile& q,
                                       ConstraintInstance instance);

struct ConstraintReport {
    bool pass = true;
    ConstraintMode mode = ConstraintMode::forall;
    /// Number of relay subsets S checked.
    std::size_t subsets = 0;
    /// Instance with the smallest slack (forall), or, in exists mode, the best
    /// instance of the subset whose best slack is smallest. Empty when no
    /// relay is active.
    std::optional<ConstraintInstance> tightest;
    double slack = 0.0;
};

/// Precomputed constraint family of one network. Right-hand sides do not
/// depend on Q, so for each subset only its binding instance is kept: the
/// minimum-rhs instance for forall, the maximum-rhs instance for exists. Per
/// block the extremal routing is chosen independently since the rhs is a sum
/// over blocks.
class ConstraintSystem {
public:
    ConstraintSystem(const RelayNetwork& net, std::vector<int> active_relays, ConstraintMode mode,
                     int relay_cap = kDefaultPartitionCap);

    const std::vector<int>& active_relays() const noexcept { return active_; }
    ConstraintMode mode() const noexcept { return mode_; }

    /// Left side in nats, via the determinant identity
    /// Lambda(S)/prod Q = prod(1 + N_s/Q_s) * (1 + P1 sum g1s/(N_s + Q_s)).
    double lhs_nats(unsigned mask, const QuantizationProfile& q) const;
    double rhs_nats(unsigned mask) const { return rhs_[mask]; }

    bool feasible(const QuantizationProfile& q) const;
    /// Checks only the subsets containing `node`.
    bool feasible_involving(int node, const QuantizationProfile& q) const;

    ConstraintReport report(const QuantizationProfile& q) const;

private:
    const RelayNetwork* net_;
    std::vector<int> active_;
    ConstraintMode mode_;
    std::vector<double> rhs_;                 // indexed by mask, nats
    std::vector<ConstraintInstance> binding_; // indexed by mask (skeleton)
};

struct ConstraintOptions {
    ConstraintMode mode = ConstraintMode::forall;
    int relay_cap = kDefaultPartitionCap;
};

ConstraintReport cf_constraints_check(const RelayNetwork& net, const QuantizationProfile& q,
                                      ConstraintOptions options = {});

struct CfOptimizeOptions {
    ConstraintMode mode = ConstraintMode::forall;
    int relay_cap = kDefaultPartitionCap;
    int max_sweeps = 500;
    double tolerance = 1e-9;
};

/// Searches for the quantisation profile that maximises cf_rate_given_q
/// subject to the constraint family. Core step: coordinate-wise tightening,
/// each Q_i lowered by bisection to the smallest feasible value given the
/// others, until the profile moves by less than `tolerance` (relative) or
/// `max_sweeps` pass. Relays that no finite Q can serve are silenced.
/// The result carries the profile, rate, binding constraint and convergence.
RateResult optimize_cf_q(const RelayNetwork& net, CfOptimizeOptions options = {});

} // namespace relaynet
