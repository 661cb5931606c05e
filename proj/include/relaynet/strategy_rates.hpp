#pragma once

// Achievable rates and bounds for the Gaussian relay channel.
//
// Single relay (T = 3) strategies:
//   cut-set   max_a min{ L((P1 g13/N3 + P1 g12/N2)(1-a)), L(mac(a)) }
//   DF        max_a min{ L(P1 g12 (1-a)/N2),              L(mac(a)) }
//   CF        L(P1 g13/N3 + P1 g12/(N2 + Q)),  Q = ((g13 N2 + g12 N3) P1 + N2 N3)/(P2 g23)
//   multihop  max_a min{ (1-a) L(P1 g12/((1-a) N2)), a L(P2 g23/(a N3)) }
// where mac(a) = (P1 g13 + P2 g23 + 2 sqrt(a g13 g23 P1 P2))/N3 and L(x) = 1/2 log(1 + x).
//
// The CF line uses P1 g12 in the relay term. Substituting Q gives
// P1 P2 g12 g23 / (P1 (g13 N2 + g12 N3) + P2 g23 N2 + N2 N3), the form used
// throughout the asymptotic case analysis, and it is the T = 3 instance of the
// general compress-and-forward rate below. A printed variant with P2 g12 in
// the numerator is treated as a typo.
//
// General T: with quantisation noise Q_j at relay j, compress-and-forward
// achieves 1/2 log(1 + sum_{j relay} g1j P1/(N_j + Q_j) + g1T P1/N_T).

#include "relaynet/channel_model.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace relaynet {

/// L(x) = 1/2 log(1 + x) in the current rate unit. Throws DomainError for x < 0.
double l_of(double x);

/// Per-relay quantisation noise variances; entry 0 belongs to node 2.
/// +infinity silences a relay (its contribution to every rate is exactly 0).
class QuantizationProfile {
public:
    QuantizationProfile() = default;
    explicit QuantizationProfile(std::vector<double> per_relay);

    static QuantizationProfile uniform(int node_count, double q);

    double at(int node) const;
    void set(int node, double q);
    bool silenced(int node) const { return std::isinf(at(node)); }

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }

    bool operator==(const QuantizationProfile&) const = default;

private:
    std::vector<double> values_;
};

/// Throws ValidationError unless the profile has one entry per relay of `net`.
void check_profile(const RelayNetwork& net, const QuantizationProfile& q);

enum class Strategy { cut_set, decode_forward, compress_forward, compress_forward_t2, multihop, broadcast_cut };

const char* to_string(Strategy s) noexcept;
/// Column label used in reports: R_CS, R_DF, R_CF, R_CF_T2, R_MH, R_Cinf.
const char* column_name(Strategy s) noexcept;
/// Parses cs, df, cf, cf_t2, mh, cinf (case-insensitive).
Strategy strategy_from_string(const std::string& name);

struct RateResult {
    Strategy strategy = Strategy::cut_set;
    double rate = 0.0;
    /// Power split (CS, DF) or time split (multihop).
    std::optional<double> alpha;
    std::optional<QuantizationProfile> quantization;
    /// Which min-term or constraint is tight at the optimum.
    std::string binding;
    bool converged = true;
    int sweeps = 0;
};

RateResult cutset_single_relay(const RelayNetwork& net);
RateResult df_single_relay(const RelayNetwork& net);
RateResult cf_single_relay(const RelayNetwork& net);
RateResult multihop_tdma(const RelayNetwork& net);
/// broadcast_cut_capacity wrapped as a RateResult.
RateResult broadcast_cut(const RelayNetwork& net);

/// Quantisation noise of the closed-form single relay CF strategy (+inf
/// when the relay cannot reach the destination).
double cf_single_relay_q(const RelayNetwork& net);

/// Determinant of the |S| x |S| covariance of the quantised relay outputs
/// given all relay inputs: diagonal g1s P1 + N_s + Q_s, off-diagonal
/// sqrt(g1s g1s') P1. `subset` lists relay node ids.
double lambda_det(const RelayNetwork& net, const std::vector<int>& subset, const QuantizationProfile& q);

/// Determinant of the (T-1) x (T-1) covariance of (quantised relay outputs,
/// destination output) given the relay inputs; the destination row uses Q = 0.
double psi_det(const RelayNetwork& net, const QuantizationProfile& q);

/// Compress-and-forward rate for a given quantisation profile.
double cf_rate_given_q(const RelayNetwork& net, const QuantizationProfile& q);

/// The same rate computed as 1/2 log(psi_det / prod(N_j + Q_j) N_T). Only for
/// finite profiles.
double cf_rate_from_determinants(const RelayNetwork& net, const QuantizationProfile& q);

} // namespace relaynet
