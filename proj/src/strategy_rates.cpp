#include "relaynet/strategy_rates.hpp"

#include "relaynet/errors.hpp"
#include "relaynet/gaussian_info.hpp"
#include "relaynet/opt_core.hpp"
#include "relaynet/units.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace relaynet {

namespace {

constexpr double kAlphaTol = 1e-10;
constexpr int kMonotoneCheckPoints = 65;
constexpr int kFallbackGridPoints = 20001;

/// 1/2 ln(1 + x).
double half_log1p(double x) { return 0.5 * std::log1p(x); }

void require_single_relay(const RelayNetwork& net, const char* what)
{
    if (net.node_count() != 3)
        throw UsageError(std::string(what) + " is defined for the single relay channel (T = 3)");
}

struct MaxMin {
    double alpha = 0.0;
    double value = 0.0;   // nats
    bool first_binds = true;
};

/// max over a in [0, 1] of min{first(a), second(a)} where first is
/// non-increasing and second non-decreasing. The optimum sits on the crossing
/// (or at an end point); golden section locates it and a bisection on
/// first - second pins the crossing down to machine precision. When a
/// numerical monotonicity check fails, a dense grid replaces the golden stage.
MaxMin maximize_min(const std::function<double(double)>& first, const std::function<double(double)>& second)
{
    auto objective = [&](double a) { return std::min(first(a), second(a)); };

    bool monotone = true;
    double prev_first = first(0.0);
    double prev_second = second(0.0);
    for (int k = 1; k < kMonotoneCheckPoints && monotone; ++k) {
        const double a = static_cast<double>(k) / (kMonotoneCheckPoints - 1);
        const double f = first(a);
        const double s = second(a);
        const double slack = 1e-14 * std::max({1.0, std::abs(f), std::abs(s)});
        if (f > prev_first + slack || s < prev_second - slack)
            monotone = false;
        prev_first = f;
        prev_second = s;
    }

    std::vector<double> candidates{0.0, 1.0};
    if (monotone) {
        candidates.push_back(golden_max(objective, {0.0, 1.0, kAlphaTol, 0}).arg);
        const double gap0 = first(0.0) - second(0.0);
        const double gap1 = first(1.0) - second(1.0);
        if (gap0 > 0.0 && gap1 < 0.0) {
            double lo = 0.0;
            double hi = 1.0;
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = lo + 0.5 * (hi - lo);
                if (mid <= lo || mid >= hi)
                    break;
                (first(mid) - second(mid) > 0.0 ? lo : hi) = mid;
            }
            candidates.push_back(lo);
            candidates.push_back(hi);
        }
    } else {
        double best_a = 0.0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < kFallbackGridPoints; ++k) {
            const double a = static_cast<double>(k) / (kFallbackGridPoints - 1);
            const double v = objective(a);
            if (v > best_v) {
                best_v = v;
                best_a = a;
            }
        }
        const double cell = 1.0 / (kFallbackGridPoints - 1);
        const double lo = std::max(0.0, best_a - cell);
        const double hi = std::min(1.0, best_a + cell);
        candidates.push_back(best_a);
        candidates.push_back(golden_max(objective, {lo, hi, kAlphaTol, 0}).arg);
    }

    MaxMin best{0.0, -std::numeric_limits<double>::infinity(), true};
    for (double a : candidates) {
        const double v = objective(a);
        if (v > best.value || (v == best.value && a < best.alpha)) {
            best.alpha = a;
            best.value = v;
        }
    }
    best.first_binds = first(best.alpha) <= second(best.alpha);
    return best;
}

struct SingleRelay {
    double p1, p2, n2, n3, g12, g13, g23;
};

SingleRelay unpack(const RelayNetwork& net)
{
    return {net.power(1), net.power(2), net.noise(2), net.noise(3),
            net.gain(1, 2), net.gain(1, 3), net.gain(2, 3)};
}

/// Coherent multiple-access SNR at the destination for power split a.
double mac_snr(const SingleRelay& s, double a)
{
    return (s.p1 * s.g13 + s.p2 * s.g23 + 2.0 * std::sqrt(a * s.g13 * s.g23 * s.p1 * s.p2)) / s.n3;
}

/// t * 1/2 ln(1 + snr/t), continuous at t = 0.
double tdma_term(double t, double snr)
{
    if (t <= 0.0 || snr <= 0.0)
        return 0.0;
    return t * half_log1p(snr / t);
}

} // namespace

double l_of(double x)
{
    if (std::isnan(x) || x < 0.0)
        throw DomainError("L(x) requires x >= 0");
    return from_nats(half_log1p(x));
}

QuantizationProfile::QuantizationProfile(std::vector<double> per_relay) : values_(std::move(per_relay))
{
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (std::isnan(values_[k]) || !(values_[k] > 0.0))
            throw ValidationError("quantisation noise of node " + std::to_string(k + 2) + " must be > 0");
    }
}

QuantizationProfile QuantizationProfile::uniform(int node_count, double q)
{
    return QuantizationProfile(std::vector<double>(static_cast<std::size_t>(std::max(0, node_count - 2)), q));
}

double QuantizationProfile::at(int node) const
{
    if (node < 2 || node - 2 >= static_cast<int>(values_.size()))
        throw UsageError("node " + std::to_string(node) + " has no quantisation entry");
    return values_[static_cast<std::size_t>(node - 2)];
}

void QuantizationProfile::set(int node, double q)
{
    if (node < 2 || node - 2 >= static_cast<int>(values_.size()))
        throw UsageError("node " + std::to_string(node) + " has no quantisation entry");
    if (std::isnan(q) || !(q > 0.0))
        throw ValidationError("quantisation noise must be > 0");
    values_[static_cast<std::size_t>(node - 2)] = q;
}

void check_profile(const RelayNetwork& net, const QuantizationProfile& q)
{
    const auto expected = static_cast<std::size_t>(net.node_count() - 2);
    if (q.size() != expected)
        throw ValidationError("quantisation profile has " + std::to_string(q.size()) + " entries, network has " +
                              std::to_string(expected) + " relays");
}

const char* to_string(Strategy s) noexcept
{
    switch (s) {
    case Strategy::cut_set: return "cs";
    case Strategy::decode_forward: return "df";
    case Strategy::compress_forward: return "cf";
    case Strategy::compress_forward_t2: return "cf_t2";
    case Strategy::multihop: return "mh";
    case Strategy::broadcast_cut: return "cinf";
    }
    return "?";
}

const char* column_name(Strategy s) noexcept
{
    switch (s) {
    case Strategy::cut_set: return "R_CS";
    case Strategy::decode_forward: return "R_DF";
    case Strategy::compress_forward: return "R_CF";
    case Strategy::compress_forward_t2: return "R_CF_T2";
    case Strategy::multihop: return "R_MH";
    case Strategy::broadcast_cut: return "R_Cinf";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name)
{
    std::string lower;
    for (unsigned char c : name)
        lower.push_back(static_cast<char>(std::tolower(c)));
    for (Strategy s : {Strategy::cut_set, Strategy::decode_forward, Strategy::compress_forward,
                       Strategy::compress_forward_t2, Strategy::multihop, Strategy::broadcast_cut}) {
        if (lower == to_string(s))
            return s;
    }
    if (lower == "c_inf" || lower == "cinfinity")
        return Strategy::broadcast_cut;
    throw UsageError("unknown strategy '" + name + "' (expected cs, df, cf, cf_t2, mh, cinf)");
}

RateResult cutset_single_relay(const RelayNetwork& net)
{
    require_single_relay(net, "cutset_single_relay");
    const SingleRelay s = unpack(net);
    const double broadcast = s.p1 * s.g13 / s.n3 + s.p1 * s.g12 / s.n2;
    const auto opt = maximize_min([&](double a) { return half_log1p(broadcast * (1.0 - a)); },
                                  [&](double a) { return half_log1p(mac_snr(s, a)); });
    RateResult r;
    r.strategy = Strategy::cut_set;
    r.rate = from_nats(opt.value);
    r.alpha = opt.alpha;
    r.binding = opt.first_binds ? "broadcast" : "mac";
    return r;
}

RateResult df_single_relay(const RelayNetwork& net)
{
    require_single_relay(net, "df_single_relay");
    const SingleRelay s = unpack(net);
    const auto opt = maximize_min([&](double a) { return half_log1p(s.p1 * s.g12 * (1.0 - a) / s.n2); },
                                  [&](double a) { return half_log1p(mac_snr(s, a)); });
    RateResult r;
    r.strategy = Strategy::decode_forward;
    r.rate = from_nats(opt.value);
    r.alpha = opt.alpha;
    r.binding = opt.first_binds ? "relay_decoding" : "mac";
    return r;
}

double cf_single_relay_q(const RelayNetwork& net)
{
    require_single_relay(net, "cf_single_relay_q");
    const SingleRelay s = unpack(net);
    const double denom = s.p2 * s.g23;
    if (!(denom > 0.0))
        return std::numeric_limits<double>::infinity();
    return ((s.g13 * s.n2 + s.g12 * s.n3) * s.p1 + s.n2 * s.n3) / denom;
}

RateResult cf_single_relay(const RelayNetwork& net)
{
    require_single_relay(net, "cf_single_relay");
    const SingleRelay s = unpack(net);
    const double q = cf_single_relay_q(net);
    const double relay_term = std::isinf(q) ? 0.0 : s.p1 * s.g12 / (s.n2 + q);
    RateResult r;
    r.strategy = Strategy::compress_forward;
    r.rate = from_nats(half_log1p(s.p1 * s.g13 / s.n3 + relay_term));
    r.quantization = QuantizationProfile({q});
    r.binding = "relay_to_destination";
    return r;
}

RateResult multihop_tdma(const RelayNetwork& net)
{
    require_single_relay(net, "multihop_tdma");
    const SingleRelay s = unpack(net);
    const double hop1 = s.p1 * s.g12 / s.n2;
    const double hop2 = s.p2 * s.g23 / s.n3;
    const auto opt = maximize_min([&](double a) { return tdma_term(1.0 - a, hop1); },
                                  [&](double a) { return tdma_term(a, hop2); });
    RateResult r;
    r.strategy = Strategy::multihop;
    r.rate = from_nats(opt.value);
    r.alpha = opt.alpha;
    r.binding = opt.first_binds ? "source_to_relay" : "relay_to_destination";
    return r;
}

RateResult broadcast_cut(const RelayNetwork& net)
{
    RateResult r;
    r.strategy = Strategy::broadcast_cut;
    r.rate = broadcast_cut_capacity(net);
    r.binding = "broadcast_cut";
    return r;
}

double lambda_det(const RelayNetwork& net, const std::vector<int>& subset, const QuantizationProfile& q)
{
    check_profile(net, q);
    if (subset.empty())
        throw UsageError("lambda_det needs a non-empty relay subset");
    std::vector<int> s = subset;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw UsageError("lambda_det subset has repeated relays");
    const auto d = static_cast<Eigen::Index>(s.size());
    const double p1 = net.power(1);
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const int si = s[static_cast<std::size_t>(i)];
        if (si < 2 || si >= net.node_count())
            throw UsageError("node " + std::to_string(si) + " is not a relay");
        if (!std::isfinite(q.at(si)))
            throw DomainError("lambda_det needs finite quantisation noise on the subset");
        for (Eigen::Index j = 0; j < d; ++j) {
            const int sj = s[static_cast<std::size_t>(j)];
            m(i, j) = std::sqrt(net.gain(1, si) * net.gain(1, sj)) * p1;
        }
        m(i, i) = net.gain(1, si) * p1 + net.noise(si) + q.at(si);
    }
    return m.determinant();
}

double psi_det(const RelayNetwork& net, const QuantizationProfile& q)
{
    check_profile(net, q);
    const int t = net.node_count();
    const auto d = static_cast<Eigen::Index>(t - 1);
    const double p1 = net.power(1);
    Eigen::MatrixXd m(d, d);
    for (int i = 2; i <= t; ++i) {
        const double qi = i < t ? q.at(i) : 0.0;
        if (!std::isfinite(qi))
            throw DomainError("psi_det needs finite quantisation noise on every relay");
        for (int j = 2; j <= t; ++j)
            m(i - 2, j - 2) = std::sqrt(net.gain(1, i) * net.gain(1, j)) * p1;
        m(i - 2, i - 2) = net.gain(1, i) * p1 + net.noise(i) + qi;
    }
    return m.determinant();
}

double cf_rate_given_q(const RelayNetwork& net, const QuantizationProfile& q)
{
    check_profile(net, q);
    const int t = net.node_count();
    const double p1 = net.power(1);
    double snr = net.gain(1, t) * p1 / net.noise(t);
    for (int j = 2; j < t; ++j) {
        if (!q.silenced(j))
            snr += net.gain(1, j) * p1 / (net.noise(j) + q.at(j));
    }
    return from_nats(half_log1p(snr));
}

double cf_rate_from_determinants(const RelayNetwork& net, const QuantizationProfile& q)
{
    const int t = net.node_count();
    double log_denominator = std::log(net.noise(t));
    for (int j = 2; j < t; ++j)
        log_denominator += std::log(net.noise(j) + q.at(j));
    return from_nats(0.5 * (std::log(psi_det(net, q)) - log_denominator));
}

} // namespace relaynet
