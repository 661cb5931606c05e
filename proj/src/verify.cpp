#include "relaynet/verify.hpp"

#include "relaynet/cf_constraints.hpp"
#include "relaynet/errors.hpp"
#include "relaynet/gaussian_info.hpp"
#include "relaynet/strategy_rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace relaynet {

bool VerifyReport::ok() const noexcept
{
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
}

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

void record(SuiteResult& s, double deviation, double tolerance, const std::string& detail)
{
    s.worst = std::max(s.worst, deviation);
    if (!(deviation <= tolerance)) {
        ++s.failed;
        if (s.first_failure.empty())
            s.first_failure = detail;
    } else {
        ++s.passed;
    }
}

std::string describe(const RelayNetwork& net)
{
    std::string out = "P=";
    char buf[64];
    for (double p : net.powers()) {
        std::snprintf(buf, sizeof buf, "%.6g ", p);
        out += buf;
    }
    out += "N=";
    for (double n : net.noises()) {
        std::snprintf(buf, sizeof buf, "%.6g ", n);
        out += buf;
    }
    return out;
}

} // namespace

RelayNetwork random_single_relay(std::mt19937_64& rng) { return random_network(rng, 3); }

RelayNetwork random_network(std::mt19937_64& rng, int t)
{
    std::vector<double> powers, noises;
    for (int i = 1; i < t; ++i)
        powers.push_back(log_uniform(rng, 1e-1, 1e1));
    for (int j = 2; j <= t; ++j)
        noises.push_back(log_uniform(rng, 1e-1, 1e1));
    GainMatrix g(static_cast<std::size_t>(t), std::vector<double>(static_cast<std::size_t>(t), 0.0));
    for (int i = 1; i < t; ++i)
        for (int j = 2; j <= t; ++j)
            if (i != j)
                g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = log_uniform(rng, 1e-1, 1e1);
    return build_network(powers, noises, g);
}

SuiteResult verify_broadcast_alpha_t3(std::mt19937_64& rng, int draws)
{
    SuiteResult s;
    s.name = "broadcast_alpha_t3";
    for (int d = 0; d < draws; ++d) {
        const double p1 = log_uniform(rng, 1e-1, 1e1), p2 = log_uniform(rng, 1e-1, 1e1);
        const double n2 = log_uniform(rng, 1e-1, 1e1), n3 = log_uniform(rng, 1e-1, 1e1);
        const double top = std::min(1.0, std::sqrt(p1 / p2));
        const double at0 = broadcast_mi_t3(p1, p2, n2, n3, 0.0);
        double worst = 0.0;
        for (int k = 0; k <= 100; ++k) {
            const double a = std::min(top, top * k / 100.0);
            worst = std::max(worst, broadcast_mi_t3(p1, p2, n2, n3, a) - at0);
        }
        record(s, worst, 1e-12, "P1=" + std::to_string(p1) + " P2=" + std::to_string(p2));
    }
    return s;
}

SuiteResult verify_broadcast_beta_t4(std::mt19937_64& rng, int draws)
{
    SuiteResult s;
    s.name = "broadcast_beta_t4";
    for (int d = 0; d < draws; ++d) {
        const double p1 = log_uniform(rng, 1e-1, 1e1);
        const double n2 = log_uniform(rng, 1e-1, 1e1), n3 = log_uniform(rng, 1e-1, 1e1),
                     n4 = log_uniform(rng, 1e-1, 1e1);
        const double p3 = log_uniform(rng, 1e-1, 1e1), pw = log_uniform(rng, 1e-1, 1e1);
        double lo = INFINITY, hi = -INFINITY;
        for (int k = 0; k <= 100; ++k) {
            const double beta = -2.0 + 4.0 * k / 100.0;
            const double v = broadcast_mi_t4_beta(p1, n2, n3, n4, beta, p3, pw);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        record(s, hi - lo, 1e-10, "P1=" + std::to_string(p1));
    }
    return s;
}

SuiteResult verify_dominance(std::mt19937_64& rng, int draws)
{
    SuiteResult s;
    s.name = "dominance";
    for (int d = 0; d < draws; ++d) {
        const RelayNetwork net = random_single_relay(rng);
        const double cs = cutset_single_relay(net).rate;
        const double worst = std::max({df_single_relay(net).rate, cf_single_relay(net).rate,
                                       multihop_tdma(net).rate}) - cs;
        record(s, worst, 1e-9, describe(net));
    }
    return s;
}

SuiteResult verify_psi_identity(std::mt19937_64& rng, int draws)
{
    SuiteResult s;
    s.name = "psi_identity";
    for (int d = 0; d < draws; ++d) {
        const int t = 3 + d % 3;
        const RelayNetwork net = random_network(rng, t);
        std::vector<double> qs;
        for (int k = 0; k < t - 2; ++k)
            qs.push_back(log_uniform(rng, 1e-3, 1e3));
        const QuantizationProfile q(qs);
        const double a = cf_rate_given_q(net, q);
        const double b = cf_rate_from_determinants(net, q);
        record(s, std::abs(a - b) / std::max(std::abs(a), 1e-300), 1e-10, describe(net));
    }
    return s;
}

SuiteResult verify_cf_t2_bound(std::mt19937_64& rng, int draws)
{
    SuiteResult s;
    s.name = "cf_t2_bound";
    for (int d = 0; d < draws; ++d) {
        const RelayNetwork net = random_single_relay(rng);
        const double excess = optimize_cf_q(net).rate - cf_single_relay(net).rate;
        record(s, excess, 1e-9, describe(net));
    }
    return s;
}

VerifyReport run_verification(std::uint64_t seed, int draws)
{
    if (draws < 1)
        throw UsageError("verify needs at least one draw");
    VerifyReport r;
    r.seed = seed;
    r.draws = draws;
    std::mt19937_64 rng(seed);
    r.suites.push_back(verify_broadcast_alpha_t3(rng, draws));
    r.suites.push_back(verify_broadcast_beta_t4(rng, draws));
    r.suites.push_back(verify_dominance(rng, draws));
    r.suites.push_back(verify_psi_identity(rng, draws));
    r.suites.push_back(verify_cf_t2_bound(rng, draws));
    return r;
}

} // namespace relaynet
