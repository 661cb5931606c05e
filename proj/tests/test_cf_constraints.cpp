#include <doctest.h>

#include "relaynet/cf_constraints.hpp"
#include "relaynet/errors.hpp"
#include "relaynet/gaussian_info.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace relaynet;

namespace {

double lb(double x) { return 0.5 * std::log2(1.0 + x); }

RelayNetwork full_network(std::mt19937_64& rng, int t, double lo = 1e-1, double hi = 1e1)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    auto r = [&] { return std::exp(u(rng)); };
    std::vector<double> p, n;
    GainMatrix g(static_cast<std::size_t>(t), std::vector<double>(static_cast<std::size_t>(t), 0.0));
    for (int i = 1; i < t; ++i)
        p.push_back(r());
    for (int j = 2; j <= t; ++j)
        n.push_back(r());
    for (int i = 1; i < t; ++i)
        for (int j = 2; j <= t; ++j)
            if (i != j)
                g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = r();
    return build_network(p, n, g);
}

RelayNetwork symmetric_t4(double relay_power, double spacing = 0.0)
{
    Geometry geo;
    geo.model = PathLossModel::mpl();
    geo.positions = {{0, 0}, {0.7, spacing}, {0.7, -spacing}, {1, 0}};
    return build_network({1, relay_power, relay_power}, {1, 1, 1}, geo);
}

// Independent count: sum over subsets and partitions of prod (|R| + 1 - |B|).
std::uint64_t count_instances(int relays)
{
    std::uint64_t total = 0;
    for (unsigned mask = 1; mask < (1u << relays); ++mask) {
        std::vector<int> s;
        for (int k = 0; k < relays; ++k)
            if (mask & (1u << k))
                s.push_back(k);
        // brute force partitions by block labels < |S|
        const int m = static_cast<int>(s.size());
        std::vector<int> label(static_cast<std::size_t>(m), 0);
        std::map<std::vector<int>, bool> seen;
        while (true) {
            // canonical relabelling
            std::vector<int> canon(static_cast<std::size_t>(m));
            std::map<int, int> remap;
            for (int i = 0; i < m; ++i) {
                auto it = remap.find(label[static_cast<std::size_t>(i)]);
                if (it == remap.end())
                    it = remap.emplace(label[static_cast<std::size_t>(i)], static_cast<int>(remap.size())).first;
                canon[static_cast<std::size_t>(i)] = it->second;
            }
            if (!seen.count(canon)) {
                seen[canon] = true;
                std::map<int, int> sizes;
                for (int c : canon)
                    ++sizes[c];
                std::uint64_t prod = 1;
                for (auto [b, size] : sizes)
                    prod *= static_cast<std::uint64_t>(relays + 1 - size);
                total += prod;
            }
            int i = 0;
            while (i < m && ++label[static_cast<std::size_t>(i)] == m)
                label[static_cast<std::size_t>(i++)] = 0;
            if (i == m)
                break;
        }
    }
    return total;
}

struct Brute {
    bool pass;
    double slack;
};

Brute brute_force(const RelayNetwork& net, const QuantizationProfile& q, ConstraintMode mode)
{
    std::map<std::vector<int>, double> best_per_subset;
    double worst = INFINITY;
    for (const auto& skel : enumerate_constraints(net)) {
        const auto c = evaluate_constraint(net, q, skel);
        worst = std::min(worst, c.slack());
        auto it = best_per_subset.find(c.subset);
        if (it == best_per_subset.end())
            best_per_subset[c.subset] = c.slack();
        else
            it->second = std::max(it->second, c.slack());
    }
    if (mode == ConstraintMode::forall)
        return {worst >= 0.0, worst};
    double slack = INFINITY;
    for (const auto& [s, v] : best_per_subset)
        slack = std::min(slack, v);
    return {slack >= 0.0, slack};
}

} // namespace

TEST_CASE("mode names")
{
    CHECK(constraint_mode_from_string("forall") == ConstraintMode::forall);
    CHECK(constraint_mode_from_string("exists") == ConstraintMode::exists);
    CHECK_THROWS_AS(constraint_mode_from_string("some"), UsageError);
}

TEST_CASE("enumeration sizes and order")
{
    const auto t3 = single_relay_gains(1, 1, 1, 1, 1, 1, 1);
    const auto one = enumerate_constraints(t3);
    REQUIRE(one.size() == 1);
    CHECK(one[0].label() == "S={2} B={{2}} r=(3)");

    std::mt19937_64 rng(1);
    const auto t4 = full_network(rng, 4);
    const auto all = enumerate_constraints(t4);
    CHECK(all.size() == 9);
    CHECK(all.front().label() == "S={2} B={{2}} r=(3)");
    CHECK(all[1].label() == "S={2} B={{2}} r=(4)");
    CHECK(all[4].label() == "S={2,3} B={{2,3}} r=(4)");
    CHECK(all[5].label() == "S={2,3} B={{2},{3}} r=(3,2)");
    CHECK(all.back().label() == "S={2,3} B={{2},{3}} r=(4,4)");

    for (int t = 3; t <= 6; ++t) {
        const auto net = full_network(rng, t);
        const auto cs = enumerate_constraints(net);
        CHECK(cs.size() == count_instances(t - 2));
        for (const auto& c : cs) {
            std::vector<int> cover;
            for (std::size_t m = 0; m < c.blocks.size(); ++m) {
                cover.insert(cover.end(), c.blocks[m].begin(), c.blocks[m].end());
                CHECK(std::find(c.blocks[m].begin(), c.blocks[m].end(), c.routing[m]) == c.blocks[m].end());
                CHECK(c.routing[m] >= 2);
                CHECK(c.routing[m] <= t);
            }
            std::sort(cover.begin(), cover.end());
            CHECK(cover == c.subset);
        }
    }
}

TEST_CASE("enumeration cap")
{
    std::mt19937_64 rng(2);
    const auto t5 = full_network(rng, 5);
    CHECK_THROWS_AS(enumerate_constraints(t5, 2), CapacityError);
    CHECK_THROWS_AS(ConstraintSystem(t5, t5.relays(), ConstraintMode::forall, 2), CapacityError);
    CfOptimizeOptions opt;
    opt.relay_cap = 2;
    CHECK_THROWS_AS(optimize_cf_q(t5, opt), CapacityError);
}

TEST_CASE("single relay condition threshold")
{
    const auto net = single_relay_gains(1, 1, 1, 1, 1, 1, 1);
    const auto at4 = evaluate_constraint(net, QuantizationProfile({4.0}), enumerate_constraints(net)[0]);
    CHECK(at4.lhs == doctest::Approx(0.5 * std::log2(1.5)).epsilon(1e-14));
    CHECK(at4.rhs == doctest::Approx(0.5 * std::log2(1.5)).epsilon(1e-14));
    CHECK(cf_constraints_check(net, QuantizationProfile({4.0 * (1 + 1e-12)})).pass);
    CHECK_FALSE(cf_constraints_check(net, QuantizationProfile({4.0 * (1 - 1e-9)})).pass);

    // Q2 >= (g12 P1 + N2)(g13 P1 + N3)/(g23 P2) for general single relay parameters
    const auto other = single_relay_gains(2, 3, 0.5, 1.5, 0.7, 0.4, 2.0);
    const double want = (0.7 * 2 + 0.5) * (0.4 * 2 + 1.5) / (2.0 * 3);
    CHECK(cf_constraints_check(other, QuantizationProfile({want * (1 + 1e-9)})).pass);
    CHECK_FALSE(cf_constraints_check(other, QuantizationProfile({want * (1 - 1e-9)})).pass);
}

TEST_CASE("constraint system agrees with brute force enumeration")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(std::log(1e-2), std::log(1e2));
    for (int draw = 0; draw < 60; ++draw) {
        const int t = 4 + draw % 2;
        const auto net = full_network(rng, t);
        std::vector<double> qs;
        for (int k = 0; k < t - 2; ++k)
            qs.push_back(std::exp(u(rng)));
        const QuantizationProfile q(qs);
        for (auto mode : {ConstraintMode::forall, ConstraintMode::exists}) {
            const Brute b = brute_force(net, q, mode);
            const auto rep = cf_constraints_check(net, q, {mode, kDefaultPartitionCap});
            CHECK(rep.pass == b.pass);
            CHECK(rep.slack == doctest::Approx(b.slack).epsilon(1e-9));
            REQUIRE(rep.tightest.has_value());
            const auto again = evaluate_constraint(net, q, *rep.tightest);
            CHECK(again.slack() == doctest::Approx(rep.slack).epsilon(1e-9));
            CHECK(rep.subsets == (1u << (t - 2)) - 1);
        }
    }
}

TEST_CASE("silenced relays leave the relay set")
{
    std::mt19937_64 rng(4);
    const auto net = full_network(rng, 4);
    const auto none = cf_constraints_check(net, QuantizationProfile({INFINITY, INFINITY}));
    CHECK(none.pass);
    CHECK(none.subsets == 0);
    CHECK_FALSE(none.tightest.has_value());

    const auto half = cf_constraints_check(net, QuantizationProfile({INFINITY, 1e-3}));
    CHECK(half.subsets == 1);
    REQUIRE(half.tightest.has_value());
    CHECK(half.tightest->label() == "S={3} B={{3}} r=(4)");
}

TEST_CASE("huge relay powers admit any fixed profile")
{
    Geometry geo;
    geo.model = PathLossModel::mpl();
    geo.positions = {{0, 0}, {0.3, 0.1}, {0.6, -0.1}, {1, 0}};
    const auto net = build_network({1, 1e9, 1e9}, {1, 1, 1}, geo);
    CHECK(cf_constraints_check(net, QuantizationProfile({0.01, 0.01})).pass);
    CHECK(cf_constraints_check(net, QuantizationProfile({0.01, 0.01}), {ConstraintMode::exists}).pass);
}

TEST_CASE("constraint rhs grows with relay power")
{
    std::mt19937_64 rng(6);
    const auto net = full_network(rng, 5);
    const QuantizationProfile q({1.0, 1.0, 1.0});
    const auto skeletons = enumerate_constraints(net);
    for (int node : {2, 3, 4}) {
        const auto louder = net.with_power(node, net.power(node) * 10);
        for (const auto& s : skeletons) {
            const auto a = evaluate_constraint(net, q, s);
            const auto b = evaluate_constraint(louder, q, s);
            CHECK(b.rhs >= a.rhs);
            CHECK(b.lhs == a.lhs);
        }
    }
}

TEST_CASE("optimiser on the unit single relay network")
{
    const auto net = single_relay_gains(1, 1, 1, 1, 1, 1, 1);
    const auto r = optimize_cf_q(net);
    CHECK(r.strategy == Strategy::compress_forward_t2);
    CHECK(std::abs(r.quantization->at(2) - 4.0) < 1e-6);
    CHECK(r.rate == doctest::Approx(0.5 * std::log2(2.2)).epsilon(1e-9));
    CHECK(r.converged);
    CHECK(r.binding == "S={2} B={{2}} r=(3)");
    const auto e = optimize_cf_q(net, {ConstraintMode::exists});
    CHECK(std::abs(e.quantization->at(2) - 4.0) < 1e-6);
}

TEST_CASE("optimiser with a strong relay")
{
    const auto net = single_relay_gains(1, 1e6, 1, 1, 1, 1, 1);
    const auto r = optimize_cf_q(net);
    CHECK(r.quantization->at(2) == doctest::Approx(4e-6).epsilon(1e-6));
    CHECK(std::abs(r.rate - broadcast_cut_capacity(net)) < 1e-5);
}

TEST_CASE("optimiser never beats closed-form single relay CF")
{
    std::mt19937_64 rng(12);
    for (int draw = 0; draw < 100; ++draw) {
        const auto net = full_network(rng, 3, 1e-2, 1e2);
        const auto r = optimize_cf_q(net);
        CHECK(r.rate <= cf_single_relay(net).rate + 1e-9);
        CHECK(cf_constraints_check(net, *r.quantization).pass);
    }
}

TEST_CASE("optimiser finds the exact single relay constraint root")
{
    std::mt19937_64 rng(21);
    for (int draw = 0; draw < 100; ++draw) {
        const auto net = full_network(rng, 3, 1e-1, 1e1).with_power(2, 1e6);
        const double p1 = net.power(1), n2 = net.noise(2), n3 = net.noise(3);
        const double root = (n2 + p1 * net.gain(1, 2)) * (n3 + p1 * net.gain(1, 3)) / (1e6 * net.gain(2, 3));
        CHECK(optimize_cf_q(net).quantization->at(2) == doctest::Approx(root).epsilon(1e-7));
    }
}

TEST_CASE("optimiser beats a 50 x 50 feasible grid at T = 4")
{
    for (auto mode : {ConstraintMode::forall, ConstraintMode::exists}) {
        for (double power : {1.0, 10.0, 1e3}) {
            const auto net = symmetric_t4(power, 0.05);
            const auto r = optimize_cf_q(net, {mode});
            REQUIRE(r.quantization.has_value());
            CHECK(cf_constraints_check(net, *r.quantization, {mode}).pass);

            const double q0 = std::min(r.quantization->at(2), r.quantization->at(3));
            double best_grid = -INFINITY;
            for (int i = 0; i < 50; ++i)
                for (int j = 0; j < 50; ++j) {
                    const double a = q0 * std::pow(10.0, -2.0 + 4.0 * i / 49);
                    const double b = q0 * std::pow(10.0, -2.0 + 4.0 * j / 49);
                    const QuantizationProfile q({a, b});
                    if (cf_constraints_check(net, q, {mode}).pass)
                        best_grid = std::max(best_grid, cf_rate_given_q(net, q));
                }
            CHECK(r.rate >= best_grid - 1e-12);
        }
    }
}

TEST_CASE("forall mode silences relays that cannot hear each other")
{
    const GainMatrix g{{0, 1, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}};
    const auto net = build_network({1, 5, 5}, {1, 1, 1}, g);
    const auto strict = optimize_cf_q(net);
    CHECK(strict.quantization->silenced(2));
    CHECK(strict.quantization->silenced(3));
    CHECK(strict.rate == doctest::Approx(lb(1.0)));
    const auto loose = optimize_cf_q(net, {ConstraintMode::exists});
    CHECK_FALSE(loose.quantization->silenced(2));
    CHECK_FALSE(loose.quantization->silenced(3));
    CHECK(loose.rate > strict.rate);
}

TEST_CASE("optimiser is deterministic")
{
    const auto net = symmetric_t4(100.0, 0.02);
    const auto a = optimize_cf_q(net);
    const auto b = optimize_cf_q(net);
    CHECK(a.rate == b.rate);
    CHECK(a.quantization->values() == b.quantization->values());
    CHECK(a.binding == b.binding);
}

TEST_CASE("sweep limit still returns a feasible profile")
{
    std::mt19937_64 rng(21);
    const auto net = full_network(rng, 5);
    CfOptimizeOptions opt;
    opt.max_sweeps = 1;
    const auto r = optimize_cf_q(net, opt);
    CHECK(r.sweeps == 1);
    CHECK(cf_constraints_check(net, *r.quantization).pass);
}
