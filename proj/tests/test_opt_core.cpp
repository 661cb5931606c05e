#include <doctest.h>

#include "relaynet/errors.hpp"
#include "relaynet/opt_core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace relaynet;

TEST_CASE("golden_max finds interior and boundary maxima")
{
    auto r = golden_max([](double x) { return -(x - 0.3) * (x - 0.3); }, {});
    CHECK(r.arg == doctest::Approx(0.3).epsilon(1e-8));
    r = golden_max([](double x) { return x; }, {});
    CHECK(r.arg == 1.0);
    r = golden_max([](double x) { return -x; }, {});
    CHECK(r.arg == 0.0);
    r = golden_max([](double x) { return std::min(1 - x, 2 * x); }, {0.0, 1.0, 1e-12});
    CHECK(r.arg == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(r.iterations <= golden_iteration_bound({0.0, 1.0, 1e-12}));
}

TEST_CASE("golden_max ties go to the smallest argument")
{
    const auto r = golden_max([](double) { return 1.0; }, {});
    CHECK(r.arg == 0.0);
}

TEST_CASE("golden_max stays inside the interval and rejects NaN")
{
    double lo_seen = 1e9, hi_seen = -1e9;
    golden_max(
        [&](double x) {
            lo_seen = std::min(lo_seen, x);
            hi_seen = std::max(hi_seen, x);
            return std::sin(7 * x);
        },
        {0.2, 0.9});
    CHECK(lo_seen >= 0.2);
    CHECK(hi_seen <= 0.9);
    CHECK_THROWS_AS(golden_max([](double) { return NAN; }, {}), NumericalError);
    CHECK_THROWS(SearchSpec{1.0, 0.0}.validate());
}

TEST_CASE("bisect_min_feasible")
{
    const double t = bisect_min_feasible([](double x) { return x >= 2.5; }, 0.0, 10.0, {0.0, 1e-12});
    CHECK(t >= 2.5);
    CHECK(t - 2.5 <= 1e-11);
    CHECK(bisect_min_feasible([](double) { return true; }, 1.0, 2.0, {1e-9, 0.0}) == 1.0);
    CHECK_THROWS_AS(bisect_min_feasible([](double) { return false; }, 1.0, 2.0, {1e-9, 0.0}), InfeasibleError);
}

TEST_CASE("Bell numbers")
{
    const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
    for (int n = 0; n <= 10; ++n)
        CHECK(bell_number(n) == bell[n]);
}

TEST_CASE("set partition counts and structure")
{
    for (int n = 1; n <= 8; ++n) {
        const auto parts = set_partitions(n);
        CHECK(parts.size() == bell_number(n));
        std::set<std::vector<int>> seen;
        for (const auto& p : parts) {
            CHECK(seen.insert(p.rgs).second);
            // restricted growth: rgs[0] = 0, rgs[i] <= 1 + max prefix
            CHECK(p.rgs[0] == 0);
            int mx = 0;
            for (int i = 1; i < n; ++i) {
                CHECK(p.rgs[static_cast<std::size_t>(i)] <= mx + 1);
                mx = std::max(mx, p.rgs[static_cast<std::size_t>(i)]);
            }
            CHECK(static_cast<int>(p.blocks.size()) == mx + 1);
            std::vector<int> cover;
            for (const auto& b : p.blocks)
                cover.insert(cover.end(), b.begin(), b.end());
            std::sort(cover.begin(), cover.end());
            for (int i = 0; i < n; ++i)
                CHECK(cover[static_cast<std::size_t>(i)] == i);
        }
        for (std::size_t k = 1; k < parts.size(); ++k)
            CHECK(parts[k - 1].rgs < parts[k].rgs);
    }
}

TEST_CASE("partition enumeration order for n = 3")
{
    const auto parts = set_partitions(3);
    const std::vector<std::vector<int>> want{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
    REQUIRE(parts.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k)
        CHECK(parts[k].rgs == want[k]);
    CHECK(parts[2].blocks == std::vector<std::vector<int>>{{0, 2}, {1}});
}

TEST_CASE("partition enumerator limits")
{
    CHECK_THROWS_AS(SetPartitionEnumerator(9), CapacityError);
    CHECK_NOTHROW(SetPartitionEnumerator(9, 9));
    CHECK_THROWS_AS(SetPartitionEnumerator(0), UsageError);
    SetPartitionEnumerator e(2);
    SetPartition p;
    int count = 0;
    while (e.next(p))
        ++count;
    CHECK(count == 2);
    CHECK_FALSE(e.next(p));
}
