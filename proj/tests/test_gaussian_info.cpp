#include <doctest.h>

#include "relaynet/errors.hpp"
#include "relaynet/gaussian_info.hpp"
#include "relaynet/units.hpp"

#include <cmath>
#include <random>

using namespace relaynet;

namespace {

// Laplace expansion along the first row.
double cofactor_det(const Eigen::MatrixXd& m)
{
    const Eigen::Index n = m.rows();
    if (n == 1)
        return m(0, 0);
    double det = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::MatrixXd minor(n - 1, n - 1);
        for (Eigen::Index i = 1; i < n; ++i)
            for (Eigen::Index j = 0, jj = 0; j < n; ++j)
                if (j != c)
                    minor(i - 1, jj++) = m(i, j);
        det += (c % 2 ? -1.0 : 1.0) * m(0, c) * cofactor_det(minor);
    }
    return det;
}

} // namespace

TEST_CASE("log_det2 small cases")
{
    CHECK(log_det2(Eigen::MatrixXd::Identity(2, 2)) == doctest::Approx(0.0));
    CHECK(log_det2(Eigen::MatrixXd(2 * Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(2.0));
    Eigen::MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    CHECK(log_det2(m) == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
}

TEST_CASE("log_det2 rejects bad input")
{
    Eigen::MatrixXd asym(2, 2);
    asym << 2, 1, 0, 2;
    CHECK_THROWS_AS(log_det2(asym), DomainError);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(log_det2(indefinite), DomainError);
    Eigen::MatrixXd singular(2, 2);
    singular << 1, 1, 1, 1;
    CHECK_THROWS_AS(log_det2(singular), DomainError);
    CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd(2, 3)), DomainError);
}

TEST_CASE("log_det2 matches cofactor expansion on random PD matrices")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    for (int n : {2, 3}) {
        for (int draw = 0; draw < 200; ++draw) {
            Eigen::MatrixXd a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    a(i, j) = z(rng);
            const Eigen::MatrixXd m = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
            const double want = cofactor_det(m);
            const double got = std::exp2(log_det2(m));
            CHECK(std::abs(got - want) / want < 1e-10);
        }
    }
}

TEST_CASE("broadcast_mi_t3 hand values")
{
    CHECK(broadcast_mi_t3(1, 1, 1, 1, 0) == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-14));
    CHECK(broadcast_mi_t3(1, 1, 1, 1, 1) == doctest::Approx(0.0));
    CHECK(broadcast_mi_t3(2, 1, 1, 2, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(broadcast_mi_t3(1, 4, 1, 1, 0.6), DomainError);
    CHECK_THROWS_AS(broadcast_mi_t3(1, 1, 1, 1, -0.1), DomainError);
    CHECK_THROWS_AS(broadcast_mi_t3(1, 1, 1, 1, 1.1), DomainError);
}

TEST_CASE("broadcast_mi_t3 is maximised at alpha = 0")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int draw = 0; draw < 200; ++draw) {
        const double p1 = u(rng), p2 = u(rng), n2 = u(rng), n3 = u(rng);
        const double top = std::min(1.0, std::sqrt(p1 / p2));
        const double at0 = broadcast_mi_t3(p1, p2, n2, n3, 0.0);
        for (int k = 1; k <= 100; ++k) {
            const double v = broadcast_mi_t3(p1, p2, n2, n3, top * k / 100.0);
            CHECK(v < at0 + 1e-12);
            CHECK(v < at0);
        }
    }
}

TEST_CASE("broadcast_mi_t4_beta hand values and beta invariance")
{
    CHECK(broadcast_mi_t4_beta(1, 1, 1, 1, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(broadcast_mi_t4_beta(1, 1, 1, 1, 0.7) == doctest::Approx(1.0).epsilon(1e-12));
    const double want = 0.5 * std::log2(6.0);
    for (double beta : {-3.0, -0.5, 0.0, 0.25, 1.0, 4.0})
        CHECK(broadcast_mi_t4_beta(3, 1, 3, 3, beta) == doctest::Approx(want).epsilon(1e-12));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int draw = 0; draw < 200; ++draw) {
        const double p1 = u(rng), n2 = u(rng), n3 = u(rng), n4 = u(rng), p3 = u(rng), pw = u(rng);
        double lo = INFINITY, hi = -INFINITY;
        for (int k = 0; k <= 100; ++k) {
            const double v = broadcast_mi_t4_beta(p1, n2, n3, n4, -2.0 + 0.04 * k, p3, pw);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo < 1e-10);
        CHECK(lo == doctest::Approx(0.5 * std::log2(1 + p1 * (1 / n2 + 1 / n3 + 1 / n4))).epsilon(1e-10));
    }
    CHECK_THROWS_AS(broadcast_mi_t4_beta(0, 1, 1, 1, 0), DomainError);
}

TEST_CASE("broadcast cut capacity")
{
    const auto net = single_relay_gains(1, 1, 1, 1, 1, 1, 1);
    CHECK(broadcast_cut_capacity(net) == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-14));

    const auto p2p = build_network({3}, {2}, GainMatrix{{0, 4}, {0, 0}});
    CHECK(broadcast_cut_capacity(p2p) == doctest::Approx(0.5 * std::log2(1 + 3.0 * 4 / 2)));

    const auto quiet = single_relay_gains(1e-300, 1, 1, 1, 1, 1, 1);
    CHECK(broadcast_cut_capacity(quiet) == doctest::Approx(0.0));

    {
        ScopedLogBase nats(LogBase::e);
        CHECK(broadcast_cut_capacity(net) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
    }
    CHECK(log_base() == LogBase::two);
}

TEST_CASE("broadcast cut capacity monotonicity")
{
    double prev = -1.0;
    for (double g : {0.0, 0.1, 1.0, 10.0}) {
        const double c = broadcast_cut_capacity(single_relay_gains(1, 1, 1, 1, g, 1, 1));
        CHECK(c >= prev);
        prev = c;
    }
    prev = -1.0;
    for (double p : {0.1, 1.0, 10.0}) {
        const double c = broadcast_cut_capacity(single_relay_gains(p, 1, 1, 1, 1, 1, 1));
        CHECK(c >= prev);
        prev = c;
    }
    prev = INFINITY;
    for (double n : {0.1, 1.0, 10.0}) {
        const double c = broadcast_cut_capacity(single_relay_gains(1, 1, n, 1, 1, 1, 1));
        CHECK(c < prev);
        prev = c;
    }
}
