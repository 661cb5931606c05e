#include "relaynet/gaussian_info.hpp"

#include "relaynet/errors.hpp"
#include "relaynet/units.hpp"

#include <algorithm>
#include <cmath>

namespace relaynet {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPsdTol = 1e-12;

void check_covariance(const Eigen::MatrixXd& m)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DomainError("covariance matrix must be square and non-empty");
    if (!m.allFinite())
        throw DomainError("covariance matrix has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
        throw DomainError("covariance matrix is not symmetric");
    const double max_diag = m.diagonal().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTol * std::max(max_diag, 0.0))
        throw DomainError("covariance matrix is not positive semidefinite");
}

} // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd values) : values_(std::move(values))
{
    check_covariance(values_);
}

double log_det2(const CovarianceMatrix& m)
{
    Eigen::LLT<Eigen::MatrixXd> llt(m.values());
    if (llt.info() != Eigen::Success)
        throw DomainError("log_det2 requires a positive definite matrix");
    const auto diag = llt.matrixLLT().diagonal();
    double sum = 0.0;
    for (Eigen::Index k = 0; k < diag.size(); ++k) {
        if (!(diag[k] > 0.0))
            throw DomainError("log_det2 requires a positive definite matrix");
        sum += std::log2(diag[k]);
    }
    return 2.0 * sum;
}

double log_det2(const Eigen::MatrixXd& m) { return log_det2(CovarianceMatrix(m)); }

double broadcast_mi_t3(double p1, double p2, double n2, double n3, double alpha)
{
    if (!(p1 > 0.0 && p2 > 0.0 && n2 > 0.0 && n3 > 0.0))
        throw DomainError("broadcast_mi_t3: powers and noises must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("broadcast_mi_t3: alpha must lie in [0, 1]");
    double pw = p1 - alpha * alpha * p2;
    if (pw < -1e-12 * p1)
        throw DomainError("broadcast_mi_t3: alpha^2 P2 exceeds P1 (negative residual power)");
    pw = std::max(pw, 0.0);

    // Given X2, Y2 = W + Z2 and Y3 = W + Z3 share the residual W.
    Eigen::Matrix2d given_relay;
    given_relay << pw + n2, pw, pw, pw + n3;
    const double h_given_relay = log_det2(Eigen::MatrixXd(given_relay));
    const double h_given_all = std::log2(n2) + std::log2(n3);
    return from_bits(0.5 * (h_given_relay - h_given_all));
}

double broadcast_mi_t4_beta(double p1, double n2, double n3, double n4, double beta, double p3, double pw)
{
    if (!(p1 > 0.0 && n2 > 0.0 && n3 > 0.0 && n4 > 0.0 && p3 > 0.0 && pw > 0.0))
        throw DomainError("broadcast_mi_t4_beta: powers and noises must be positive");
    if (!std::isfinite(beta))
        throw DomainError("broadcast_mi_t4_beta: beta must be finite");

    // Independent sources s = (X1, X3, W, Z2, Z3, Z4); outputs (Y2, Y3, Y4, X2, X3).
    Eigen::Matrix<double, 5, 6> a = Eigen::Matrix<double, 5, 6>::Zero();
    a.row(0) << 1.0, 1.0, 0.0, 1.0, 0.0, 0.0;         // Y2 = X1 + X3 + Z2
    a.row(1) << 1.0, beta, 1.0, 0.0, 1.0, 0.0;        // Y3 = X1 + X2 + Z3
    a.row(2) << 1.0, 1.0 + beta, 1.0, 0.0, 0.0, 1.0;  // Y4 = X1 + X2 + X3 + Z4
    a.row(3) << 0.0, beta, 1.0, 0.0, 0.0, 0.0;        // X2 = beta X3 + W
    a.row(4) << 0.0, 1.0, 0.0, 0.0, 0.0, 0.0;         // X3
    Eigen::Matrix<double, 6, 1> var;
    var << p1, p3, pw, n2, n3, n4;
    const Eigen::Matrix<double, 5, 5> joint = a * var.asDiagonal() * a.transpose();

    const Eigen::Matrix3d yy = joint.topLeftCorner<3, 3>();
    const Eigen::Matrix<double, 3, 2> yx = joint.topRightCorner<3, 2>();
    const Eigen::Matrix2d xx = joint.bottomRightCorner<2, 2>();
    Eigen::Matrix3d cond = yy - yx * xx.ldlt().solve(yx.transpose());
    cond = 0.5 * (cond + cond.transpose()).eval();

    const double h_given_relays = log_det2(Eigen::MatrixXd(cond));
    const double h_given_all = std::log2(n2) + std::log2(n3) + std::log2(n4);
    return from_bits(0.5 * (h_given_relays - h_given_all));
}

double broadcast_cut_capacity(const RelayNetwork& net)
{
    const int t = net.node_count();
    double snr = 0.0;
    for (int j = 2; j <= t; ++j)
        snr += net.gain(1, j) / net.noise(j);
    return from_nats(0.5 * std::log1p(net.power(1) * snr));
}

} // namespace relaynet
