#pragma once

// Mutual information of jointly Gaussian vectors through covariance
// determinants, and the broadcast-cut quantities built from them.

#include "relaynet/channel_model.hpp"

#include <Eigen/Dense>

namespace relaynet {

/// Symmetric positive semidefinite matrix. Construction rejects asymmetric
/// input and input whose smallest eigenvalue is below -1e-12 * max diagonal.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(Eigen::MatrixXd values);

    Eigen::Index dimension() const noexcept { return values_.rows(); }
    const Eigen::MatrixXd& values() const noexcept { return values_; }

private:
    Eigen::MatrixXd values_;
};

/// log2 det(m) via Cholesky. Throws DomainError if m is not strictly PD.
double log_det2(const CovarianceMatrix& m);
double log_det2(const Eigen::MatrixXd& m);

/// I(X1; Y2, Y3 | X2) for the unit-gain single relay channel with
/// X1 = alpha X2 + W. Computed as the difference of the two conditional
/// entropies, i.e. through the 2x2 determinant of Cov(Y2, Y3 | X2).
/// Throws DomainError when alpha^2 P2 > P1 or alpha is outside [0, 1].
double broadcast_mi_t3(double p1, double p2, double n2, double n3, double alpha);

/// I(X1; Y2, Y3, Y4 | X2, X3) for the unit-gain two-relay channel with
/// X2 = beta X3 + W. The conditional covariance of (Y2, Y3, Y4) is obtained
/// from the full joint covariance of (Y2, Y3, Y4, X2, X3), which does depend
/// on beta, by Schur complement; the result must not.
/// p3 and pw set the relay input powers (P2 = beta^2 P3 + PW).
double broadcast_mi_t4_beta(double p1, double n2, double n3, double n4, double beta, double p3 = 1.0,
                            double pw = 1.0);

/// Rate of the cut {1} | {2..T} with independent Gaussian inputs:
/// 1/2 log(1 + P1 sum_j gain(1,j)/N_j). This is the asymptotic capacity of
/// the network when relay powers grow without bound.
double broadcast_cut_capacity(const RelayNetwork& net);

} // namespace relaynet
