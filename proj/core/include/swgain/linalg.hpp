#pragma once

#include <Eigen/Dense>

namespace swgain {

/// Matrix exponential by Padé scaling and squaring.
Eigen::MatrixXd expm(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// ∫_0^t e^{F r} Q e^{Fᵀ r} dr via the Van Loan block exponential, evaluated
/// on sub-intervals short enough that the block exponential stays well
/// conditioned. The result is symmetrized.
Eigen::MatrixXd ExponentialQuadratic(const Eigen::Ref<const Eigen::MatrixXd>& F,
                                     const Eigen::Ref<const Eigen::MatrixXd>& Q,
                                     double t);

/// Returns (e^{A t}, ∫_0^t e^{A r} dr · B).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ZeroOrderHold(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::MatrixXd>& B, double t);

/// Number of singular values above 1e-9 · σ_max · max(rows, cols).
int NumericalRank(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Orthonormal basis of the column space of M, with the rank decided by
/// NumericalRank. Returns a rows × 0 matrix for a numerically zero M.
Eigen::MatrixXd OrthonormalBasis(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Orthonormal basis of the orthogonal complement of the columns of Q, where
/// Q already has orthonormal columns.
Eigen::MatrixXd OrthogonalComplement(const Eigen::Ref<const Eigen::MatrixXd>& Q);

/// Largest modulus of the eigenvalues.
double SpectralRadius(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Largest real part of the eigenvalues.
double SpectralAbscissa(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Logarithmic norm induced by the Euclidean norm, λ_max((M + Mᵀ)/2).
double LogNorm(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Induced Euclidean norm.
double OperatorNorm(const Eigen::Ref<const Eigen::MatrixXd>& M);

}  // namespace swgain
