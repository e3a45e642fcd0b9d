#include "swgain/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace swgain {

Eigen::MatrixXd expm(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.size() == 0) return Eigen::MatrixXd(M.rows(), M.cols());
  const Eigen::MatrixXd copy = M;
  return copy.exp();
}

Eigen::MatrixXd ExponentialQuadratic(const Eigen::Ref<const Eigen::MatrixXd>& F,
                                     const Eigen::Ref<const Eigen::MatrixXd>& Q,
                                     double t) {
  const int n = F.rows();
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(n, n);
  if (n == 0 || t <= 0.0) return result;

  // Keep ‖F‖·chunk near one so that neither block of the exponential
  // dominates the other by many orders of magnitude.
  const double norm = std::max(F.lpNorm<Eigen::Infinity>() * n, 1e-300);
  const int chunks = std::max(1, static_cast<int>(std::ceil(t * norm)));
  const double h = t / chunks;

  // Van Loan: exp([[-F, Q], [0, Fᵀ]] h) = [[·, X], [0, E]] with
  // Eᵀ X = ∫_0^h e^{F r} Q e^{Fᵀ r} dr.
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = -F * h;
  block.topRightCorner(n, n) = Q * h;
  block.bottomRightCorner(n, n) = F.transpose() * h;
  const Eigen::MatrixXd E = expm(block);
  const Eigen::MatrixXd eft = E.bottomRightCorner(n, n);
  Eigen::MatrixXd piece = eft.transpose() * E.topRightCorner(n, n);
  piece = 0.5 * (piece + piece.transpose()).eval();
  const Eigen::MatrixXd ef = eft.transpose();

  // W(a + h) = W(a) + e^{F a} W(h) e^{Fᵀ a}, accumulated from the front.
  Eigen::MatrixXd propagator = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < chunks; ++k) {
    result += propagator * piece * propagator.transpose();
    propagator = (propagator * ef).eval();
  }
  return 0.5 * (result + result.transpose());
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ZeroOrderHold(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::MatrixXd>& B, double t) {
  const int n = A.rows();
  const int m = B.cols();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n + m, n + m);
  block.topLeftCorner(n, n) = A * t;
  block.topRightCorner(n, m) = B * t;
  const Eigen::MatrixXd E = expm(block);
  return {E.topLeftCorner(n, n), E.topRightCorner(n, m)};
}

int NumericalRank(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double threshold =
      1e-9 * s(0) * static_cast<double>(std::max(M.rows(), M.cols()));
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) ++rank;
  }
  return rank;
}

Eigen::MatrixXd OrthonormalBasis(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  const int rows = M.rows();
  if (M.size() == 0) return Eigen::MatrixXd(rows, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return Eigen::MatrixXd(rows, 0);
  const double threshold =
      1e-9 * s(0) * static_cast<double>(std::max(M.rows(), M.cols()));
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd OrthogonalComplement(
    const Eigen::Ref<const Eigen::MatrixXd>& Q) {
  const int n = Q.rows();
  const int r = Q.cols();
  if (r == 0) return Eigen::MatrixXd::Identity(n, n);
  if (r >= n) return Eigen::MatrixXd(n, 0);
  const Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(n, n) - Q * Q.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(n - r);
}

double SpectralRadius(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.size() == 0) return 0.0;
  if (M.rows() == 1) return std::abs(M(0, 0));
  if (M.rows() == 2) {
    const double tr = M(0, 0) + M(1, 1);
    const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double disc = 0.25 * tr * tr - det;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      return std::max(std::abs(0.5 * tr + root), std::abs(0.5 * tr - root));
    }
    return std::sqrt(std::max(det, 0.0));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(M, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double SpectralAbscissa(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(M, false);
  return solver.eigenvalues().real().maxCoeff();
}

double LogNorm(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double OperatorNorm(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues()(0);
}

}  // namespace swgain
