#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "swgain/gallery.hpp"

namespace swgain {

namespace {

Eigen::MatrixXd RandomNormal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = normal(rng);
  }
  return M;
}

Eigen::MatrixXd Scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

}  // namespace

SystemSpec planted_cqlf_system(int n, int num_modes, double beta,
                               std::uint64_t seed) {
  if (n < 1 || num_modes < 1) throw std::invalid_argument("need n >= 1 and a mode");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    L(i, i) = 1.0 + unit(rng);
    for (int j = 0; j < i; ++j) L(i, j) = unit(rng) - 0.5;
  }
  const Eigen::MatrixXd Lt = L.transpose();
  const Eigen::MatrixXd Lt_inv = Lt.inverse();
  std::vector<Mode> modes;
  for (int i = 0; i < num_modes; ++i) {
    const Eigen::MatrixXd M = RandomNormal(n, n, rng) / std::sqrt(2.0 * n);
    const Eigen::MatrixXd K0 = RandomNormal(n, n, rng);
    const Eigen::MatrixXd K = 2.0 * (K0 - K0.transpose());
    const Eigen::MatrixXd At =
        (beta - 0.1) * Eigen::MatrixXd::Identity(n, n) - M * M.transpose() + K;
    modes.push_back({Lt_inv * At * Lt, RandomNormal(n, 1, rng), RandomNormal(1, n, rng)});
  }
  return SystemSpec(n, 1, 1, std::move(modes), "planted_cqlf");
}

SystemSpec rotated_nodes_system(double k) {
  Eigen::MatrixXd N(2, 2);
  N << -0.1, k, 0.0, -10.0;
  Eigen::MatrixXd R(2, 2);
  R << 0.0, -1.0, 1.0, 0.0;
  Eigen::MatrixXd B(2, 1);
  B << 1.0, 0.5;
  Eigen::MatrixXd C(1, 2);
  C << 1.0, -0.3;
  std::vector<Mode> modes{{N, B, C}, {R * N * R.transpose(), B, C}};
  return SystemSpec(2, 1, 1, std::move(modes), "rotated_nodes");
}

SystemSpec commuting_pair_system() {
  const Eigen::MatrixXd B = Eigen::Vector2d(1.0, 1.0);
  const Eigen::MatrixXd C = B.transpose();
  std::vector<Mode> modes{{Eigen::Vector2d(-1.0, -2.0).asDiagonal(), B, C},
                          {Eigen::Vector2d(-2.0, -1.0).asDiagonal(), B, C}};
  return SystemSpec(2, 1, 1, std::move(modes), "commuting_pair");
}

SystemSpec gain_pair_system() {
  std::vector<Mode> modes{{Scalar(-1.0), Scalar(1.0), Scalar(1.0)},
                          {Scalar(-1.0), Scalar(2.0), Scalar(2.0)}};
  return SystemSpec(1, 1, 1, std::move(modes), "gain_pair");
}

PlantedBlocks planted_block_system(std::uint64_t seed, int max_block,
                                   int num_modes) {
  if (max_block < 1 || num_modes < 1) {
    throw std::invalid_argument("need max_block >= 1 and a mode");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(0, max_block);
  std::uniform_int_distribution<int> size_pos(1, max_block);
  // Block order: reachable-observable, reachable-unobservable,
  // unreachable-observable, unreachable-unobservable.
  const int d[4] = {size_pos(rng), size(rng), size(rng), size(rng)};
  const int n = d[0] + d[1] + d[2] + d[3];
  const bool reach[4] = {true, true, false, false};
  const bool obs[4] = {true, false, true, false};

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(RandomNormal(n, n, rng))
                          .householderQ();
  std::vector<Mode> modes;
  for (int i = 0; i < num_modes; ++i) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1, n);
    int off = 0;
    for (int b = 0; b < 4; ++b) {
      if (d[b] == 0) continue;
      A.block(off, off, d[b], d[b]) =
          RandomNormal(d[b], d[b], rng) / std::sqrt(static_cast<double>(d[b])) -
          Eigen::MatrixXd::Identity(d[b], d[b]);
      if (reach[b]) B.middleRows(off, d[b]) = RandomNormal(d[b], 1, rng);
      if (obs[b]) C.middleCols(off, d[b]) = RandomNormal(1, d[b], rng);
      off += d[b];
    }
    modes.push_back({Q * A * Q.transpose(), Q * B, C * Q.transpose()});
  }
  PlantedBlocks out{SystemSpec(n, 1, 1, std::move(modes), "planted_blocks"),
                    d[0] + d[1], d[0] + d[2], d[0]};
  return out;
}

}  // namespace swgain
