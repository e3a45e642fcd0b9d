#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swgain/linalg.hpp"
#include "swgain/spectral.hpp"

namespace swgain {

QuasiExtremalReport quasi_extremal_trajectory(
    const SystemSpec& sys, const SignalClassSpec& cls,
    const Eigen::VectorXd& x0, double horizon, double mu_hat,
    const PolytopeNorm* norm, const QuasiExtremalOptions& opts) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(mu_hat > 0.0)) throw std::invalid_argument("mu_hat must be positive");
  if (x0.size() != sys.n() || x0.norm() == 0.0) {
    throw std::invalid_argument("x0 must be a nonzero state vector");
  }
  if (cls.kind != ClassKind::kArbitrary && cls.kind != ClassKind::kDwell) {
    throw std::invalid_argument("quasi-extremal trajectories need arbitrary or dwell switching");
  }
  const double tau = cls.dwell_time();

  std::vector<double> grid = opts.duration_grid;
  if (grid.empty()) {
    const double step = std::max(tau, 0.05);
    for (int k = 0; k < 8; ++k) grid.push_back(tau > 0.0 ? tau + k * step : (k + 1) * step);
  }
  for (double d : grid) {
    if (!(d > 0.0) || d < tau * (1.0 - 1e-12)) {
      throw std::invalid_argument("duration grid entries must be at least tau");
    }
  }
  std::sort(grid.begin(), grid.end());

  auto measure = [&](const Eigen::VectorXd& x) {
    return norm != nullptr ? (*norm)(x) : x.norm();
  };

  std::vector<std::vector<Eigen::MatrixXd>> flows(sys.num_modes());
  for (int i = 0; i < sys.num_modes(); ++i) {
    for (double d : grid) flows[i].push_back(expm(sys.mode(i).A * d));
  }
  const int substeps = std::max(opts.substeps, 1);

  QuasiExtremalReport report;
  report.mu_hat = mu_hat;
  Trajectory& traj = report.trajectory;
  const double x0_norm = x0.norm();
  std::vector<Letter> letters;
  Eigen::VectorXd x = x0;
  double t = 0.0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  while (t < horizon) {
    // Letters are all at least τ long, so any choice keeps the word valid.
    int best_mode = 0;
    int best_k = 0;
    double best_score = -1.0;
    for (int i = 0; i < sys.num_modes(); ++i) {
      for (size_t k = 0; k < grid.size(); ++k) {
        const double score =
            measure(flows[i][k] * x) * std::pow(mu_hat, -grid[k]);
        if (score > best_score * (1.0 + 1e-12)) {
          best_score = score;
          best_mode = i;
          best_k = static_cast<int>(k);
        }
      }
    }
    const double d = grid[best_k];
    const Eigen::MatrixXd& A = sys.mode(best_mode).A;
    const Eigen::MatrixXd sub = expm(A * (d / substeps));
    for (int s = 1; s <= substeps; ++s) {
      x = (sub * x).eval();
      traj.times.push_back(t + d * s / substeps);
      traj.states.push_back(x);
    }
    letters.push_back({best_mode, d});
    t += d;
  }

  report.word = Word(letters);
  report.signal = report.word.to_signal();
  report.c_lower = std::numeric_limits<double>::infinity();
  report.c_upper = 0.0;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const Eigen::VectorXd& xs = traj.states[k];
    traj.outputs.push_back(sys.mode(report.signal.mode_at(traj.times[k])).C * xs);
    const double ratio =
        xs.norm() / (std::pow(mu_hat, traj.times[k]) * x0_norm);
    report.c_lower = std::min(report.c_lower, ratio);
    report.c_upper = std::max(report.c_upper, ratio);
  }
  return report;
}

}  // namespace swgain
