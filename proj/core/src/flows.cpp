#include "swgain/flows.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "swgain/linalg.hpp"

namespace swgain {

namespace {

void CheckInterval(const Signal& sig, double s, double t) {
  const double H = sig.total_duration();
  const double slack = 1e-12 * std::max(1.0, H);
  if (!(s >= 0.0) || !(t >= s) || t > H + slack) {
    throw std::invalid_argument("interval outside the signal horizon");
  }
}

}  // namespace

Eigen::MatrixXd transition(const SystemSpec& sys, const Signal& sig, double s,
                           double t) {
  CheckInterval(sig, s, t);
  sig.ValidateFor(sys);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(sys.n(), sys.n());
  ForEachPiece(sig, s, t, [&](int mode, double, double dt) {
    phi = (expm(sys.mode(mode).A * dt) * phi).eval();
  });
  return phi;
}

GramianPair gramians(const SystemSpec& sys, const Signal& sig, double t0,
                     double t1) {
  CheckInterval(sig, t0, t1);
  sig.ValidateFor(sys);
  const int n = sys.n();
  GramianPair result;
  result.wc = Eigen::MatrixXd::Zero(n, n);
  result.wo = Eigen::MatrixXd::Zero(n, n);
  result.horizon = t1 - t0;

  // forward = Φ(a, t0) and backward = Φ(t0, a) at the current piece start a.
  Eigen::MatrixXd forward = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd backward = Eigen::MatrixXd::Identity(n, n);
  ForEachPiece(sig, t0, t1, [&](int index, double, double dt) {
    const Mode& mode = sys.mode(index);
    const Eigen::MatrixXd bb = mode.B * mode.B.transpose();
    const Eigen::MatrixXd cc = mode.C.transpose() * mode.C;
    result.wc += backward * ExponentialQuadratic(-mode.A, bb, dt) *
                 backward.transpose();
    result.wo += forward.transpose() *
                 ExponentialQuadratic(mode.A.transpose(), cc, dt) * forward;
    forward = (expm(mode.A * dt) * forward).eval();
    backward = (backward * expm(-mode.A * dt)).eval();
  });
  result.wc = 0.5 * (result.wc + result.wc.transpose()).eval();
  result.wo = 0.5 * (result.wo + result.wo.transpose()).eval();
  return result;
}

Trajectory simulate(const SystemSpec& sys, const Signal& sig,
                    const SampledInput& u, const Eigen::VectorXd& x0) {
  sig.ValidateFor(sys);
  if (!(u.step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (x0.size() != sys.n()) throw std::invalid_argument("x0 has wrong size");
  const double H = sig.total_duration();
  const int steps = static_cast<int>(u.values.size());
  if (std::abs(steps * u.step - H) > 1e-9 * std::max(1.0, H)) {
    throw std::invalid_argument("input grid does not match the signal horizon");
  }
  for (const Eigen::VectorXd& v : u.values) {
    if (v.size() != sys.m()) throw std::invalid_argument("input has wrong size");
  }

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.outputs.reserve(steps + 1);
  Eigen::VectorXd x = x0;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.outputs.push_back(sys.mode(sig.mode_at(t)).C * x);
  };
  record(0.0);
  for (int k = 0; k < steps; ++k) {
    const double a = k * u.step;
    const double b = (k + 1 == steps) ? H : (k + 1) * u.step;
    ForEachPiece(sig, a, b, [&](int index, double, double dt) {
      const Mode& mode = sys.mode(index);
      const auto [phi, gamma] = ZeroOrderHold(mode.A, mode.B, dt);
      x = phi * x + gamma * u.values[k];
    });
    record(b);
  }
  return traj;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out.precision(17);
  const int n = traj.states.empty() ? 0 : traj.states.front().size();
  const int p = traj.outputs.empty() ? 0 : traj.outputs.front().size();
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= p; ++i) out << ",y" << i;
  out << "\n";
  for (size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (int i = 0; i < n; ++i) out << "," << traj.states[k](i);
    for (int i = 0; i < p; ++i) out << "," << traj.outputs[k](i);
    out << "\n";
  }
  return out.str();
}

}  // namespace swgain
