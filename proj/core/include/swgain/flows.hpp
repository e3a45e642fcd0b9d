#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swgain/system.hpp"

namespace swgain {

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> outputs;
};

struct GramianPair {
  Eigen::MatrixXd wc;
  Eigen::MatrixXd wo;
  double horizon{0.0};
};

/// Zero-order-hold input samples: values[k] is applied on [k·step, (k+1)·step).
struct SampledInput {
  double step{0.0};
  std::vector<Eigen::VectorXd> values;
};

/// The flow Φ(t, s) of ẋ = A_σ(t) x, for 0 <= s <= t <= horizon.
Eigen::MatrixXd transition(const SystemSpec& sys, const Signal& sig, double s,
                           double t);

/// Controllability and observability Gramians over [t0, t1]:
///   wc = ∫ Φ(t0,r) B Bᵀ Φ(t0,r)ᵀ dr,   wo = ∫ Φ(r,t0)ᵀ Cᵀ C Φ(r,t0) dr.
GramianPair gramians(const SystemSpec& sys, const Signal& sig, double t0,
                     double t1);

/// Exact propagation between grid points with the zero-order-hold input term.
/// The trajectory is sampled on the input grid; switches inside a grid cell
/// are handled by splitting the cell.
Trajectory simulate(const SystemSpec& sys, const Signal& sig,
                    const SampledInput& u, const Eigen::VectorXd& x0);

/// CSV with header t,x1..xn,y1..yp.
std::string trajectory_csv(const Trajectory& traj);

/// Visits the pieces of `sig` that intersect [s, t] in time order as
/// (mode, piece start, piece length).
template <typename Visitor>
void ForEachPiece(const Signal& sig, double s, double t, Visitor&& visit) {
  double start = 0.0;
  for (const Segment& seg : sig.segments()) {
    const double end = start + seg.duration;
    const double lo = std::max(start, s);
    const double hi = std::min(end, t);
    if (hi > lo) visit(seg.mode, lo, hi - lo);
    start = end;
    if (start >= t) break;
  }
}

}  // namespace swgain
