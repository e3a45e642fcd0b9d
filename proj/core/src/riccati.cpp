#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "swgain/l2gain.hpp"

namespace swgain {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0,
                 kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

struct RiccatiField {
  Eigen::MatrixXd A;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd S;  // γ⁻² B Bᵀ

  Eigen::MatrixXd operator()(const Eigen::MatrixXd& P) const {
    Eigen::MatrixXd AP = A.transpose() * P;
    return AP + AP.transpose() + Q + P * S * P;
  }
};

struct Piece {
  int mode;
  double length;
};

}  // namespace

RiccatiSolution integrate_riccati(const SystemSpec& sys, const Signal& sig,
                                  double T, double gamma,
                                  const RiccatiOptions& opts) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  if (T > sig.total_duration() * (1.0 + 1e-12) + 1e-12) {
    throw std::invalid_argument("horizon exceeds the signal duration");
  }
  const int n = sys.n();
  RiccatiSolution sol;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) {
    sol.feasible = true;
    sol.reached = T;
    sol.P0 = P;
    return sol;
  }

  std::vector<Piece> pieces;
  ForEachPiece(sig, 0.0, T, [&pieces](int mode, double, double len) {
    pieces.push_back({mode, len});
  });
  std::reverse(pieces.begin(), pieces.end());

  const double inv_g2 = 1.0 / (gamma * gamma);
  const double h_min = 1e-14 * std::max(1.0, T);
  double reached = 0.0;
  for (const Piece& piece : pieces) {
    const Mode& m = sys.mode(piece.mode);
    RiccatiField f{m.A, m.C.transpose() * m.C, inv_g2 * m.B * m.B.transpose()};
    const double scale = 1.0 + m.A.cwiseAbs().rowwise().sum().maxCoeff();
    double h = std::min(piece.length, 0.1 / scale);
    double s = 0.0;
    Eigen::MatrixXd k1 = f(P);
    while (s < piece.length) {
      const bool last = s + h >= piece.length;
      if (last) h = piece.length - s;
      const Eigen::MatrixXd k2 = f(P + h * kA21 * k1);
      const Eigen::MatrixXd k3 = f(P + h * (kA31 * k1 + kA32 * k2));
      const Eigen::MatrixXd k4 = f(P + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
      const Eigen::MatrixXd k5 =
          f(P + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
      const Eigen::MatrixXd k6 = f(
          P + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
      Eigen::MatrixXd next =
          P + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      const bool finite = next.allFinite();
      Eigen::MatrixXd k7;
      double err = std::numeric_limits<double>::infinity();
      if (finite) {
        k7 = f(next);
        const Eigen::MatrixXd e =
            h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
        const double size =
            std::max(P.cwiseAbs().maxCoeff(), next.cwiseAbs().maxCoeff());
        err = e.cwiseAbs().maxCoeff() / (opts.atol + opts.rtol * size);
      }
      ++sol.steps;
      if (err <= 1.0) {
        s = last ? piece.length : s + h;
        P = 0.5 * (next + next.transpose());
        k1 = std::move(k7);
        if (P.cwiseAbs().maxCoeff() > opts.escape_norm) {
          sol.reached = reached + s;
          return sol;
        }
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
      } else {
        const double shrink = std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.1;
        h *= std::clamp(shrink, 0.1, 0.9);
        if (h < h_min) {
          sol.reached = reached + s;
          return sol;
        }
      }
    }
    reached += piece.length;
  }
  sol.feasible = true;
  sol.reached = T;
  sol.P0 = P;
  return sol;
}

bool riccati_feasible(const SystemSpec& sys, const Signal& sig, double T,
                      double gamma, const RiccatiOptions& opts) {
  return integrate_riccati(sys, sig, T, gamma, opts).feasible;
}

}  // namespace swgain
