#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swgain/system.hpp"

namespace swgain {

struct ExampleParams {
  double alpha{1.0};
};

/// The three-mode system on R³ with
///   A_1 = [[-1,-α,0],[α,-1,0],[0,0,-1]],
///   A_2 = [[-1,-α,0],[1/α,-1,0],[0,0,-1]],
///   A_3 = [[-4,0,1],[0,-4,0],[1,0,-1]],
/// b_1 = b_2 = 0, b_3 = e_3 and c_i = e_3.
SystemSpec example_system(const ExampleParams& params);
SystemSpec example_system(double alpha);

/// Upper-left 2 × 2 blocks of A_1 and A_2.
std::vector<Eigen::MatrixXd> example_planar_pair(double alpha);

/// Growth factor of |x| over one full turn of the planar pair under the
/// switching law that maximizes d ln|x| / dθ at each angle. Both modes turn
/// counterclockwise, so the worst case over all switching laws (including
/// chattering) is attained by this law.
double planar_return_ratio(double alpha);

/// Root of r(α) = 1 in [2, 6] by bisection, stopping when |r - 1| < tol at
/// the stable end of a bracket narrower than tol. The stable end is returned.
double alpha_star(double tol = 1e-10);

/// The closed worst-case orbit Γ = {ρ = R(θ)} of the planar pair, with
/// ln R(θ) = ∫₀^θ max(g_1, g_2) dφ - (θ / 2π) ln r(α) normalized so that
/// min R = 1. The radial function is stored on an angle grid that contains
/// the switching angles and interpolated by cubic Hermite pieces.
class PlanarOrbit {
 public:
  PlanarOrbit(double alpha, int samples);

  double alpha() const { return alpha_; }
  /// Return ratio r(α) before the closing correction.
  double return_ratio() const { return ratio_; }
  double radius(double theta) const;
  /// d ln R / dθ of the interpolant.
  double log_slope(double theta) const;
  /// v(x) = |x| / R(θ(x)), the planar norm whose unit sphere is Γ.
  double norm(const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const;

  const std::vector<double>& angles() const { return angles_; }
  const std::vector<double>& radii() const { return radii_; }
  double min_radius() const;
  double max_radius() const;

 private:
  void Locate(double theta, int* k, double* s, double* h) const;

  double alpha_;
  double ratio_;
  std::vector<double> angles_;
  std::vector<double> log_radii_;
  std::vector<double> slopes_;
  std::vector<double> radii_;
};

/// Throws std::runtime_error when |r(α) - 1| exceeds closure_tol.
PlanarOrbit worst_case_orbit(double alpha, int samples = 2048,
                             double closure_tol = 1e-6);

/// CSV with header theta,radius over the stored angles.
std::string orbit_csv(const PlanarOrbit& orbit);

struct LyapunovVerification {
  double alpha{0.0};
  int samples{0};
  /// max over samples of dV/dt - (-x_3² / 4 + |u x_3|), floored at 0.
  double max_violation{0.0};
  /// max dV/dt over samples with u = 0 and x_3 = 0.
  double max_planar_derivative{0.0};
  int planar_samples{0};
  double max_gradient_norm{0.0};
  /// Range of x_1² + x_2² on Γ.
  double min_ring{0.0};
  double max_ring{0.0};
  double closure_error{0.0};
  bool side_conditions_hold{false};
};

/// Samples states uniformly in the ball of the given radius, modes uniformly
/// and inputs uniformly in [-radius, radius], and checks the decay inequality
/// for V(x) = (v(x_1, x_2)² + x_3²) / 2 along each mode. One sample in four
/// has u = 0 and x_3 = 0.
LyapunovVerification verify_lyapunov_decay(double alpha, int n_samples,
                                           std::uint64_t seed = 0,
                                           double radius = 10.0);

// Planted instances.

/// Modes A_i = L⁻ᵀ Ã_i Lᵀ with Ã_i + Ã_iᵀ ≼ 2β I, so that P = L Lᵀ
/// satisfies A_iᵀ P + P A_i ≼ 2β P. B and C are random.
SystemSpec planted_cqlf_system(int n, int num_modes, double beta,
                               std::uint64_t seed);

/// R_θ [[-0.1, k], [0, -10]] R_θᵀ at θ = 0 and θ = π/2. Both modes are
/// Hurwitz; fast switching is unstable and dwell times above about 0.87
/// (for k = 10.8) are stable.
SystemSpec rotated_nodes_system(double k = 10.8);

/// diag(-1, -2) and diag(-2, -1).
SystemSpec commuting_pair_system();

/// Scalar modes (-1, 1, 1) and (-1, 2, 2).
SystemSpec gain_pair_system();

struct PlantedBlocks {
  SystemSpec sys;
  /// Generic dimensions of the planted structure.
  int reachable{0};
  int observable{0};
  int minimal{0};
};

/// Block-diagonal modes over reachable-observable, reachable-unobservable,
/// unreachable-observable and unreachable-unobservable blocks of random
/// sizes, conjugated by a random orthogonal matrix.
PlantedBlocks planted_block_system(std::uint64_t seed, int max_block = 2,
                                   int num_modes = 2);

}  // namespace swgain
