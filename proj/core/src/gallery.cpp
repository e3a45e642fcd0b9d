#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "swgain/gallery.hpp"

namespace swgain {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void CheckAlpha(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

// d ln|x| / dθ along each planar mode at angle θ.
struct PlanarRates {
  double alpha;

  double g1() const { return -1.0 / alpha; }
  double g2(double theta) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return (-1.0 + c * s * (1.0 / alpha - alpha)) /
           (c * c / alpha + alpha * s * s);
  }
  double gmax(double theta) const { return std::max(g1(), g2(theta)); }

  // Angles in [0, 2π) where g1 = g2: cos θ = 0 or tan θ = -1/α.
  std::vector<double> switching_angles() const {
    const double t = std::atan(1.0 / alpha);
    std::vector<double> roots{0.5 * kPi, kPi - t, 1.5 * kPi, kTwoPi - t};
    std::sort(roots.begin(), roots.end());
    return roots;
  }
};

double IntegrateGmax(const PlanarRates& rates, double a, double b) {
  if (!(b > a)) return 0.0;
  auto f = [&rates](double theta) { return rates.gmax(theta); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 5,
                                                                      1e-13);
}

// Integral over a list of increasing nodes, with the switching angles
// inserted so that every quadrature interval is smooth.
double IntegrateSmooth(const PlanarRates& rates, double a, double b,
                       const std::vector<double>& kinks) {
  double total = 0.0;
  double lo = a;
  for (double k : kinks) {
    if (k > lo && k < b) {
      total += IntegrateGmax(rates, lo, k);
      lo = k;
    }
  }
  return total + IntegrateGmax(rates, lo, b);
}

}  // namespace

SystemSpec example_system(const ExampleParams& params) {
  const double a = params.alpha;
  CheckAlpha(a);
  Eigen::MatrixXd A1(3, 3), A2(3, 3), A3(3, 3);
  A1 << -1, -a, 0, a, -1, 0, 0, 0, -1;
  A2 << -1, -a, 0, 1.0 / a, -1, 0, 0, 0, -1;
  A3 << -4, 0, 1, 0, -4, 0, 1, 0, -1;
  const Eigen::MatrixXd e3 = Eigen::Vector3d(0, 0, 1);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 1);
  std::vector<Mode> modes{{A1, zero, e3.transpose()},
                          {A2, zero, e3.transpose()},
                          {A3, e3, e3.transpose()}};
  std::ostringstream label;
  label.precision(17);
  label << "example(alpha=" << a << ")";
  return SystemSpec(3, 1, 1, std::move(modes), label.str());
}

SystemSpec example_system(double alpha) { return example_system(ExampleParams{alpha}); }

std::vector<Eigen::MatrixXd> example_planar_pair(double alpha) {
  const SystemSpec sys = example_system(alpha);
  return {sys.mode(0).A.topLeftCorner(2, 2), sys.mode(1).A.topLeftCorner(2, 2)};
}

double planar_return_ratio(double alpha) {
  CheckAlpha(alpha);
  const PlanarRates rates{alpha};
  return std::exp(IntegrateSmooth(rates, 0.0, kTwoPi, rates.switching_angles()));
}

double alpha_star(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  double lo = 2.0;
  double hi = 6.0;
  double r_lo = planar_return_ratio(lo);
  if (!(r_lo < 1.0) || !(planar_return_ratio(hi) > 1.0)) {
    throw std::runtime_error("alpha_star: return ratio does not change sign on [2, 6]");
  }
  while (!(std::abs(r_lo - 1.0) < tol && hi - lo < tol) && hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    const double r = planar_return_ratio(mid);
    if (r < 1.0) {
      lo = mid;
      r_lo = r;
    } else {
      hi = mid;
    }
  }
  return lo;
}

PlanarOrbit::PlanarOrbit(double alpha, int samples) : alpha_(alpha) {
  CheckAlpha(alpha);
  if (samples < 8) throw std::invalid_argument("orbit needs at least 8 samples");
  const PlanarRates rates{alpha};
  const std::vector<double> kinks = rates.switching_angles();
  angles_ = kinks;
  for (int j = 0; j < samples; ++j) {
    const double t = kTwoPi * j / samples;
    const bool near_kink = std::any_of(kinks.begin(), kinks.end(), [t](double k) {
      return std::abs(t - k) < 1e-9;
    });
    if (!near_kink) angles_.push_back(t);
  }
  std::sort(angles_.begin(), angles_.end());
  if (angles_.front() > 0.0) angles_.insert(angles_.begin(), 0.0);
  angles_.push_back(kTwoPi);

  std::vector<double> G(angles_.size(), 0.0);
  for (size_t k = 1; k < angles_.size(); ++k) {
    G[k] = G[k - 1] + IntegrateGmax(rates, angles_[k - 1], angles_[k]);
  }
  const double log_ratio = G.back();
  ratio_ = std::exp(log_ratio);
  const double drift = log_ratio / kTwoPi;
  double floor = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < angles_.size(); ++k) {
    log_radii_.push_back(G[k] - drift * angles_[k]);
    floor = std::min(floor, log_radii_.back());
    // At a switching angle both one-sided slopes agree.
    slopes_.push_back(rates.gmax(angles_[k]) - drift);
  }
  for (double& l : log_radii_) l -= floor;
  // The Hermite pieces can dip below the node values; shift so that the
  // interpolant itself has minimum 1.
  double dip = 0.0;
  for (size_t k = 0; k + 1 < angles_.size(); ++k) {
    for (int j = 1; j < 16; ++j) {
      const double theta = angles_[k] + (angles_[k + 1] - angles_[k]) * j / 16.0;
      dip = std::min(dip, std::log(radius(theta)));
    }
  }
  for (double& l : log_radii_) {
    l -= dip;
    radii_.push_back(std::exp(l));
  }
}

void PlanarOrbit::Locate(double theta, int* k, double* s, double* h) const {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
  int idx = static_cast<int>(it - angles_.begin()) - 1;
  idx = std::clamp(idx, 0, static_cast<int>(angles_.size()) - 2);
  *k = idx;
  *h = angles_[idx + 1] - angles_[idx];
  *s = (theta - angles_[idx]) / *h;
}

double PlanarOrbit::radius(double theta) const {
  int k;
  double s, h;
  Locate(theta, &k, &s, &h);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double p = (2 * s3 - 3 * s2 + 1) * log_radii_[k] +
                   (s3 - 2 * s2 + s) * h * slopes_[k] +
                   (-2 * s3 + 3 * s2) * log_radii_[k + 1] +
                   (s3 - s2) * h * slopes_[k + 1];
  return std::exp(p);
}

double PlanarOrbit::log_slope(double theta) const {
  int k;
  double s, h;
  Locate(theta, &k, &s, &h);
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * log_radii_[k] + (3 * s2 - 4 * s + 1) * h * slopes_[k] +
          (-6 * s2 + 6 * s) * log_radii_[k + 1] + (3 * s2 - 2 * s) * h * slopes_[k + 1]) /
         h;
}

double PlanarOrbit::norm(const Eigen::Vector2d& x) const {
  const double rho = x.norm();
  if (rho == 0.0) return 0.0;
  return rho / radius(std::atan2(x(1), x(0)));
}

Eigen::Vector2d PlanarOrbit::gradient(const Eigen::Vector2d& x) const {
  const double rho = x.norm();
  if (rho == 0.0) return Eigen::Vector2d::Zero();
  const double theta = std::atan2(x(1), x(0));
  const Eigen::Vector2d e_rho = x / rho;
  const Eigen::Vector2d e_theta(-e_rho(1), e_rho(0));
  return (e_rho - log_slope(theta) * e_theta) / radius(theta);
}

double PlanarOrbit::min_radius() const {
  return *std::min_element(radii_.begin(), radii_.end());
}

double PlanarOrbit::max_radius() const {
  return *std::max_element(radii_.begin(), radii_.end());
}

PlanarOrbit worst_case_orbit(double alpha, int samples, double closure_tol) {
  PlanarOrbit orbit(alpha, samples);
  if (!(std::abs(orbit.return_ratio() - 1.0) <= closure_tol)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "worst-case orbit does not close: return ratio " << orbit.return_ratio();
    throw std::runtime_error(msg.str());
  }
  return orbit;
}

std::string orbit_csv(const PlanarOrbit& orbit) {
  std::ostringstream out;
  out.precision(17);
  out << "theta,radius\n";
  for (size_t k = 0; k < orbit.angles().size(); ++k) {
    out << orbit.angles()[k] << ',' << orbit.radii()[k] << '\n';
  }
  return out.str();
}

LyapunovVerification verify_lyapunov_decay(double alpha, int n_samples,
                                           std::uint64_t seed, double radius) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be positive");
  const PlanarOrbit orbit = worst_case_orbit(alpha);
  const SystemSpec sys = example_system(alpha);
  LyapunovVerification rep;
  rep.alpha = alpha;
  rep.samples = n_samples;
  rep.closure_error = std::abs(orbit.return_ratio() - 1.0);

  constexpr int kAngles = 16384;
  rep.min_ring = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kAngles; ++j) {
    const double theta = kTwoPi * (j + 0.5) / kAngles;
    const double R = orbit.radius(theta);
    rep.min_ring = std::min(rep.min_ring, R * R);
    rep.max_ring = std::max(rep.max_ring, R * R);
    const Eigen::Vector2d x(R * std::cos(theta), R * std::sin(theta));
    rep.max_gradient_norm = std::max(rep.max_gradient_norm, orbit.gradient(x).norm());
  }
  for (double R : orbit.radii()) {
    rep.min_ring = std::min(rep.min_ring, R * R);
    rep.max_ring = std::max(rep.max_ring, R * R);
  }
  rep.side_conditions_hold = rep.max_gradient_norm <= std::sqrt(3.0) &&
                             rep.min_ring >= 1.0 - 1e-9 && rep.max_ring <= 3.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  rep.max_planar_derivative = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    Eigen::Vector3d x(normal(rng), normal(rng), normal(rng));
    x *= radius * std::cbrt(unit(rng)) / x.norm();
    int mode = std::min(2, static_cast<int>(3.0 * unit(rng)));
    double u = radius * (2.0 * unit(rng) - 1.0);
    const bool planar = k % 4 == 3;
    if (planar) {
      x(2) = 0.0;
      u = 0.0;
      mode = std::min(1, mode);
    }
    const Mode& m = sys.mode(mode);
    const Eigen::Vector3d dx = m.A * x + m.B.col(0) * u;
    const Eigen::Vector2d xp = x.head<2>();
    const double dV = orbit.norm(xp) * orbit.gradient(xp).dot(dx.head<2>()) + x(2) * dx(2);
    const double bound = -0.25 * x(2) * x(2) + std::abs(u * x(2));
    rep.max_violation = std::max(rep.max_violation, dV - bound);
    if (planar) {
      rep.max_planar_derivative = std::max(rep.max_planar_derivative, dV);
      ++rep.planar_samples;
    }
  }
  if (rep.planar_samples == 0) rep.max_planar_derivative = 0.0;
  return rep;
}

}  // namespace swgain
