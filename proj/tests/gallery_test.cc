#include "swgain/gallery.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "swgain/linalg.hpp"
#include "swgain/spectral.hpp"

namespace swgain {
namespace {

GTEST_TEST(Example, Structure) {
  const SystemSpec sys = example_system(4.5);
  ASSERT_EQ(sys.num_modes(), 3);
  EXPECT_EQ(sys.n(), 3);
  EXPECT_EQ(sys.mode(0).B.norm(), 0.0);
  EXPECT_EQ(sys.mode(1).B.norm(), 0.0);
  EXPECT_GT(sys.mode(2).B.norm(), 0.0);
  for (const Mode& m : sys.modes()) EXPECT_LT(SpectralAbscissa(m.A), 0.0);
  const std::vector<Eigen::MatrixXd> pair = example_planar_pair(4.5);
  ASSERT_EQ(pair.size(), 2u);
  EXPECT_LT((pair[0] - sys.mode(0).A.topLeftCorner(2, 2)).norm(), 1e-15);
}

// Oracle: classical RK4 on the planar state, picking at every step the mode
// with the larger growth of ln|x| per unit angle. Both modes turn the state
// counterclockwise.
double RungeKuttaReturnRatio(double alpha) {
  const std::vector<Eigen::MatrixXd> As = example_planar_pair(alpha);
  Eigen::Vector2d x(1.0, 0.0);
  auto field = [&](const Eigen::Vector2d& z) {
    auto per_angle = [&](const Eigen::Vector2d& v) {
      return z.dot(v) / (z(0) * v(1) - z(1) * v(0));
    };
    Eigen::Vector2d best = As[0] * z;
    for (size_t i = 1; i < As.size(); ++i) {
      const Eigen::Vector2d v = As[i] * z;
      if (per_angle(v) > per_angle(best)) best = v;
    }
    return best;
  };
  double angle = 0.0;
  const double h = 2e-5;
  while (true) {
    const Eigen::Vector2d k1 = field(x);
    const Eigen::Vector2d k2 = field(x + 0.5 * h * k1);
    const Eigen::Vector2d k3 = field(x + 0.5 * h * k2);
    const Eigen::Vector2d k4 = field(x + h * k3);
    const Eigen::Vector2d next = x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    double dtheta = std::atan2(next(1), next(0)) - std::atan2(x(1), x(0));
    if (dtheta < -M_PI) dtheta += 2 * M_PI;
    if (angle + dtheta >= 2 * M_PI) {
      // Linear interpolation of ln|x| to the crossing of the positive axis.
      const double s = (2 * M_PI - angle) / dtheta;
      return std::exp((1 - s) * std::log(x.norm()) + s * std::log(next.norm()));
    }
    angle += dtheta;
    x = next;
  }
}

GTEST_TEST(Example, ReturnRatioMatchesRungeKutta) {
  for (double alpha : {3.0, 4.5, 6.0}) {
    EXPECT_NEAR(planar_return_ratio(alpha), RungeKuttaReturnRatio(alpha),
                2e-4 * planar_return_ratio(alpha))
        << alpha;
  }
}

GTEST_TEST(Example, AlphaStar) {
  const double a = alpha_star();
  EXPECT_NEAR(a, 4.5047, 1e-3);
  EXPECT_LE(planar_return_ratio(a), 1.0);
  EXPECT_GT(planar_return_ratio(a + 1e-6), 1.0);
  EXPECT_LT(planar_return_ratio(2.0), 1.0);
  EXPECT_GT(planar_return_ratio(6.0), 1.0);
}

GTEST_TEST(Orbit, ClosesAndInterpolates) {
  const double a = alpha_star();
  const PlanarOrbit orbit = worst_case_orbit(a);
  EXPECT_NEAR(orbit.return_ratio(), 1.0, 1e-9);
  EXPECT_GE(orbit.min_radius(), 1.0 - 1e-12);
  EXPECT_NEAR(orbit.min_radius(), 1.0, 1e-6);
  EXPECT_NEAR(orbit.radius(0.0), orbit.radius(2 * M_PI), 1e-12);
  for (size_t k = 0; k < orbit.angles().size(); ++k) {
    EXPECT_NEAR(orbit.radius(orbit.angles()[k]), orbit.radii()[k], 1e-12);
  }
  // v is one on the orbit and homogeneous of degree one.
  const Eigen::Vector2d x = orbit.radius(1.0) * Eigen::Vector2d(std::cos(1.0), std::sin(1.0));
  EXPECT_NEAR(orbit.norm(x), 1.0, 1e-12);
  EXPECT_NEAR(orbit.norm(3.0 * x), 3.0, 1e-12);
  // The analytic gradient matches central differences.
  const Eigen::Vector2d y(0.3, -1.1);
  const double e = 1e-6;
  const Eigen::Vector2d fd((orbit.norm(y + Eigen::Vector2d(e, 0)) - orbit.norm(y - Eigen::Vector2d(e, 0))) / (2 * e),
                           (orbit.norm(y + Eigen::Vector2d(0, e)) - orbit.norm(y - Eigen::Vector2d(0, e))) / (2 * e));
  EXPECT_LT((orbit.gradient(y) - fd).norm(), 1e-6);
  EXPECT_THROW(worst_case_orbit(3.0), std::runtime_error);
  EXPECT_EQ(orbit_csv(orbit).substr(0, 13), "theta,radius\n");
}

GTEST_TEST(Lyapunov, DecayAtAlphaStar) {
  const LyapunovVerification rep = verify_lyapunov_decay(alpha_star(), 2000, 3);
  EXPECT_LE(rep.max_violation, 1e-3);
  EXPECT_TRUE(rep.side_conditions_hold);
  EXPECT_GE(rep.min_ring, 1.0 - 1e-9);
  EXPECT_GT(rep.planar_samples, 0);
}

GTEST_TEST(Planted, InstancesHaveDocumentedShape) {
  const SystemSpec cqlf = planted_cqlf_system(3, 2, -0.2, 1);
  EXPECT_EQ(cqlf.n(), 3);
  EXPECT_EQ(cqlf.num_modes(), 2);
  const SystemSpec nodes = rotated_nodes_system();
  for (const Mode& m : nodes.modes()) EXPECT_NEAR(m.A.determinant(), 1.0, 1e-12);
  EXPECT_NEAR(nodes.mode(0).A.trace(), -10.1, 1e-12);
  EXPECT_NEAR(nodes.mode(1).A.trace(), -10.1, 1e-12);
  const PlantedBlocks b = planted_block_system(5);
  EXPECT_LE(b.minimal, std::min(b.reachable, b.observable));
  EXPECT_GE(b.sys.n(), b.reachable + b.observable - b.minimal);
}

}  // namespace
}  // namespace swgain
