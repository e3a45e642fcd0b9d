#include "swgain/flows.hpp"

#include <gtest/gtest.h>

#include "swgain/linalg.hpp"
#include "test_util.hpp"

namespace swgain {
namespace {

using test::EigenExp;
using test::QuadratureGramians;
using test::RandomSignal;
using test::RandomSystem;
using test::RungeKuttaTransition;
using test::Simpson;

GTEST_TEST(Expm, MatchesEigendecomposition) {
  const SystemSpec sys = RandomSystem(4, 1, 1, 3, 11);
  for (const Mode& mode : sys.modes()) {
    for (double t : {0.01, 0.7, 3.0}) {
      EXPECT_LT((expm(mode.A * t) - EigenExp(mode.A, t)).norm(), 1e-10);
    }
  }
}

GTEST_TEST(Expm, NilpotentBlock) {
  Eigen::Matrix3d N;
  // clang-format off
  N << 0, 1, 0,
       0, 0, 1,
       0, 0, 0;
  // clang-format on
  Eigen::Matrix3d expected;
  // clang-format off
  expected << 1, 2, 2,
              0, 1, 2,
              0, 0, 1;
  // clang-format on
  EXPECT_LT((expm(2.0 * N) - expected).norm(), 1e-13);
}

GTEST_TEST(ExponentialQuadratic, MatchesSimpson) {
  const SystemSpec sys = RandomSystem(3, 2, 1, 1, 5);
  const Eigen::MatrixXd& F = sys.mode(0).A;
  const Eigen::MatrixXd Q = sys.mode(0).B * sys.mode(0).B.transpose();
  const double t = 2.5;
  const Eigen::MatrixXd oracle = Simpson(
      [&](double r) {
        const Eigen::MatrixXd E = EigenExp(F, r);
        return Eigen::MatrixXd(E * Q * E.transpose());
      },
      0.0, t, 2000);
  EXPECT_LT((ExponentialQuadratic(F, Q, t) - oracle).norm(), 1e-9);
}

GTEST_TEST(ExponentialQuadratic, LongHorizonStaysFinite) {
  Eigen::MatrixXd F(1, 1);
  F << -1.0;
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(1, 1);
  // ∫_0^t e^{-2r} dr.
  const double t = 200.0;
  EXPECT_NEAR(ExponentialQuadratic(F, Q, t)(0, 0), 0.5 * (1.0 - std::exp(-2.0 * t)),
              1e-12);
}

GTEST_TEST(ZeroOrderHold, ScalarClosedForm) {
  Eigen::MatrixXd A(1, 1), B(1, 1);
  A << -2.0;
  B << 3.0;
  const auto [phi, gamma] = ZeroOrderHold(A, B, 0.4);
  EXPECT_NEAR(phi(0, 0), std::exp(-0.8), 1e-15);
  EXPECT_NEAR(gamma(0, 0), 1.5 * (1.0 - std::exp(-0.8)), 1e-14);
}

GTEST_TEST(Transition, MatchesRungeKutta) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SystemSpec sys = RandomSystem(3, 1, 1, 3, 100 + seed);
    const Signal sig = RandomSignal(3, 6, 0.1, 0.8, 200 + seed);
    const double H = sig.total_duration();
    const Eigen::MatrixXd expected = RungeKuttaTransition(sys, sig, 0.0, H);
    EXPECT_LT((transition(sys, sig, 0.0, H) - expected).norm(), 1e-9 * expected.norm());
  }
}

GTEST_TEST(Transition, Cocycle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SystemSpec sys = RandomSystem(4, 1, 1, 2, 300 + seed);
    const Signal sig = RandomSignal(2, 8, 0.05, 0.6, 400 + seed);
    const double H = sig.total_duration();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, H);
    double s = unif(rng), r = unif(rng), t = unif(rng);
    if (s > r) std::swap(s, r);
    if (r > t) std::swap(r, t);
    if (s > r) std::swap(s, r);
    const Eigen::MatrixXd lhs = transition(sys, sig, s, t);
    const Eigen::MatrixXd rhs = transition(sys, sig, r, t) * transition(sys, sig, s, r);
    EXPECT_LT((lhs - rhs).norm(), 1e-9 * std::max(1.0, lhs.norm()));
    EXPECT_LT((transition(sys, sig, s, s) - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-15);
  }
}

GTEST_TEST(Transition, RejectsBadInterval) {
  const SystemSpec sys = RandomSystem(2, 1, 1, 1, 1);
  const Signal sig = Signal::Constant(0, 1.0);
  EXPECT_THROW(transition(sys, sig, 0.5, 0.2), std::invalid_argument);
  EXPECT_THROW(transition(sys, sig, 0.0, 1.5), std::invalid_argument);
  EXPECT_THROW(transition(sys, Signal::Constant(3, 1.0), 0.0, 1.0), std::invalid_argument);
}

GTEST_TEST(Gramians, MatchQuadrature) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SystemSpec sys = RandomSystem(3, 2, 2, 2, 500 + seed);
    const Signal sig = RandomSignal(2, 5, 0.2, 0.7, 600 + seed);
    const double t0 = 0.13;
    const double t1 = sig.total_duration() - 0.05;
    const GramianPair g = gramians(sys, sig, t0, t1);
    const GramianPair oracle = QuadratureGramians(sys, sig, t0, t1);
    EXPECT_LT((g.wc - oracle.wc).norm(), 1e-7 * std::max(1.0, oracle.wc.norm()));
    EXPECT_LT((g.wo - oracle.wo).norm(), 1e-7 * std::max(1.0, oracle.wo.norm()));
    EXPECT_LT((g.wc - g.wc.transpose()).norm(), 1e-15 * g.wc.norm() + 1e-300);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.wo).eigenvalues().minCoeff(),
              -1e-12);
  }
}

GTEST_TEST(Simulate, MatchesVariationOfConstants) {
  const SystemSpec sys = RandomSystem(2, 1, 1, 2, 77);
  const Signal sig({{0, 0.35}, {1, 0.4}, {0, 0.25}});
  SampledInput u{0.1, {}};
  for (int k = 0; k < 10; ++k) u.values.push_back(Eigen::VectorXd::Constant(1, std::sin(k)));
  const Eigen::Vector2d x0(1.0, -0.5);
  const Trajectory traj = simulate(sys, sig, u, x0);
  ASSERT_EQ(traj.times.size(), 11u);
  // Oracle: fine RK4 on the augmented state with the held input.
  Eigen::VectorXd x = x0;
  const int sub = 400;
  for (int k = 0; k < 10; ++k) {
    const double h = u.step / sub;
    for (int j = 0; j < sub; ++j) {
      const double t = k * u.step + j * h;
      const int mode = sig.mode_at(t + 0.5 * h);
      const Mode& md = sys.mode(mode);
      auto f = [&](const Eigen::VectorXd& z) {
        return Eigen::VectorXd(md.A * z + md.B * u.values[k]);
      };
      const Eigen::VectorXd k1 = f(x);
      const Eigen::VectorXd k2 = f(x + 0.5 * h * k1);
      const Eigen::VectorXd k3 = f(x + 0.5 * h * k2);
      const Eigen::VectorXd k4 = f(x + h * k3);
      x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    EXPECT_LT((traj.states[k + 1] - x).norm(), 1e-10);
  }
  EXPECT_EQ(trajectory_csv(traj).substr(0, 11), "t,x1,x2,y1\n");
}

}  // namespace
}  // namespace swgain
