#include "swgain/realization.hpp"

#include <gtest/gtest.h>

#include "swgain/flows.hpp"
#include "swgain/gallery.hpp"
#include "swgain/l2gain.hpp"
#include "test_util.hpp"

namespace swgain {
namespace {

using test::BruteObservable;
using test::BruteReachable;

GTEST_TEST(Realization, PlantedDimensionsMatchWordEnumeration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PlantedBlocks planted = planted_block_system(seed);
    EXPECT_EQ(reachable_subspace(planted.sys).dim(), BruteReachable(planted.sys)) << seed;
    EXPECT_EQ(observable_subspace(planted.sys).dim(), BruteObservable(planted.sys)) << seed;
    EXPECT_EQ(reachable_subspace(planted.sys).dim(), planted.reachable) << seed;
    EXPECT_EQ(observable_subspace(planted.sys).dim(), planted.observable) << seed;
    const MinimalRealization mr = minimal_realization(planted.sys);
    EXPECT_EQ(mr.sys_min.n(), planted.minimal) << seed;
    EXPECT_EQ(mr.maps.controllable_dim, planted.reachable) << seed;
  }
}

GTEST_TEST(Realization, BasesAreOrthonormalAndInvariant) {
  const PlantedBlocks planted = planted_block_system(3, 2, 3);
  const SubspaceBasis V = reachable_subspace(planted.sys);
  const int r = V.dim();
  EXPECT_LT((V.basis.transpose() * V.basis - Eigen::MatrixXd::Identity(r, r)).norm(), 1e-12);
  const Eigen::MatrixXd P = V.basis * V.basis.transpose();
  for (const Mode& m : planted.sys.modes()) {
    EXPECT_LT(((Eigen::MatrixXd::Identity(P.rows(), P.cols()) - P) * m.A * V.basis).norm(),
              1e-10);
    EXPECT_LT(((Eigen::MatrixXd::Identity(P.rows(), P.cols()) - P) * m.B).norm(), 1e-10);
  }
}

GTEST_TEST(Realization, PreservesImpulseResponse) {
  const PlantedBlocks planted = planted_block_system(17, 2, 2);
  const MinimalRealization mr = minimal_realization(planted.sys);
  const Signal sig = test::RandomSignal(2, 5, 0.2, 0.9, 5);
  const double H = sig.total_duration();
  for (double s : {0.0, 0.4, 1.1}) {
    for (double t : {1.3, H}) {
      const int i = sig.mode_at(t), j = sig.mode_at(s);
      const Eigen::MatrixXd full = planted.sys.mode(i).C * transition(planted.sys, sig, s, t) *
                                   planted.sys.mode(j).B;
      const Eigen::MatrixXd reduced =
          mr.sys_min.mode(i).C * transition(mr.sys_min, sig, s, t) * mr.sys_min.mode(j).B;
      EXPECT_LT((full - reduced).norm(), 1e-10 * std::max(1.0, full.norm()));
    }
  }
}

GTEST_TEST(Realization, GainInvariance) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PlantedBlocks planted = planted_block_system(40 + seed);
    const MinimalRealization mr = minimal_realization(planted.sys);
    for (std::uint64_t k = 0; k < 3; ++k) {
      const Signal sig = test::RandomSignal(2, 4, 0.3, 1.2, 100 * seed + k);
      const double T = sig.total_duration();
      const double full = gain_for_signal(planted.sys, sig, T, 1e-10).value;
      const double reduced = gain_for_signal(mr.sys_min, sig, T, 1e-10).value;
      EXPECT_NEAR(full, reduced, 1e-6);
    }
  }
}

GTEST_TEST(Realization, ZeroDimensionalCollapse) {
  Mode m{Eigen::MatrixXd::Identity(2, 2) * -1.0, Eigen::MatrixXd::Zero(2, 1),
         Eigen::MatrixXd::Ones(1, 2)};
  const MinimalRealization mr = minimal_realization(SystemSpec(2, 1, 1, {m}, "dead"));
  EXPECT_EQ(mr.sys_min.n(), 0);
  EXPECT_EQ(mr.original_label, "dead");
  EXPECT_EQ(gain_for_signal(mr.sys_min, Signal::Constant(0, 1.0), 1.0).value, 0.0);
}

GTEST_TEST(Similarity, RecoversChangeOfBasis) {
  const SystemSpec sys = test::RandomSystem(3, 1, 1, 2, 21);
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd G = test::RandomMatrix(3, 3, &rng) + 3.0 * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd Gi = G.inverse();
  std::vector<Mode> modes;
  for (const Mode& m : sys.modes()) modes.push_back({Gi * m.A * G, Gi * m.B, m.C * G});
  const SystemSpec other(3, 1, 1, modes);
  const auto found = check_similarity(minimal_realization(sys), minimal_realization(other));
  ASSERT_TRUE(found.has_value());
  const MinimalRealization m1 = minimal_realization(sys);
  const MinimalRealization m2 = minimal_realization(other);
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT((found->inverse() * m1.sys_min.mode(i).A * *found - m2.sys_min.mode(i).A).norm(),
              1e-8);
  }
  std::vector<Mode> perturbed = modes;
  perturbed[1].A(0, 0) += 0.5;
  EXPECT_FALSE(check_similarity(m1, minimal_realization(SystemSpec(3, 1, 1, perturbed))));
  EXPECT_THROW(check_similarity(m1, minimal_realization(test::RandomSystem(2, 1, 1, 2, 1))),
               std::invalid_argument);
}

GTEST_TEST(UniformObservability, Verdicts) {
  const SystemSpec observable = test::RandomSystem(2, 1, 1, 2, 8);
  const UniformObservabilityReport yes = check_uniform_observability(
      observable, SignalClassSpec::Dwell(0.5), 5.0, 16, 1);
  EXPECT_EQ(yes.verdict, UoVerdict::kUniformlyObservable);
  EXPECT_GT(yes.gramian_floor, 0.0);

  const UniformObservabilityReport no = check_uniform_observability(
      example_system(4.5), SignalClassSpec::Arbitrary(), 5.0, 8, 1);
  EXPECT_EQ(no.verdict, UoVerdict::kNotUniformlyObservable);
  EXPECT_NE(no.rationale.find("not uniformly observable"), std::string::npos);
  EXPECT_EQ(ObservabilityRank(example_system(4.5).mode(2).A, example_system(4.5).mode(2).C), 2);
}

}  // namespace
}  // namespace swgain
