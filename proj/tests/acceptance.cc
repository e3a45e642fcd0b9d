// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Every tolerance is pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "swgain/flows.hpp"
#include "swgain/gallery.hpp"
#include "swgain/l2gain.hpp"
#include "swgain/linalg.hpp"
#include "swgain/realization.hpp"
#include "swgain/spectral.hpp"
#include "test_util.hpp"

namespace swgain {
namespace {

// Criterion 1.
constexpr double kAlphaLo = 4.49;
constexpr double kAlphaHi = 4.52;
constexpr double kAlphaSeconds = 60.0;
// Criterion 2.
constexpr double kGainCeiling = 4.0;
constexpr int kExampleMaxSwitches = 4;
constexpr double kLyapunovViolation = 1e-3;
constexpr int kLyapunovSamples = 10000;
constexpr double kExampleSeconds = 600.0;
// Criterion 3.
constexpr double kPlanarLowerLo = 0.99;
constexpr double kPlanarLowerHi = 1.0;
constexpr double kPlanarUpperLo = 1.0;
constexpr double kPlanarUpperHi = 1.05;
// Criterion 4.
constexpr double kScalarGainTol = 1e-3;
constexpr double kScalarRhoTol = 1e-6;
constexpr double kScalarSeconds = 5.0;
// Criterion 5.
constexpr int kPlantedSystems = 50;
constexpr int kSignalsPerSystem = 20;
constexpr double kGainInvarianceTol = 1e-6;
constexpr double kBisectionTol = 1e-10;
// Criterion 6.
constexpr double kMonotoneSlack = 1e-9;
// Criterion 7.
constexpr double kBracketWidth = 0.05;
constexpr double kFineStep = 0.0075;
constexpr double kTauMinSeconds = 600.0;
// Criterion 8.
constexpr double kCocycleTol = 1e-9;
constexpr double kGramianTol = 1e-7;
constexpr int kPowerInstances = 20;
constexpr double kCertificateSlack = 1e-8;

struct Outcome {
  bool pass{false};
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

Outcome AlphaStar() {
  const auto start = std::chrono::steady_clock::now();
  const double a = alpha_star();
  const double secs = Seconds(start);
  return {a >= kAlphaLo && a <= kAlphaHi && secs < kAlphaSeconds,
          Fmt("alpha* = %.10f, r(alpha*) = %.12f, %.2f s", a, planar_return_ratio(a), secs)};
}

Outcome ExampleGain() {
  const auto start = std::chrono::steady_clock::now();
  const double a = alpha_star();
  const SystemSpec sys = example_system(a);
  GainSearchBudget budget;
  budget.max_switches = kExampleMaxSwitches;
  bool pass = true;
  std::ostringstream detail;
  detail.precision(6);
  for (double T : {5.0, 10.0, 20.0}) {
    const GainEstimate est = gain_search(sys, SignalClassSpec::Arbitrary(), T, budget);
    pass = pass && !est.infinite && est.value <= kGainCeiling;
    detail << "gain(T=" << T << ") = " << est.value << "; ";
  }
  const LyapunovVerification rep = verify_lyapunov_decay(a, kLyapunovSamples);
  pass = pass && rep.max_violation <= kLyapunovViolation && rep.side_conditions_hold;
  const double secs = Seconds(start);
  pass = pass && secs < kExampleSeconds;
  detail << "max violation " << rep.max_violation << " over " << rep.samples << " samples; "
         << secs << " s";
  return {pass, detail.str()};
}

Outcome ExampleMarginality() {
  const double a = alpha_star();
  RhoUpperOptions opts;
  opts.epsilon = 1e-3;
  const RhoEstimate est =
      rho_estimate(example_planar_pair(a), SignalClassSpec::Arbitrary(), {}, opts);
  const FinitenessVerdict v = finiteness_test(example_system(a), SignalClassSpec::Arbitrary());
  const bool rho_ok = est.lower >= kPlanarLowerLo && est.lower <= kPlanarLowerHi &&
                      est.upper >= kPlanarUpperLo && est.upper <= kPlanarUpperHi;
  const bool verdict_ok = v.verdict == Verdict::kUndetermined &&
                          v.rationale.find("not uniformly observable") != std::string::npos;
  return {rho_ok && verdict_ok,
          Fmt("planar rho in [%.12f, %.6f]", est.lower, est.upper) + "; verdict " +
              to_string(v.verdict) + ": " + v.rationale};
}

Outcome UnswitchedOracle() {
  const auto start = std::chrono::steady_clock::now();
  const SystemSpec sys(1, 1, 1,
                       {{Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::MatrixXd::Constant(1, 1, 1.0),
                         Eigen::MatrixXd::Constant(1, 1, 1.0)}});
  const double gain = gain_for_signal(sys, Signal::Constant(0, 50.0), 50.0, 1e-8).value;
  const RhoEstimate rho = rho_estimate(sys.state_matrices(), SignalClassSpec::Arbitrary());
  const double secs = Seconds(start);
  const double e = std::exp(-1.0);
  const bool gain_ok = std::abs(gain - 1.0) <= kScalarGainTol;
  const bool rho_ok = std::abs(rho.lower - e) <= kScalarRhoTol &&
                      std::abs(rho.upper - e) <= kScalarRhoTol;
  return {gain_ok && rho_ok && secs < kScalarSeconds,
          Fmt("gain(T=50) = %.9f (|gain - 1| = %.2e), rho in [%.12f, %.12f]", gain,
              std::abs(gain - 1.0), rho.lower, rho.upper) +
              Fmt(", %.2f s", secs)};
}

Outcome MinimalRealizationEquivalence() {
  int dim_mismatch = 0;
  double worst = 0.0;
  for (int s = 0; s < kPlantedSystems; ++s) {
    const PlantedBlocks planted = planted_block_system(1000 + s);
    if (reachable_subspace(planted.sys).dim() != test::BruteReachable(planted.sys) ||
        observable_subspace(planted.sys).dim() != test::BruteObservable(planted.sys)) {
      ++dim_mismatch;
    }
    const MinimalRealization mr = minimal_realization(planted.sys);
    for (int k = 0; k < kSignalsPerSystem; ++k) {
      const Signal sig = test::RandomSignal(planted.sys.num_modes(), 4, 0.2, 1.0,
                                            static_cast<std::uint64_t>(100000 + 100 * s + k));
      const double T = sig.total_duration();
      const double full = gain_for_signal(planted.sys, sig, T, kBisectionTol).value;
      const double reduced = gain_for_signal(mr.sys_min, sig, T, kBisectionTol).value;
      worst = std::max(worst, std::abs(full - reduced));
    }
  }
  return {dim_mismatch == 0 && worst <= kGainInvarianceTol,
          Fmt("%g dimension mismatches over %g systems, max gain gap %.3e", dim_mismatch,
              kPlantedSystems, worst)};
}

Outcome Monotonicity() {
  const std::vector<SystemSpec> systems = {rotated_nodes_system(),
                                           planted_cqlf_system(2, 2, -0.2, 3)};
  const std::vector<double> taus = {0.2, 0.4, 0.6, 0.8, 1.0};
  const std::vector<double> Ts = {1.0, 2.0, 3.0, 4.0, 5.0};
  GainSearchBudget budget;
  budget.max_switches = 3;
  budget.grid_step = 0.2;
  budget.refine = false;
  budget.tol = kBisectionTol;
  int violations = 0;
  double right_gap = 0.0;
  for (const SystemSpec& sys : systems) {
    std::vector<std::vector<double>> g(taus.size(), std::vector<double>(Ts.size()));
    for (size_t i = 0; i < taus.size(); ++i) {
      for (size_t j = 0; j < Ts.size(); ++j) {
        g[i][j] = gain_search(sys, SignalClassSpec::Dwell(taus[i]), Ts[j], budget).value;
      }
    }
    for (size_t i = 0; i < taus.size(); ++i) {
      for (size_t j = 0; j < Ts.size(); ++j) {
        const double slack = kMonotoneSlack * std::max(1.0, g[i][j]);
        if (i > 0 && g[i][j] > g[i - 1][j] + slack) ++violations;
        if (j > 0 && g[i][j] < g[i][j - 1] - slack) ++violations;
      }
    }
    // ρ lower bound on the τ grid plus right-neighbour samples τ + h.
    std::vector<double> grid;
    for (double tau : taus) {
      for (double h : {0.0, 1e-3, 1e-2, 1e-1}) grid.push_back(tau + h);
    }
    std::sort(grid.begin(), grid.end());
    const std::vector<RhoCurvePoint> curve = rho_curve(sys.state_matrices(), grid);
    for (size_t k = 1; k < curve.size(); ++k) {
      if (curve[k].raw_lower > curve[k - 1].raw_lower + kMonotoneSlack) ++violations;
    }
    for (size_t k = 0; k + 1 < curve.size(); ++k) {
      if (std::abs(grid[k + 1] - grid[k] - 1e-3) < 1e-12) {
        right_gap = std::max(right_gap, curve[k].raw_lower - curve[k + 1].raw_lower);
      }
    }
  }
  return {violations == 0,
          Fmt("%g monotonicity violations over 2 systems x 5 tau x 5 T; max rho gap to "
              "tau + 1e-3 is %.3e",
              violations, right_gap)};
}

Outcome TauMinBracket() {
  const auto start = std::chrono::steady_clock::now();
  const SystemSpec sys = rotated_nodes_system();
  const TauMinInterval iv = tau_min(sys, 0.2, 2.0);
  // Independent location of the crossing on a fine grid: the estimated
  // curve ρ(τ) (the lower bound of rho_curve) is at least one at the last
  // unstable grid point and below one at the next. The crossing is placed by
  // linear interpolation between them.
  std::vector<double> grid;
  for (double tau = 0.6; tau <= 1.2 + 1e-12; tau += kFineStep) grid.push_back(tau);
  const std::vector<RhoCurvePoint> curve = rho_curve(sys.state_matrices(), grid);
  size_t k = 0;
  while (k + 1 < curve.size() && curve[k + 1].raw_lower >= 1.0) ++k;
  if (curve[k].raw_lower < 1.0 || k + 1 == curve.size()) {
    return {false, "the fine grid does not bracket a crossing"};
  }
  const double r0 = curve[k].raw_lower, r1 = curve[k + 1].raw_lower;
  const double crossing = grid[k] + (grid[k + 1] - grid[k]) * (r0 - 1.0) / (r0 - r1);
  // First grid point past the crossing certified by an upper bound below one.
  double certified = std::numeric_limits<double>::quiet_NaN();
  for (size_t j = k + 1; j < grid.size(); ++j) {
    RhoUpperOptions opts;
    opts.epsilon = 1e-3;
    opts.grid_step = grid[j] * 0.01;
    if (rho_upper(sys.state_matrices(), SignalClassSpec::Dwell(grid[j]), opts,
                  &curve[j].estimate)
            .upper < 1.0) {
      certified = grid[j];
      break;
    }
  }
  const double secs = Seconds(start);
  const bool contains = iv.reject <= crossing && crossing <= iv.accept;
  return {!iv.degenerate && iv.width() <= kBracketWidth && contains && secs < kTauMinSeconds,
          Fmt("tau_min in [%.4f, %.4f] (width %.4f); crossing %.4f", iv.reject, iv.accept,
              iv.width(), crossing) +
              Fmt(" between grid points %.4f and %.4f; first grid point with rho upper < 1: ",
                  grid[k], grid[k + 1]) +
              Fmt("%.4f; %.1f s", certified, secs)};
}

Outcome NumericalKernels() {
  double cocycle = 0.0, gram = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SystemSpec sys = test::RandomSystem(3, 2, 2, 3, 5000 + seed);
    const Signal sig = test::RandomSignal(3, 6, 0.1, 0.8, 6000 + seed);
    const double H = sig.total_duration();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, H);
    std::vector<double> t = {unif(rng), unif(rng), unif(rng)};
    std::sort(t.begin(), t.end());
    const Eigen::MatrixXd lhs = transition(sys, sig, t[0], t[2]);
    const Eigen::MatrixXd rhs = transition(sys, sig, t[1], t[2]) * transition(sys, sig, t[0], t[1]);
    cocycle = std::max(cocycle, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
    const GramianPair g = gramians(sys, sig, t[0], t[2]);
    const GramianPair q = test::QuadratureGramians(sys, sig, t[0], t[2]);
    gram = std::max(gram, (g.wc - q.wc).norm() / std::max(1.0, q.wc.norm()));
    gram = std::max(gram, (g.wo - q.wo).norm() / std::max(1.0, q.wo.norm()));
  }
  int power_violations = 0;
  for (int k = 0; k < kPowerInstances; ++k) {
    const SystemSpec sys = test::RandomSystem(2 + k % 3, 1 + k % 2, 1 + k % 2, 2, 7000 + k);
    const Signal sig = test::RandomSignal(2, 4, 0.3, 1.0, 8000 + k);
    const double T = sig.total_duration();
    const GainEstimate ric = gain_for_signal(sys, sig, T, 1e-6);
    PowerIterationOptions opts;
    opts.seed = k;
    const GainEstimate pow = gain_power_lower(sys, sig, T, T / 100.0, opts);
    if (pow.value > ric.value + ric.tolerance) ++power_violations;
  }
  int certificate_failures = 0;
  int checks = 0;
  const std::vector<std::pair<std::vector<Eigen::MatrixXd>, SignalClassSpec>> cases = {
      {rotated_nodes_system().state_matrices(), SignalClassSpec::Dwell(1.0)},
      {rotated_nodes_system().state_matrices(), SignalClassSpec::Dwell(0.6)},
      {planted_cqlf_system(2, 2, -0.3, 2).state_matrices(), SignalClassSpec::Arbitrary()},
      {example_planar_pair(3.0), SignalClassSpec::Arbitrary()}};
  for (const auto& [As, cls] : cases) {
    RhoUpperOptions opts;
    opts.max_escalations = 0;
    PolytopeNorm norm;
    const RhoEstimate est = rho_upper(As, cls, opts, nullptr, &norm);
    if (!est.stabilized) {
      ++certificate_failures;
      continue;
    }
    const double lambda = est.mu_hat * (1.0 + est.epsilon);
    std::mt19937_64 rng(7);
    for (const Letter& l : ClosureLetters(As, cls, opts)) {
      const Eigen::MatrixXd M = expm(As[l.mode] * l.duration);
      const double target = std::pow(lambda, l.duration) * (1.0 + kCertificateSlack);
      ++checks;
      if (norm.InducedBound(M) > target) ++certificate_failures;
      for (const PolytopeNorm::Generator& gen : norm.generators()) {
        const Eigen::VectorXd x = gen.R.transpose() * test::RandomMatrix(gen.R.rows(), 1, &rng);
        ++checks;
        if (norm(M * x) > target * norm(x)) ++certificate_failures;
      }
    }
  }
  return {cocycle <= kCocycleTol && gram <= kGramianTol && power_violations == 0 &&
              certificate_failures == 0,
          Fmt("cocycle %.2e, Gramian %.2e, power > Riccati on %g of 20, ", cocycle, gram,
              power_violations) +
              Fmt("certificate failures %g of %g", certificate_failures, checks)};
}

}  // namespace
}  // namespace swgain

int main() {
  using swgain::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 example alpha*", swgain::AlphaStar},
      {"2 example gain bound", swgain::ExampleGain},
      {"3 example marginality", swgain::ExampleMarginality},
      {"4 unswitched oracle", swgain::UnswitchedOracle},
      {"5 minimal realization equivalence", swgain::MinimalRealizationEquivalence},
      {"6 monotonicity", swgain::Monotonicity},
      {"7 tau_min bracket", swgain::TauMinBracket},
      {"8 numerical kernels", swgain::NumericalKernels},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += !out.pass;
    std::printf("[%s] %s: %s\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
