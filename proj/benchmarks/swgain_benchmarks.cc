#include <benchmark/benchmark.h>

#include "swgain/flows.hpp"
#include "swgain/gallery.hpp"
#include "swgain/l2gain.hpp"
#include "swgain/linalg.hpp"
#include "swgain/spectral.hpp"

namespace swgain {
namespace {

Signal Alternating(int pieces, double len) {
  std::vector<Segment> segs;
  for (int k = 0; k < pieces; ++k) segs.push_back({k % 2, len});
  return Signal(segs);
}

void BM_Expm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(expm(A));
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(8)->Arg(32);

void BM_Transition(benchmark::State& state) {
  const SystemSpec sys = rotated_nodes_system();
  const Signal sig = Alternating(static_cast<int>(state.range(0)), 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(transition(sys, sig, 0.0, sig.total_duration()));
  }
}
BENCHMARK(BM_Transition)->Arg(10)->Arg(100);

void BM_Gramians(benchmark::State& state) {
  const SystemSpec sys = example_system(4.5);
  std::vector<Segment> segs;
  for (int k = 0; k < 12; ++k) segs.push_back({k % 3, 0.5});
  const Signal sig(segs);
  for (auto _ : state) benchmark::DoNotOptimize(gramians(sys, sig, 0.0, 6.0));
}
BENCHMARK(BM_Gramians);

void BM_RhoLower(benchmark::State& state) {
  const std::vector<Eigen::MatrixXd> As = rotated_nodes_system().state_matrices();
  const SignalClassSpec cls = SignalClassSpec::Dwell(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(rho_lower(As, cls).lower);
}
BENCHMARK(BM_RhoLower)->Unit(benchmark::kMillisecond);

void BM_RhoUpper(benchmark::State& state) {
  const std::vector<Eigen::MatrixXd> As = rotated_nodes_system().state_matrices();
  const SignalClassSpec cls = SignalClassSpec::Dwell(1.0);
  const RhoEstimate lower = rho_lower(As, cls);
  for (auto _ : state) benchmark::DoNotOptimize(rho_upper(As, cls, {}, &lower).upper);
}
BENCHMARK(BM_RhoUpper)->Unit(benchmark::kMillisecond);

void BM_GainForSignal(benchmark::State& state) {
  const SystemSpec sys = rotated_nodes_system();
  const Signal sig = Alternating(8, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gain_for_signal(sys, sig, 8.0).value);
}
BENCHMARK(BM_GainForSignal)->Unit(benchmark::kMillisecond);

void BM_GainPowerLower(benchmark::State& state) {
  const SystemSpec sys = rotated_nodes_system();
  const Signal sig = Alternating(8, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gain_power_lower(sys, sig, 8.0, 0.05).value);
  }
}
BENCHMARK(BM_GainPowerLower)->Unit(benchmark::kMillisecond);

void BM_GainSearch(benchmark::State& state) {
  const SystemSpec sys = example_system(4.5);
  GainSearchBudget budget;
  budget.max_switches = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gain_search(sys, SignalClassSpec::Arbitrary(), 5.0, budget).value);
  }
}
BENCHMARK(BM_GainSearch)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace swgain

BENCHMARK_MAIN();
