#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "swgain/l2gain.hpp"
#include "swgain/linalg.hpp"

namespace swgain {

std::string to_string(GainMethod method) {
  switch (method) {
    case GainMethod::kRdeBisection:
      return "rde_bisection";
    case GainMethod::kPowerIteration:
      return "power_iteration";
    case GainMethod::kSearch:
      return "search";
  }
  return "unknown";
}

namespace {

void CheckHorizon(const Signal& sig, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (T > sig.total_duration() * (1.0 + 1e-12) + 1e-12) {
    throw std::invalid_argument("horizon exceeds the signal duration");
  }
}

// The output vanishes identically when every mode visited on [0, T] has
// B = 0 or every one has C = 0.
bool TriviallyZero(const SystemSpec& sys, const Signal& sig, double T) {
  bool all_b_zero = true;
  bool all_c_zero = true;
  ForEachPiece(sig, 0.0, T, [&](int mode, double, double) {
    all_b_zero = all_b_zero && sys.mode(mode).B.isZero(0.0);
    all_c_zero = all_c_zero && sys.mode(mode).C.isZero(0.0);
  });
  return sys.n() == 0 || all_b_zero || all_c_zero;
}

}  // namespace

GainEstimate gain_for_signal(const SystemSpec& sys, const Signal& sig,
                             double T, double tol,
                             const RiccatiOptions& opts) {
  CheckHorizon(sig, T);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  GainEstimate est;
  est.horizon = T;
  est.method = GainMethod::kRdeBisection;
  est.witness_signal = sig.truncated(T);
  if (TriviallyZero(sys, sig, T)) return est;

  double lo = 0.0;
  double hi = 1.0;
  while (!riccati_feasible(sys, sig, T, hi, opts)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) {
      est.value = std::numeric_limits<double>::infinity();
      est.infinite = true;
      est.flags.push_back("no_feasible_gamma");
      return est;
    }
  }
  while (hi - lo > tol * hi && hi > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (riccati_feasible(sys, sig, T, mid, opts)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  est.value = 0.5 * (lo + hi);
  est.tolerance = hi - lo;
  return est;
}

namespace {

struct Cell {
  int input;  // index of the grid cell whose input value applies
  Eigen::MatrixXd Phi;
  Eigen::MatrixXd Gamma;
  Eigen::MatrixXd Qxx;
  Eigen::MatrixXd Qxu;
  Eigen::MatrixXd Quu;
};

Cell MakeCell(const Mode& mode, double len, int input) {
  const int n = static_cast<int>(mode.A.rows());
  const int m = static_cast<int>(mode.B.cols());
  Cell cell;
  cell.input = input;
  auto zoh = ZeroOrderHold(mode.A, mode.B, len);
  cell.Phi = std::move(zoh.first);
  cell.Gamma = std::move(zoh.second);
  // z = (x, u) evolves by ż = F z; the cost is ∫ zᵀ diag(CᵀC, 0) z.
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m, n + m);
  F.topLeftCorner(n, n) = mode.A;
  F.topRightCorner(n, m) = mode.B;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n + m, n + m);
  W.topLeftCorner(n, n) = mode.C.transpose() * mode.C;
  Eigen::MatrixXd Q = ExponentialQuadratic(F.transpose(), W, len);
  Q = 0.5 * (Q + Q.transpose()).eval();
  cell.Qxx = Q.topLeftCorner(n, n);
  cell.Qxu = Q.topRightCorner(n, m);
  cell.Quu = Q.bottomRightCorner(m, m);
  return cell;
}

}  // namespace

GainEstimate gain_power_lower(const SystemSpec& sys, const Signal& sig,
                              double T, double grid_step,
                              const PowerIterationOptions& opts) {
  CheckHorizon(sig, T);
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
  const int n = sys.n();
  const int m = sys.m();
  const int num_inputs =
      std::max(1, static_cast<int>(std::ceil(T / grid_step * (1.0 - 1e-12))));

  GainEstimate est;
  est.horizon = T;
  est.method = GainMethod::kPowerIteration;
  est.witness_signal = sig.truncated(T);

  // Cells: the input grid refined at the switching instants.
  std::vector<double> cuts;
  for (int k = 0; k <= num_inputs; ++k) cuts.push_back(std::min(k * grid_step, T));
  for (double b : sig.breakpoints()) {
    if (b > 0.0 && b < T) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Cell> cells;
  std::vector<std::vector<Cell>> full(sys.num_modes());
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (!(b - a > 1e-14 * std::max(1.0, T))) continue;
    const int input = std::min(num_inputs - 1, static_cast<int>(std::floor(
                                                   (0.5 * (a + b)) / grid_step)));
    const int mode = sig.mode_at(0.5 * (a + b));
    if (std::abs((b - a) - grid_step) <= 1e-12 * grid_step) {
      if (full[mode].empty()) full[mode].push_back(MakeCell(sys.mode(mode), grid_step, 0));
      Cell cell = full[mode].front();
      cell.input = input;
      cells.push_back(std::move(cell));
    } else {
      cells.push_back(MakeCell(sys.mode(mode), b - a, input));
    }
  }
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(num_inputs);
  for (int j = 0; j < num_inputs; ++j) {
    weight(j) = std::min((j + 1) * grid_step, T) - j * grid_step;
  }

  // (H u)_j = ½ ∂/∂u_j ‖y‖², so that ‖y‖² = Σ u_jᵀ (H u)_j.
  auto apply = [&](const Eigen::MatrixXd& u) {
    std::vector<Eigen::VectorXd> xs(cells.size());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (size_t k = 0; k < cells.size(); ++k) {
      xs[k] = x;
      x = cells[k].Phi * x + cells[k].Gamma * u.col(cells[k].input);
    }
    Eigen::MatrixXd hu = Eigen::MatrixXd::Zero(m, num_inputs);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    for (size_t k = cells.size(); k-- > 0;) {
      const Cell& c = cells[k];
      const Eigen::VectorXd uk = u.col(c.input);
      hu.col(c.input) +=
          c.Qxu.transpose() * xs[k] + c.Quu * uk + c.Gamma.transpose() * p;
      p = c.Qxx * xs[k] + c.Qxu * uk + c.Phi.transpose() * p;
    }
    return hu;
  };
  auto energy = [&](const Eigen::MatrixXd& u) {
    return (u.array().square().colwise().sum().transpose() * weight.array()).sum();
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd u(m, num_inputs);
  for (int j = 0; j < num_inputs; ++j) {
    for (int i = 0; i < m; ++i) u(i, j) = 1.0 + 0.1 * normal(rng);
  }
  u /= std::sqrt(energy(u));
  double rayleigh = 0.0;
  double change = 0.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    const Eigen::MatrixXd hu = apply(u);
    const double next = (u.array() * hu.array()).sum();
    change = std::abs(next - rayleigh);
    rayleigh = std::max(next, 0.0);
    Eigen::MatrixXd v = hu.array().rowwise() / weight.transpose().array();
    const double e = energy(v);
    if (!(e > 0.0)) break;
    v /= std::sqrt(e);
    if (it > 0 && change <= opts.rtol * rayleigh) break;
    u = std::move(v);
  }
  est.value = std::sqrt(rayleigh);
  est.witness_input_energy_ratio = est.value;
  est.tolerance = est.value > 0.0 ? change / (2.0 * est.value) : 0.0;
  SampledInput witness;
  witness.step = grid_step;
  for (int j = 0; j < num_inputs; ++j) witness.values.push_back(u.col(j));
  est.witness_input = std::move(witness);
  return est;
}

std::vector<Signal> GainSearchCandidates(int num_modes, double tau, double T,
                                         const GainSearchBudget& budget,
                                         bool* truncated) {
  const double g = budget.grid_step > 0.0 ? budget.grid_step : T / 8.0;
  std::vector<double> grid;
  for (int j = 1; j * g < T * (1.0 - 1e-12); ++j) grid.push_back(j * g);
  const double slack = 1e-12 * std::max(1.0, tau);

  std::vector<Signal> out;
  bool cut = false;
  std::vector<int> modes;
  std::vector<double> times;
  auto emit = [&]() {
    std::vector<Segment> segs;
    double prev = 0.0;
    for (size_t j = 0; j < times.size(); ++j) {
      segs.push_back({modes[j], times[j] - prev});
      prev = times[j];
    }
    segs.push_back({modes.back(), T - prev});
    out.emplace_back(std::move(segs));
  };
  // Extends (modes, times) by `left` more switches, each after grid index
  // `from`.
  auto extend = [&](auto&& self, int left, size_t from) -> void {
    if (cut) return;
    if (left == 0) {
      if (static_cast<std::int64_t>(out.size()) >= budget.max_signals) {
        cut = true;
        return;
      }
      emit();
      return;
    }
    const double prev = times.empty() ? 0.0 : times.back();
    for (size_t j = from; j < grid.size(); ++j) {
      if (grid[j] - prev < tau - slack) continue;
      for (int next = 0; next < num_modes; ++next) {
        if (next == modes.back()) continue;
        times.push_back(grid[j]);
        modes.push_back(next);
        self(self, left - 1, j + 1);
        times.pop_back();
        modes.pop_back();
        if (cut) return;
      }
    }
  };
  const int max_switches = num_modes > 1 ? budget.max_switches : 0;
  for (int k = 0; k <= max_switches && !cut; ++k) {
    for (int first = 0; first < num_modes && !cut; ++first) {
      modes.assign(1, first);
      times.clear();
      extend(extend, k, 0);
    }
  }
  if (truncated != nullptr) *truncated = cut;
  return out;
}

namespace {

std::vector<double> SwitchTimes(const Signal& sig) {
  std::vector<double> times;
  double t = 0.0;
  const auto& segs = sig.segments();
  for (size_t j = 0; j + 1 < segs.size(); ++j) {
    t += segs[j].duration;
    times.push_back(t);
  }
  return times;
}

Signal WithSwitchTimes(const Signal& sig, const std::vector<double>& times,
                       double T) {
  std::vector<Segment> segs;
  double prev = 0.0;
  for (size_t j = 0; j < times.size(); ++j) {
    segs.push_back({sig.segments()[j].mode, times[j] - prev});
    prev = times[j];
  }
  segs.push_back({sig.segments().back().mode, T - prev});
  return Signal(std::move(segs));
}

constexpr size_t kBatch = 64;

}  // namespace

GainEstimate gain_search(const SystemSpec& sys, const SignalClassSpec& cls,
                         double T, const GainSearchBudget& budget) {
  if (cls.kind != ClassKind::kArbitrary && cls.kind != ClassKind::kDwell) {
    throw std::invalid_argument("gain_search supports arbitrary and dwell classes");
  }
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (budget.max_switches < 0 || budget.max_signals <= 0 || budget.grid_step < 0.0 ||
      !(budget.tol > 0.0)) {
    throw std::invalid_argument("gain search budget is empty");
  }
  const double tau = cls.dwell_time();
  bool truncated = false;
  const std::vector<Signal> candidates =
      GainSearchCandidates(sys.num_modes(), tau, T, budget, &truncated);
  if (candidates.empty()) throw std::invalid_argument("gain search budget is empty");

  const int threads = std::max(1, budget.threads);
  double best = 0.0;
  int best_index = -1;
  GainEstimate best_est;
  std::vector<std::optional<GainEstimate>> results(kBatch);
  // Batches are screened against the best value at the start of the batch
  // and reduced in index order, so the result does not depend on `threads`.
  for (size_t start = 0; start < candidates.size(); start += kBatch) {
    const size_t count = std::min(kBatch, candidates.size() - start);
    std::fill(results.begin(), results.end(), std::nullopt);
    const double threshold = best;
    auto work = [&](size_t k) {
      const Signal& sig = candidates[start + k];
      if (threshold > 0.0 && riccati_feasible(sys, sig, T, threshold)) return;
      results[k] = gain_for_signal(sys, sig, T, budget.tol);
    };
    if (threads == 1 || count == 1) {
      for (size_t k = 0; k < count; ++k) work(k);
    } else {
      std::atomic<size_t> next{0};
      std::vector<std::thread> pool;
      for (int t = 0; t < std::min<int>(threads, static_cast<int>(count)); ++t) {
        pool.emplace_back([&]() {
          for (size_t k = next++; k < count; k = next++) work(k);
        });
      }
      for (std::thread& th : pool) th.join();
    }
    for (size_t k = 0; k < count; ++k) {
      if (results[k] && (best_index < 0 || results[k]->value > best)) {
        best = results[k]->value;
        best_index = static_cast<int>(start + k);
        best_est = *results[k];
      }
    }
  }
  if (best_index < 0) {
    best_est = gain_for_signal(sys, candidates.front(), T, budget.tol);
    best_index = 0;
  }

  Signal best_signal = candidates[best_index];
  if (budget.refine && best_signal.segments().size() > 1 && !best_est.infinite) {
    const double g = budget.grid_step > 0.0 ? budget.grid_step : T / 8.0;
    const double slack = 1e-12 * std::max(1.0, tau);
    std::vector<double> times = SwitchTimes(best_signal);
    double h = 0.5 * g;
    for (int it = 0; it < budget.refine_iters; ++it) {
      bool improved = false;
      for (size_t j = 0; j < times.size(); ++j) {
        for (double dir : {-1.0, 1.0}) {
          std::vector<double> trial = times;
          trial[j] += dir * h;
          bool valid = trial.back() < T * (1.0 - 1e-12);
          double prev = 0.0;
          for (double t : trial) {
            valid = valid && t - prev > 0.0 && t - prev >= tau - slack;
            prev = t;
          }
          if (!valid) continue;
          const Signal cand = WithSwitchTimes(best_signal, trial, T);
          if (riccati_feasible(sys, cand, T, best)) continue;
          GainEstimate est = gain_for_signal(sys, cand, T, budget.tol);
          if (est.value > best) {
            best = est.value;
            best_est = std::move(est);
            best_signal = cand;
            times = std::move(trial);
            improved = true;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
  }

  best_est.method = GainMethod::kSearch;
  best_est.witness_signal = best_signal;
  if (truncated) best_est.flags.push_back("enumeration_truncated");
  return best_est;
}

}  // namespace swgain
