#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swgain/flows.hpp"
#include "swgain/realization.hpp"
#include "swgain/spectral.hpp"
#include "swgain/system.hpp"

namespace swgain {

enum class GainMethod { kRdeBisection, kPowerIteration, kSearch };

std::string to_string(GainMethod method);

struct GainEstimate {
  double value{0.0};
  /// Set when the bisection could not find a feasible γ below 1e12.
  bool infinite{false};
  double horizon{0.0};
  bool infinite_horizon{false};
  GainMethod method{GainMethod::kRdeBisection};
  std::optional<Signal> witness_signal;
  std::optional<SampledInput> witness_input;
  /// ‖y‖ / ‖u‖ of the witness input.
  std::optional<double> witness_input_energy_ratio;
  /// Width of the final bisection bracket, or the power-iteration residual.
  double tolerance{0.0};
  std::vector<std::string> flags;
};

struct RiccatiOptions {
  /// Finite escape is declared when max |P_ij| exceeds this value.
  double escape_norm{1e12};
  double rtol{1e-10};
  double atol{1e-12};
};

struct RiccatiSolution {
  bool feasible{false};
  /// Backward time T - t reached; equals T when feasible.
  double reached{0.0};
  /// P(0) when feasible.
  Eigen::MatrixXd P0;
  int steps{0};
};

/// Integrates -Ṗ = AᵀP + PA + CᵀC + γ⁻² P B Bᵀ P backward from P(T) = 0 over
/// the pieces of `sig`, with an embedded Dormand-Prince 5(4) pair restarted at
/// each switch.
RiccatiSolution integrate_riccati(const SystemSpec& sys, const Signal& sig,
                                  double T, double gamma,
                                  const RiccatiOptions& opts = {});

/// True when the Riccati solution exists on [0, T], which holds exactly when
/// γ is at least the L2 gain over [0, T] of the switched system under `sig`.
bool riccati_feasible(const SystemSpec& sys, const Signal& sig, double T,
                      double gamma, const RiccatiOptions& opts = {});

/// Finite-horizon L2 gain from zero initial state by bisection on the
/// Riccati escape test. The bracket starts at (0, 1] and its upper end is
/// doubled until feasible; iteration stops once the width is below tol times
/// the upper end. The midpoint is reported.
GainEstimate gain_for_signal(const SystemSpec& sys, const Signal& sig,
                             double T, double tol = 1e-4,
                             const RiccatiOptions& opts = {});

struct PowerIterationOptions {
  int max_iters{500};
  /// Stop when successive Rayleigh quotients differ by less than this,
  /// relative.
  double rtol{1e-10};
  std::uint64_t seed{0};
};

/// Lower bound of the L2 gain over inputs held constant on the cells of a
/// grid of spacing grid_step (cells are split at switches). The input to
/// output map is discretized exactly; power iteration on its Gram operator
/// gives the Rayleigh quotient reported as the value, and the corresponding
/// input as the witness.
GainEstimate gain_power_lower(const SystemSpec& sys, const Signal& sig,
                              double T, double grid_step,
                              const PowerIterationOptions& opts = {});

struct GainSearchBudget {
  int max_switches{4};
  /// Switching instants are restricted to {g, 2g, ...} below T. Zero
  /// selects T / 8.
  double grid_step{0.0};
  /// Local refinement of the switching instants of the best signal.
  bool refine{true};
  int refine_iters{12};
  /// Enumeration stops after this many candidate signals (flagged).
  std::int64_t max_signals{200'000};
  int threads{1};
  /// Relative bisection tolerance per signal.
  double tol{1e-4};
};

/// max of gain_for_signal over class-valid piecewise-constant signals on
/// [0, T]: consecutive modes differ, switching instants lie on the grid, the
/// first switch and the gaps between switches are at least τ, and the final
/// piece is free. The candidate sets are nested in τ and in T for a fixed
/// grid step. Signals whose Riccati solution already exists at the current
/// best value are skipped. The result is a lower bound of the class gain.
GainEstimate gain_search(const SystemSpec& sys, const SignalClassSpec& cls,
                         double T, const GainSearchBudget& budget = {});

/// Candidate signals of gain_search in evaluation order.
std::vector<Signal> GainSearchCandidates(int num_modes, double tau, double T,
                                         const GainSearchBudget& budget,
                                         bool* truncated = nullptr);

enum class Verdict { kFinite, kInfinite, kUndetermined };

std::string to_string(Verdict verdict);

struct FinitenessOptions {
  FinitenessOptions() {
    upper.polytope_budget = 600;
    upper.max_escalations = 0;
  }

  RhoSearchOptions search;
  /// The closure only has to decide whether ρ upper < 1, so its budget is
  /// small by default; a bound from an unfinished closure is still valid.
  RhoUpperOptions upper;
  /// Margin on the ρ = 1 comparisons.
  double tol{1e-6};
  /// Horizon and sample count of the uniform observability check.
  double uo_horizon{10.0};
  int uo_samples{32};
  std::uint64_t seed{0};
};

struct FinitenessVerdict {
  Verdict verdict{Verdict::kUndetermined};
  RhoEstimate rho_min_realization;
  UniformObservabilityReport uniform_obs;
  int n_min{0};
  std::string rationale;
};

/// Finite when the minimal realization has ρ upper < 1, infinite when
/// ρ lower > 1 (or ρ lower >= 1 - tol with certified uniform observability),
/// undetermined otherwise.
FinitenessVerdict finiteness_test(const SystemSpec& sys,
                                  const SignalClassSpec& cls,
                                  const FinitenessOptions& opts = {});

struct TauMinOptions {
  RhoSearchOptions search;
  /// Letter spacing of rho_upper as a fraction of τ.
  double upper_step_fraction{0.01};
  double epsilon{1e-3};
  double tol{0.01};
  /// Closure budget of the arbitrary-switching check used when ρ lower at
  /// tau_lo is already below 1.
  int degenerate_budget{600};
};

struct TauMinInterval {
  /// Largest τ found with ρ lower >= 1.
  double reject{0.0};
  /// Smallest τ found with ρ upper < 1.
  double accept{0.0};
  /// Set when ρ upper < 1 already for arbitrary switching, so τ_min = 0.
  bool degenerate{false};
  RhoEstimate at_reject;
  RhoEstimate at_accept;
  std::vector<std::string> flags;
  double width() const { return accept - reject; }
};

/// Brackets τ_min = inf{τ > 0 : ρ(dwell(τ)) < 1} for the minimal
/// realization. The reject end is bisected with ρ lower >= 1 and the accept
/// end with ρ upper < 1, each to `tol`; the gap between the two boundaries
/// reflects the distance between the ρ bounds. Throws std::invalid_argument
/// when the bracket is invalid.
TauMinInterval tau_min(const SystemSpec& sys, double tau_lo, double tau_hi,
                       const TauMinOptions& opts = {});

}  // namespace swgain
