#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "swgain/flows.hpp"
#include "swgain/system.hpp"

namespace swgain {

struct Letter {
  int mode{0};
  double duration{0.0};
};

/// A finite mode/duration sequence. first_dwell and last_dwell are the
/// lengths of the first and last maximal constant pieces, so that two words
/// whose boundary pieces last at least τ concatenate to a word with the same
/// property.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  double total_time() const { return total_; }
  double first_dwell() const;
  double last_dwell() const;

  /// Every maximal constant piece, including the first and the last, lasts at
  /// least tau.
  bool IsValidForDwell(double tau) const;

  Word concatenate(const Word& other) const;
  Signal to_signal() const;

 private:
  std::vector<Letter> letters_;
  double total_{0.0};
};

/// Ordered product of e^{A_i Δ_i}, latest factor on the left, and the total
/// time of the word.
std::pair<Eigen::MatrixXd, double> word_flow(const SystemSpec& sys,
                                             const Word& word);
Eigen::MatrixXd WordFlow(const std::vector<Eigen::MatrixXd>& As,
                         const Word& word);

struct RhoEstimate {
  double tau{0.0};
  double lower{0.0};
  double upper{std::numeric_limits<double>::infinity()};
  Word witness;
  std::vector<double> generator_grid;
  double inflation{1.0};
  /// Growth rate candidate μ̂ and safety margin ε with λ = μ̂(1 + ε).
  double mu_hat{0.0};
  double epsilon{0.0};
  int polytope_size{0};
  bool stabilized{false};
  std::vector<std::string> flags;
};

struct RhoSearchOptions {
  int max_letters{4};
  /// Explicit duration grid. When empty, grid_points durations are spread
  /// over [τ, τ + grid_span] (starting one spacing above zero when τ = 0).
  std::vector<double> duration_grid;
  int grid_points{8};
  /// Zero selects 2 · max(τ, 0.5).
  double grid_span{0.0};
  int refine_iters{30};
  /// Number of best words passed to the refinement stage.
  int refine_candidates{4};
  /// Upper limit on enumerated words; the search is truncated and flagged
  /// beyond it.
  std::int64_t max_words{2'000'000};
  int threads{1};
  /// Additional words evaluated as candidates when valid for the class.
  std::vector<Word> seeds;
};

struct RhoUpperOptions {
  /// λ = μ̂(1 + ε) is the contraction target of the polytope closure.
  double epsilon{0.01};
  /// Letter spacing δ. Zero selects τ/20 for τ > 0 and an automatic step
  /// for τ = 0.
  double grid_step{0.0};
  /// Maximum number of stored polytope generators.
  int polytope_budget{20000};
  /// Maximum accumulated time of an expanded product.
  double horizon_h{1000.0};
  /// Replaces the lower bound as μ̂ when set.
  std::optional<double> mu_override;
  /// Number of times λ is enlarged by (1 + ε) when the closure does not
  /// stabilize.
  int max_escalations{2};
};

/// Lower bound of the generalized spectral radius over the class, from
/// per-mode spectral abscissae and periodic words. Supported classes:
/// arbitrary and dwell; average dwell uses the dwell(τ) subclass; persistent
/// excitation uses constant admissible weights.
RhoEstimate rho_lower(const std::vector<Eigen::MatrixXd>& As,
                      const SignalClassSpec& cls,
                      const RhoSearchOptions& search = {});
RhoEstimate rho_lower(const SystemSpec& sys, const SignalClassSpec& cls,
                      const RhoSearchOptions& search = {});

/// A norm v̂(x) = max_k ‖R_k x‖₂ whose first generator is the identity.
class PolytopeNorm {
 public:
  struct Generator {
    /// Product matrix already multiplied by its scale μ̂^{-t}.
    Eigen::MatrixXd R;
    double time{0.0};
    double scale{1.0};
  };

  PolytopeNorm() = default;
  explicit PolytopeNorm(int n);
  PolytopeNorm(int n, std::vector<Generator> generators);

  int dim() const { return n_; }
  const std::vector<Generator>& generators() const { return generators_; }
  double operator()(const Eigen::VectorXd& x) const;

  /// max_k ‖R_k‖₂, so that ‖x‖ <= v̂(x) <= lipschitz() ‖x‖.
  double lipschitz() const;

  /// An upper bound of sup_x v̂(M x) / v̂(x). Exact in dimension two.
  double InducedBound(const Eigen::MatrixXd& M) const;

 private:
  int n_{0};
  std::vector<Generator> generators_;
};

/// Upper bound of the generalized spectral radius for arbitrary or dwell
/// switching (average dwell with N0 = 1 is dwell; other average dwell and
/// persistent excitation use arbitrary switching of the endpoint modes).
/// The bound is rigorous up to floating point when `stabilized` is set; when
/// the closure budget is exhausted the bound is still computed from the
/// stored set and flagged.
RhoEstimate rho_upper(const std::vector<Eigen::MatrixXd>& As,
                      const SignalClassSpec& cls,
                      const RhoUpperOptions& opts = {},
                      const RhoEstimate* lower = nullptr,
                      PolytopeNorm* norm_out = nullptr);
RhoEstimate rho_upper(const SystemSpec& sys, const SignalClassSpec& cls,
                      const RhoUpperOptions& opts = {},
                      const RhoEstimate* lower = nullptr,
                      PolytopeNorm* norm_out = nullptr);

/// Both sides with shared μ̂.
RhoEstimate rho_estimate(const std::vector<Eigen::MatrixXd>& As,
                         const SignalClassSpec& cls,
                         const RhoSearchOptions& search = {},
                         const RhoUpperOptions& opts = {});

/// The polytope norm produced by the closure at λ = μ̂(1 + ε).
PolytopeNorm extremal_norm(const std::vector<Eigen::MatrixXd>& As,
                           const SignalClassSpec& cls, double mu_hat,
                           const RhoUpperOptions& opts = {});

/// The letters {(i, t)} whose scaled flows are certified by the closure.
std::vector<Letter> ClosureLetters(const std::vector<Eigen::MatrixXd>& As,
                                   const SignalClassSpec& cls,
                                   const RhoUpperOptions& opts);

struct QuasiExtremalOptions {
  /// Candidate durations. When empty, 8 durations τ + kΔ with
  /// Δ = max(τ, 0.05) are used (starting at Δ when τ = 0).
  std::vector<double> duration_grid;
  /// Interior samples recorded inside each letter.
  int substeps{4};
};

struct QuasiExtremalReport {
  Trajectory trajectory;
  double mu_hat{0.0};
  double c_lower{0.0};
  double c_upper{0.0};
  Signal signal;
  Word word;
};

/// Greedy extension of a class-valid word from x0: each step picks the
/// letter maximizing v(e^{A_i Δ} x) μ̂^{-Δ}, with v the supplied norm or the
/// Euclidean norm. Ties go to the lowest mode, then the shortest duration.
QuasiExtremalReport quasi_extremal_trajectory(
    const SystemSpec& sys, const SignalClassSpec& cls,
    const Eigen::VectorXd& x0, double horizon, double mu_hat,
    const PolytopeNorm* norm = nullptr, const QuasiExtremalOptions& opts = {});

struct RhoCurvePoint {
  RhoEstimate estimate;
  /// Raw lower bound before the monotone envelope.
  double raw_lower{0.0};
  /// max of raw lower bounds at this and all larger τ.
  double envelope_lower{0.0};
};

/// Lower (and optionally upper) bounds over a sorted τ grid. Witnesses found
/// at larger τ seed the search at smaller τ, where they remain valid.
std::vector<RhoCurvePoint> rho_curve(const std::vector<Eigen::MatrixXd>& As,
                                     const std::vector<double>& taus,
                                     const RhoSearchOptions& search = {},
                                     const RhoUpperOptions* upper = nullptr);

}  // namespace swgain
