#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swgain {
namespace cli {

/// Exit codes of run().
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUndetermined = 2;

struct RunConfig {
  /// One of minreal, rho, gain, taumin, finiteness, gallery.
  std::string subcommand;

  std::string system_path;
  std::string signal_path;
  /// Report destination; empty writes to standard output.
  std::string out_path;

  /// arb, dwell, avgdwell or pe. Empty selects dwell when tau > 0, else arb.
  std::string class_name;
  double tau{0.0};
  int n0{1};
  /// Window of the pe class, horizon of gain computations.
  double T{0.0};
  double mu{0.0};
  int m0{0};
  int m1{1};
  /// Closure horizon of rho and window of the uniform observability check.
  double horizon{0.0};
  double tol{0.0};
  int max_switches{4};
  double grid_step{0.0};
  std::uint64_t seed{0};
  int threads{1};

  // rho
  std::vector<double> taus;
  double epsilon{0.01};
  std::optional<double> mu_hat;

  // gain
  std::vector<double> sweep_T;
  /// Grid step of the power-iteration cross-check; zero disables it.
  double power_step{0.0};

  // taumin
  double tau_lo{0.0};
  double tau_hi{0.0};

  // gallery
  bool alpha_star{false};
  bool verify{false};
  bool emit_example{false};
  bool orbit{false};
  std::optional<double> alpha;
  int samples{10000};
};

/// Runs one subcommand. Errors are reported on standard error and mapped to
/// kExitError; an undetermined finiteness verdict returns kExitUndetermined.
int run(const RunConfig& config);

/// Parses command-line arguments into a RunConfig and runs it.
int main_entry(int argc, char** argv);

}  // namespace cli
}  // namespace swgain
