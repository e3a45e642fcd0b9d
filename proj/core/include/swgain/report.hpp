#pragma once

#include <string>
#include <vector>

#include "swgain/gallery.hpp"
#include "swgain/l2gain.hpp"
#include "swgain/realization.hpp"
#include "swgain/spectral.hpp"

namespace swgain {

// JSON reports. Non-finite numbers are written as null.

/// {"n", "r", "n_min", "per_mode_observable", "gamma_floor", "verdict"},
/// with r the reachable dimension. The observability fields describe the
/// minimal realization.
std::string reduction_report_json(const SystemSpec& sys,
                                  const MinimalRealization& mr,
                                  const UniformObservabilityReport& uo);

/// {"tau", "lower", "upper", "witness": {"letters": [[i, dt], ...]},
///  "inflation", "flags", ...}.
std::string rho_estimate_json(const RhoEstimate& est);

/// Array of rho estimates with the raw and monotone-envelope lower bounds.
std::string rho_curve_json(const std::vector<RhoCurvePoint>& curve);

/// {"tau", "T", "value", "witness_signal", "method", ...}.
std::string gain_report_json(const GainEstimate& est, double tau);

struct SweepRow {
  double tau{0.0};
  double T{0.0};
  double gain_lower{0.0};
};

/// CSV with header tau,T,gain_lower.
std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string finiteness_json(const FinitenessVerdict& verdict);

std::string tau_min_json(const TauMinInterval& interval);

/// {"alpha", "samples", "max_violation", ...}.
std::string verification_json(const LyapunovVerification& rep);

std::string alpha_star_json(double alpha, double return_ratio, double tol);

}  // namespace swgain
