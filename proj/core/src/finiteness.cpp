#include <sstream>
#include <stdexcept>

#include "swgain/l2gain.hpp"

namespace swgain {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kFinite:
      return "finite";
    case Verdict::kInfinite:
      return "infinite";
    case Verdict::kUndetermined:
      return "undetermined";
  }
  return "unknown";
}

FinitenessVerdict finiteness_test(const SystemSpec& sys,
                                  const SignalClassSpec& cls,
                                  const FinitenessOptions& opts) {
  if (cls.kind != ClassKind::kArbitrary && cls.kind != ClassKind::kDwell) {
    throw std::invalid_argument("finiteness_test supports arbitrary and dwell classes");
  }
  FinitenessVerdict out;
  const MinimalRealization mr = minimal_realization(sys);
  out.n_min = mr.sys_min.n();
  if (out.n_min == 0) {
    out.verdict = Verdict::kFinite;
    out.rho_min_realization.tau = cls.dwell_time();
    out.rho_min_realization.upper = 0.0;
    out.rationale = "the minimal realization has dimension 0, so the output vanishes";
    return out;
  }
  const std::vector<Eigen::MatrixXd> As = mr.sys_min.state_matrices();
  const RhoEstimate lower = rho_lower(As, cls, opts.search);
  out.rho_min_realization = lower;
  out.uniform_obs = check_uniform_observability(mr.sys_min, cls, opts.uo_horizon,
                                                opts.uo_samples, opts.seed);
  const bool uo = out.uniform_obs.verdict == UoVerdict::kUniformlyObservable;
  std::ostringstream why;
  why.precision(10);
  if (lower.lower > 1.0 + opts.tol) {
    out.verdict = Verdict::kInfinite;
    why << "rho lower bound " << lower.lower << " exceeds 1";
    out.rationale = why.str();
    return out;
  }
  if (lower.lower >= 1.0 - opts.tol && uo) {
    out.verdict = Verdict::kInfinite;
    why << "rho lower bound " << lower.lower
        << " is at least 1 and the minimal realization is uniformly observable";
    out.rationale = why.str();
    return out;
  }
  out.rho_min_realization = rho_upper(As, cls, opts.upper, &lower);
  const RhoEstimate& rho = out.rho_min_realization;
  if (rho.upper < 1.0) {
    out.verdict = Verdict::kFinite;
    why << "rho upper bound " << rho.upper << " is below 1";
    out.rationale = why.str();
    return out;
  }
  out.verdict = Verdict::kUndetermined;
  why << "rho bracket [" << rho.lower << ", " << rho.upper << "] contains 1; ";
  if (out.uniform_obs.verdict == UoVerdict::kNotUniformlyObservable) {
    why << out.uniform_obs.rationale;
  } else {
    why << "uniform observability is not certified";
  }
  out.rationale = why.str();
  return out;
}

namespace {

SignalClassSpec DwellOrArbitrary(double tau) {
  return tau > 0.0 ? SignalClassSpec::Dwell(tau) : SignalClassSpec::Arbitrary();
}

}  // namespace

TauMinInterval tau_min(const SystemSpec& sys, double tau_lo, double tau_hi,
                       const TauMinOptions& opts) {
  if (!(tau_lo >= 0.0) || !(tau_hi > tau_lo)) {
    throw std::invalid_argument("invalid bracket: need 0 <= tau_lo < tau_hi");
  }
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  TauMinInterval out;
  const MinimalRealization mr = minimal_realization(sys);
  if (mr.sys_min.n() == 0) {
    out.degenerate = true;
    out.flags.push_back("trivial_minimal_realization");
    return out;
  }
  const std::vector<Eigen::MatrixXd> As = mr.sys_min.state_matrices();
  auto lower_at = [&](double tau) {
    return rho_lower(As, DwellOrArbitrary(tau), opts.search);
  };
  auto upper_at = [&](double tau, const RhoEstimate& lower) {
    RhoUpperOptions u;
    u.epsilon = opts.epsilon;
    u.grid_step = tau > 0.0 ? tau * opts.upper_step_fraction : 0.0;
    return rho_upper(As, DwellOrArbitrary(tau), u, &lower);
  };

  const RhoEstimate low = lower_at(tau_lo);
  if (low.lower < 1.0) {
    RhoUpperOptions u;
    u.polytope_budget = opts.degenerate_budget;
    u.max_escalations = 0;
    const RhoEstimate arb = rho_upper(As, SignalClassSpec::Arbitrary(), u);
    if (arb.upper < 1.0) {
      out.degenerate = true;
      out.at_accept = arb;
      out.flags.push_back("stable_under_arbitrary_switching");
      return out;
    }
    throw std::invalid_argument("invalid bracket: rho lower bound at tau_lo is below 1");
  }
  const RhoEstimate high = upper_at(tau_hi, lower_at(tau_hi));
  if (!(high.upper < 1.0)) {
    throw std::invalid_argument(
        "invalid bracket: rho upper bound at tau_hi is not below 1");
  }

  double reject = tau_lo;
  double accept = tau_hi;
  out.at_reject = low;
  out.at_accept = high;
  double hi = tau_hi;
  while (hi - reject > opts.tol) {
    const double mid = 0.5 * (reject + hi);
    RhoEstimate est = lower_at(mid);
    if (est.lower >= 1.0) {
      reject = mid;
      out.at_reject = std::move(est);
    } else {
      hi = mid;
    }
  }
  double lo = reject;
  while (accept - lo > opts.tol) {
    const double mid = 0.5 * (lo + accept);
    const RhoEstimate lower = lower_at(mid);
    if (lower.lower >= 1.0) {
      lo = mid;
      continue;
    }
    RhoEstimate est = upper_at(mid, lower);
    if (est.upper < 1.0) {
      accept = mid;
      out.at_accept = std::move(est);
    } else {
      lo = mid;
    }
  }
  out.reject = reject;
  out.accept = accept;
  return out;
}

}  // namespace swgain
