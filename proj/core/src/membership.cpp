#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "swgain/system.hpp"

namespace swgain {

namespace {

// Relative slack so that durations produced by floating-point sums of exact
// class parameters are not rejected.
constexpr double kSlack = 1e-12;

struct Switch {
  double time;
  int from;
  int to;
};

std::vector<Switch> SwitchesOf(const Signal& merged) {
  std::vector<Switch> result;
  double t = 0.0;
  const auto& segs = merged.segments();
  for (size_t j = 0; j + 1 < segs.size(); ++j) {
    t += segs[j].duration;
    result.push_back({t, segs[j].mode, segs[j + 1].mode});
  }
  return result;
}

double JumpSize(const SystemSpec* sys, int from, int to) {
  if (sys == nullptr) return from == to ? 0.0 : 1.0;
  const Mode& a = sys->mode(from);
  const Mode& b = sys->mode(to);
  return std::sqrt((a.A - b.A).squaredNorm() + (a.B - b.B).squaredNorm() +
                   (a.C - b.C).squaredNorm());
}

void CheckDwell(const Signal& merged, double tau, ViolationReport* report) {
  const auto& segs = merged.segments();
  double t = 0.0;
  for (size_t j = 0; j + 1 < segs.size(); ++j) {
    t += segs[j].duration;
    if (segs[j].duration < tau * (1.0 - kSlack)) {
      report->violations.push_back({"dwell", t, segs[j].duration, tau});
    }
  }
}

void CheckAverageDwell(const Signal& merged, double tau, int n0,
                       ViolationReport* report) {
  const std::vector<Switch> sw = SwitchesOf(merged);
  // The count in a closed window is maximized with both ends on switches.
  for (size_t i = 0; i < sw.size(); ++i) {
    double worst_excess = 0.0;
    std::optional<Violation> worst;
    for (size_t j = i; j < sw.size(); ++j) {
      const double count = static_cast<double>(j - i + 1);
      const double bound = n0 + (sw[j].time - sw[i].time) / tau;
      const double excess = count - bound * (1.0 + kSlack);
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = Violation{"avg_dwell", sw[i].time, count, bound};
      }
    }
    if (worst) report->violations.push_back(*worst);
  }
}

void CheckWindowIntegral(const WeightSignal& sig, double T, double mu,
                         ViolationReport* report) {
  const double H = sig.total_duration();
  if (H < T) return;
  // The window integral is piecewise linear in its start, with kinks where
  // either end crosses a breakpoint.
  std::vector<double> anchors;
  for (double b : sig.breakpoints()) {
    for (double a : {b, b - T}) {
      if (a >= 0.0 && a <= H - T) anchors.push_back(a);
    }
  }
  anchors.push_back(H - T);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  for (double a : anchors) {
    const double value = sig.integral(a, a + T);
    if (value < mu * (1.0 - kSlack)) {
      report->violations.push_back({"pers_exc", a, value, mu});
    }
  }
}

}  // namespace

ViolationReport validate_membership(const Signal& sig,
                                    const SignalClassSpec& cls,
                                    const SystemSpec* sys) {
  cls.Validate();
  ViolationReport report;
  const Signal merged = sig.merged();
  switch (cls.kind) {
    case ClassKind::kArbitrary:
      break;
    case ClassKind::kDwell:
      CheckDwell(merged, cls.tau, &report);
      break;
    case ClassKind::kAverageDwell:
      CheckAverageDwell(merged, cls.tau, cls.n0, &report);
      break;
    case ClassKind::kPersistentExcitation: {
      std::vector<WeightSegment> weights;
      double t = 0.0;
      bool representable = true;
      for (const Segment& s : merged.segments()) {
        if (s.mode == cls.m1) {
          weights.push_back({1.0, s.duration});
        } else if (s.mode == cls.m0) {
          weights.push_back({0.0, s.duration});
        } else {
          report.violations.push_back(
              {"pers_exc_mode", t, static_cast<double>(s.mode), 0.0});
          representable = false;
        }
        t += s.duration;
      }
      if (representable) {
        CheckWindowIntegral(WeightSignal(std::move(weights)), cls.T, cls.mu,
                            &report);
      }
      break;
    }
    case ClassKind::kLipschitz:
      for (const Switch& s : SwitchesOf(merged)) {
        const double jump = JumpSize(sys, s.from, s.to);
        if (jump > 0.0) {
          report.violations.push_back({"lipschitz", s.time, jump, 0.0});
        }
      }
      break;
    case ClassKind::kBoundedVariation: {
      const std::vector<Switch> sw = SwitchesOf(merged);
      for (size_t i = 0; i < sw.size(); ++i) {
        double total = 0.0;
        for (size_t j = i; j < sw.size() && sw[j].time <= sw[i].time + cls.T;
             ++j) {
          total += JumpSize(sys, sw[j].from, sw[j].to);
        }
        if (total > cls.nu * (1.0 + kSlack)) {
          report.violations.push_back({"bv", sw[i].time, total, cls.nu});
        }
      }
      break;
    }
  }
  return report;
}

ViolationReport validate_membership(const WeightSignal& sig,
                                    const SignalClassSpec& cls) {
  cls.Validate();
  ViolationReport report;
  if (cls.kind != ClassKind::kPersistentExcitation) {
    report.violations.push_back({"class_kind", 0.0, 0.0, 0.0});
    return report;
  }
  CheckWindowIntegral(sig, cls.T, cls.mu, &report);
  return report;
}

}  // namespace swgain
