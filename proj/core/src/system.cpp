#include "swgain/system.hpp"

#include <cmath>
#include <stdexcept>

namespace swgain {

namespace {

void CheckShape(const Eigen::MatrixXd& M, int rows, int cols,
                const std::string& what, int index) {
  if (M.rows() != rows || M.cols() != cols) {
    throw std::invalid_argument(
        "mode " + std::to_string(index) + ": " + what + " is " +
        std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
        ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!M.allFinite()) {
    throw std::invalid_argument("mode " + std::to_string(index) + ": " +
                                what + " has non-finite entries");
  }
}

}  // namespace

SystemSpec::SystemSpec(int n, int m, int p, std::vector<Mode> modes,
                       std::string label)
    : n_(n), m_(m), p_(p), modes_(std::move(modes)), label_(std::move(label)) {
  if (n < 0 || m <= 0 || p <= 0) {
    throw std::invalid_argument("system dimensions must be positive");
  }
  if (modes_.empty()) {
    throw std::invalid_argument("system needs at least one mode");
  }
  for (int i = 0; i < num_modes(); ++i) {
    CheckShape(modes_[i].A, n, n, "A", i);
    CheckShape(modes_[i].B, n, m, "B", i);
    CheckShape(modes_[i].C, p, n, "C", i);
  }
}

const Mode& SystemSpec::mode(int i) const {
  if (i < 0 || i >= num_modes()) {
    throw std::out_of_range("mode index " + std::to_string(i) +
                            " out of range");
  }
  return modes_[i];
}

std::vector<Eigen::MatrixXd> SystemSpec::state_matrices() const {
  std::vector<Eigen::MatrixXd> result;
  result.reserve(modes_.size());
  for (const Mode& mode : modes_) result.push_back(mode.A);
  return result;
}

SystemSpec SystemSpec::dual() const {
  std::vector<Mode> modes;
  modes.reserve(modes_.size());
  for (const Mode& mode : modes_) {
    modes.push_back({mode.A.transpose(), mode.C.transpose(),
                     mode.B.transpose()});
  }
  return SystemSpec(n_, p_, m_, std::move(modes), label_);
}

std::string to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::kArbitrary: return "arb";
    case ClassKind::kDwell: return "dwell";
    case ClassKind::kAverageDwell: return "avgdwell";
    case ClassKind::kPersistentExcitation: return "pe";
    case ClassKind::kLipschitz: return "lipschitz";
    case ClassKind::kBoundedVariation: return "bv";
  }
  return "unknown";
}

SignalClassSpec SignalClassSpec::Arbitrary() { return {}; }

SignalClassSpec SignalClassSpec::Dwell(double tau) {
  SignalClassSpec cls;
  cls.kind = ClassKind::kDwell;
  cls.tau = tau;
  cls.Validate();
  return cls;
}

SignalClassSpec SignalClassSpec::AverageDwell(double tau, int n0) {
  SignalClassSpec cls;
  cls.kind = ClassKind::kAverageDwell;
  cls.tau = tau;
  cls.n0 = n0;
  cls.Validate();
  return cls;
}

SignalClassSpec SignalClassSpec::PersistentExcitation(double T, double mu,
                                                      int m0, int m1) {
  SignalClassSpec cls;
  cls.kind = ClassKind::kPersistentExcitation;
  cls.T = T;
  cls.mu = mu;
  cls.m0 = m0;
  cls.m1 = m1;
  cls.Validate();
  return cls;
}

SignalClassSpec SignalClassSpec::Lipschitz(double L) {
  SignalClassSpec cls;
  cls.kind = ClassKind::kLipschitz;
  cls.L = L;
  cls.Validate();
  return cls;
}

SignalClassSpec SignalClassSpec::BoundedVariation(double T, double nu) {
  SignalClassSpec cls;
  cls.kind = ClassKind::kBoundedVariation;
  cls.T = T;
  cls.nu = nu;
  cls.Validate();
  return cls;
}

void SignalClassSpec::Validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive");
    }
  };
  switch (kind) {
    case ClassKind::kArbitrary:
      break;
    case ClassKind::kDwell:
      positive(tau, "tau");
      break;
    case ClassKind::kAverageDwell:
      positive(tau, "tau");
      if (n0 < 1) throw std::invalid_argument("N0 must be a positive integer");
      break;
    case ClassKind::kPersistentExcitation:
      positive(T, "T");
      positive(mu, "mu");
      if (mu > T) throw std::invalid_argument("mu must not exceed T");
      if (m0 == m1) throw std::invalid_argument("M0 and M1 must differ");
      break;
    case ClassKind::kLipschitz:
      positive(L, "L");
      break;
    case ClassKind::kBoundedVariation:
      positive(T, "T");
      positive(nu, "nu");
      break;
  }
}

double SignalClassSpec::dwell_time() const {
  switch (kind) {
    case ClassKind::kDwell:
      return tau;
    default:
      return 0.0;
  }
}

}  // namespace swgain
