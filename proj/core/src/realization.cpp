#include "swgain/realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "swgain/flows.hpp"
#include "swgain/linalg.hpp"

namespace swgain {

namespace {

// Columns {A_i^k v : i, 0 <= k < n, v in Q}.
Eigen::MatrixXd PowerImages(const std::vector<Eigen::MatrixXd>& As,
                            const Eigen::MatrixXd& Q) {
  const int n = Q.rows();
  const int r = Q.cols();
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(As.size()) * n * r);
  int col = 0;
  for (const Eigen::MatrixXd& A : As) {
    Eigen::MatrixXd P = Q;
    for (int k = 0; k < n; ++k) {
      out.middleCols(col, r) = P;
      col += r;
      P = (A * P).eval();
    }
  }
  return out;
}

// Restricts every mode of `sys` to the subspace with orthonormal basis V,
// keeping the input and output maps in the restricted coordinates.
SystemSpec Restrict(const SystemSpec& sys, const Eigen::MatrixXd& V) {
  std::vector<Mode> modes;
  for (const Mode& mode : sys.modes()) {
    modes.push_back({V.transpose() * mode.A * V, V.transpose() * mode.B,
                     mode.C * V});
  }
  return SystemSpec(static_cast<int>(V.cols()), sys.m(), sys.p(),
                    std::move(modes), sys.label());
}

}  // namespace

SubspaceBasis reachable_subspace(const SystemSpec& sys) {
  const int n = sys.n();
  const std::vector<Eigen::MatrixXd> As = sys.state_matrices();
  Eigen::MatrixXd B(n, static_cast<Eigen::Index>(sys.num_modes()) * sys.m());
  for (int i = 0; i < sys.num_modes(); ++i) {
    B.middleCols(i * sys.m(), sys.m()) = sys.mode(i).B;
  }
  Eigen::MatrixXd Q = OrthonormalBasis(PowerImages(As, OrthonormalBasis(B)));
  for (int iter = 0; iter < n && Q.cols() > 0 && Q.cols() < n; ++iter) {
    Eigen::MatrixXd next = OrthonormalBasis(PowerImages(As, Q));
    if (next.cols() == Q.cols()) break;
    Q = std::move(next);
  }
  return {Q};
}

SubspaceBasis observable_subspace(const SystemSpec& sys) {
  return reachable_subspace(sys.dual());
}

MinimalRealization minimal_realization(const SystemSpec& sys) {
  const int n = sys.n();
  const Eigen::MatrixXd Vr = reachable_subspace(sys).basis;
  const SystemSpec controllable = Restrict(sys, Vr);
  const Eigen::MatrixXd Wo =
      controllable.n() > 0 ? observable_subspace(controllable).basis
                           : Eigen::MatrixXd(0, 0);
  MinimalRealization result;
  result.original_label = sys.label();
  result.sys_min = Restrict(controllable, Wo);

  ReductionMaps& maps = result.maps;
  maps.controllable_dim = static_cast<int>(Vr.cols());
  maps.observable_dim = static_cast<int>(Wo.cols());
  maps.change_of_basis.resize(n, n);
  maps.change_of_basis << Vr, OrthogonalComplement(Vr);
  maps.injector_from_min = Vr * Wo;
  maps.projector_to_min = maps.injector_from_min.transpose();
  return result;
}

std::optional<Eigen::MatrixXd> check_similarity(const MinimalRealization& m1,
                                                const MinimalRealization& m2) {
  const SystemSpec& s1 = m1.sys_min;
  const SystemSpec& s2 = m2.sys_min;
  if (s1.n() != s2.n() || s1.m() != s2.m() || s1.p() != s2.p() ||
      s1.num_modes() != s2.num_modes()) {
    throw std::invalid_argument("realizations have different shapes");
  }
  const int n = s1.n();
  if (n == 0) return Eigen::MatrixXd(0, 0);

  // Breadth-first over words, keeping columns of the second realization that
  // increase rank. The same word applied in the first realization gives the
  // matching columns.
  Eigen::MatrixXd K1(n, 0);
  Eigen::MatrixXd K2(n, 0);
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> frontier;
  for (int i = 0; i < s1.num_modes(); ++i) {
    for (int j = 0; j < s1.m(); ++j) {
      frontier.push_back({s1.mode(i).B.col(j), s2.mode(i).B.col(j)});
    }
  }
  int rank = 0;
  for (int depth = 0; depth <= n && rank < n && !frontier.empty(); ++depth) {
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> next;
    for (const auto& [v1, v2] : frontier) {
      Eigen::MatrixXd trial(n, K2.cols() + 1);
      trial << K2, v2;
      if (NumericalRank(trial) <= rank) continue;
      K2 = trial;
      Eigen::MatrixXd grow(n, K1.cols() + 1);
      grow << K1, v1;
      K1 = grow;
      ++rank;
      for (int i = 0; i < s1.num_modes(); ++i) {
        next.push_back({s1.mode(i).A * v1, s2.mode(i).A * v2});
      }
      if (rank == n) break;
    }
    frontier = std::move(next);
  }
  if (rank < n) return std::nullopt;

  const Eigen::MatrixXd G = K1 * K2.inverse();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::MatrixXd Ginv = lu.inverse();
  auto close = [](const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    const double scale = std::max({1.0, X.norm(), Y.norm()});
    return (X - Y).norm() <= 1e-6 * scale;
  };
  for (int i = 0; i < s1.num_modes(); ++i) {
    const Mode& a = s1.mode(i);
    const Mode& b = s2.mode(i);
    if (!close(Ginv * a.A * G, b.A) || !close(Ginv * a.B, b.B) ||
        !close(a.C * G, b.C)) {
      return std::nullopt;
    }
  }
  return G;
}

std::string to_string(UoVerdict verdict) {
  switch (verdict) {
    case UoVerdict::kUniformlyObservable: return "uniformly_observable";
    case UoVerdict::kNotUniformlyObservable: return "not_uniformly_observable";
    case UoVerdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

int ObservabilityRank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
  const int n = A.rows();
  const int p = C.rows();
  if (n == 0) return 0;
  Eigen::MatrixXd O(n * p, n);
  Eigen::MatrixXd row = C;
  for (int k = 0; k < n; ++k) {
    O.middleRows(k * p, p) = row;
    row = (row * A).eval();
  }
  return NumericalRank(O);
}

UniformObservabilityReport check_uniform_observability(
    const SystemSpec& sys, const SignalClassSpec& cls, double T, int samples,
    std::uint64_t seed) {
  if (cls.kind != ClassKind::kArbitrary && cls.kind != ClassKind::kDwell) {
    throw std::invalid_argument(
        "uniform observability supports arbitrary and dwell classes only");
  }
  if (!(T > 0.0)) throw std::invalid_argument("window must be positive");
  cls.Validate();
  const int n = sys.n();
  UniformObservabilityReport report;
  std::vector<int> unobservable;
  for (int i = 0; i < sys.num_modes(); ++i) {
    const int rank = ObservabilityRank(sys.mode(i).A, sys.mode(i).C);
    report.per_mode_rank.push_back(rank);
    report.per_mode_observable.push_back(rank == n);
    if (rank < n) unobservable.push_back(i);
  }

  std::mt19937_64 rng(seed);
  const double tau = cls.dwell_time();
  std::uniform_int_distribution<int> pick_mode(0, sys.num_modes() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double floor = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  const int total = std::max(samples, 0);
  for (int s = 0; s < total && n > 0; ++s) {
    std::vector<Segment> segments;
    if (s < sys.num_modes()) {
      segments.push_back({s, T});
    } else {
      double t = 0.0;
      int mode = pick_mode(rng);
      const double scale = std::max(tau, T / 8.0);
      while (t < T) {
        double d = tau + scale * unit(rng);
        if (d <= 0.0) d = T / 8.0;
        d = std::min(d, T - t);
        segments.push_back({mode, d});
        t += d;
        if (sys.num_modes() > 1) {
          int next = pick_mode(rng);
          while (next == mode) next = pick_mode(rng);
          mode = next;
        }
      }
    }
    const Signal sig(std::move(segments));
    const GramianPair g = gramians(sys, sig, 0.0, sig.total_duration());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.wo,
                                                       Eigen::EigenvaluesOnly);
    floor = std::min(floor, std::max(0.0, eig.eigenvalues().minCoeff()));
    ++report.samples;
  }
  report.gramian_floor = std::isfinite(floor) ? floor : 0.0;

  if (!unobservable.empty()) {
    report.verdict = UoVerdict::kNotUniformlyObservable;
    std::string modes;
    for (size_t k = 0; k < unobservable.size(); ++k) {
      if (k > 0) modes += ", ";
      modes += std::to_string(unobservable[k]);
    }
    report.rationale =
        "not uniformly observable: the constant signal of mode(s) " + modes +
        " has an unobservable pair (A, C)";
  } else if (cls.kind == ClassKind::kDwell && tau > 0.0) {
    report.verdict = UoVerdict::kUniformlyObservable;
    report.rationale =
        "uniformly observable: every pair (A, C) is observable and the "
        "dwell time is positive";
  } else {
    report.verdict = UoVerdict::kInconclusive;
    report.rationale =
        "inconclusive: every pair (A, C) is observable but fast switching is "
        "admissible; the Gramian floor is empirical";
  }
  return report;
}

}  // namespace swgain
