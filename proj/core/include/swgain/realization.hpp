#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swgain/system.hpp"

namespace swgain {

struct SubspaceBasis {
  /// n × r with orthonormal columns.
  Eigen::MatrixXd basis;
  int dim() const { return static_cast<int>(basis.cols()); }
};

struct ReductionMaps {
  /// Orthogonal n × n matrix whose leading r columns span the reachable
  /// subspace.
  Eigen::MatrixXd change_of_basis;
  int controllable_dim{0};
  int observable_dim{0};
  /// n′ × n map from original coordinates to minimal coordinates.
  Eigen::MatrixXd projector_to_min;
  /// n × n′ map from minimal coordinates to original coordinates.
  Eigen::MatrixXd injector_from_min;
};

struct MinimalRealization {
  SystemSpec sys_min;
  ReductionMaps maps;
  std::string original_label;
};

/// Smallest subspace containing every column of every B_i and invariant under
/// every A_i.
SubspaceBasis reachable_subspace(const SystemSpec& sys);

/// Orthogonal complement of the largest subspace contained in every ker C_i
/// and invariant under every A_i, obtained as reachable_subspace(sys.dual()).
SubspaceBasis observable_subspace(const SystemSpec& sys);

/// Restriction to the reachable subspace followed by restriction to the
/// observable subspace of the result. Orthonormal bases are used throughout.
MinimalRealization minimal_realization(const SystemSpec& sys);

/// Searches for G with G⁻¹ A¹_i G = A²_i, G⁻¹ B¹_i = B²_i and C¹_i G = C²_i
/// by matching reachability columns of shared words. Returns G on success.
/// Throws std::invalid_argument when dimensions or mode counts differ.
std::optional<Eigen::MatrixXd> check_similarity(const MinimalRealization& m1,
                                                const MinimalRealization& m2);

enum class UoVerdict {
  kUniformlyObservable,
  kNotUniformlyObservable,
  kInconclusive,
};

std::string to_string(UoVerdict verdict);

struct UniformObservabilityReport {
  std::vector<bool> per_mode_observable;
  std::vector<int> per_mode_rank;
  /// Smallest eigenvalue of W^o(0, T) over the sampled signals. Empirical.
  double gramian_floor{0.0};
  int samples{0};
  UoVerdict verdict{UoVerdict::kInconclusive};
  std::string rationale;
};

/// Rank of the Kalman observability matrix of (A, C).
int ObservabilityRank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C);

/// Per-mode observability tests plus an empirical Gramian floor over
/// `samples` random class-valid signals of length T (constant signals are
/// sampled first). A certificate is issued only where the per-mode tests
/// decide the question: an unobservable mode rules uniform observability out
/// for every class containing constant signals, and for dwell(τ) with τ > 0
/// observability of every mode is equivalent to it.
UniformObservabilityReport check_uniform_observability(
    const SystemSpec& sys, const SignalClassSpec& cls, double T, int samples,
    std::uint64_t seed = 0);

}  // namespace swgain
