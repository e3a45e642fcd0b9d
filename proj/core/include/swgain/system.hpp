#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace swgain {

/// One subsystem (A, B, C) of a switched linear system. The feedthrough term
/// is identically zero.
struct Mode {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
};

/// A finite family of modes sharing the dimensions (n, m, p).
///
/// The constructor validates shapes and finiteness of every entry and throws
/// std::invalid_argument on failure. A system of state dimension zero is
/// accepted because minimal realizations may collapse to it.
class SystemSpec {
 public:
  SystemSpec() = default;
  SystemSpec(int n, int m, int p, std::vector<Mode> modes,
             std::string label = "");

  int n() const { return n_; }
  int m() const { return m_; }
  int p() const { return p_; }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  const Mode& mode(int i) const;
  const std::vector<Mode>& modes() const { return modes_; }
  const std::string& label() const { return label_; }

  /// The A matrices in mode order.
  std::vector<Eigen::MatrixXd> state_matrices() const;

  /// The dual system (Aᵀ, Cᵀ, Bᵀ) with the roles of m and p exchanged.
  SystemSpec dual() const;

 private:
  int n_{0};
  int m_{0};
  int p_{0};
  std::vector<Mode> modes_;
  std::string label_;
};

enum class ClassKind {
  kArbitrary,
  kDwell,
  kAverageDwell,
  kPersistentExcitation,
  kLipschitz,
  kBoundedVariation,
};

/// Returns the short tag used in reports and on the command line.
std::string to_string(ClassKind kind);

/// Description of one constrained switching class together with its
/// parameters. Unused parameters are ignored.
struct SignalClassSpec {
  ClassKind kind{ClassKind::kArbitrary};
  double tau{0.0};
  int n0{1};
  double T{0.0};
  double mu{0.0};
  double L{0.0};
  double nu{0.0};
  /// Endpoint modes of the convex segment used by persistent excitation.
  int m0{0};
  int m1{1};

  static SignalClassSpec Arbitrary();
  static SignalClassSpec Dwell(double tau);
  static SignalClassSpec AverageDwell(double tau, int n0);
  static SignalClassSpec PersistentExcitation(double T, double mu, int m0 = 0,
                                              int m1 = 1);
  static SignalClassSpec Lipschitz(double L);
  static SignalClassSpec BoundedVariation(double T, double nu);

  /// Throws std::invalid_argument if the parameters violate the class
  /// constraints (for instance tau <= 0 for dwell).
  void Validate() const;

  /// Minimum admissible gap between switches implied by the class, used by
  /// the dwell-time machinery. Arbitrary switching maps to zero.
  double dwell_time() const;
};

struct Segment {
  int mode{0};
  double duration{0.0};
};

/// A finite-horizon piecewise-constant switching signal. Segment j is active
/// on the half-open interval [b_j, b_{j+1}); the final segment also owns the
/// terminal instant.
class Signal {
 public:
  Signal() = default;
  explicit Signal(std::vector<Segment> segments);

  static Signal Constant(int mode, double duration);

  const std::vector<Segment>& segments() const { return segments_; }
  int num_segments() const { return static_cast<int>(segments_.size()); }
  double total_duration() const { return total_; }

  /// Segment boundaries b_0 = 0 < b_1 < ... < b_N = total_duration().
  std::vector<double> breakpoints() const;

  /// Active mode at time t in [0, total_duration()].
  int mode_at(double t) const;

  /// Adjacent segments with equal mode merged into one.
  Signal merged() const;

  /// This signal followed by `other`.
  Signal concatenate(const Signal& other) const;

  /// Restriction to [0, T] with 0 < T <= total_duration().
  Signal truncated(double T) const;

  /// Throws std::invalid_argument if a mode index is out of range for `sys`.
  void ValidateFor(const SystemSpec& sys) const;

 private:
  std::vector<Segment> segments_;
  double total_{0.0};
};

struct WeightSegment {
  double alpha{0.0};
  double duration{0.0};
};

/// Piecewise-constant convex weight α(t) in [0, 1] selecting the matrix
/// (1 - α) M0 + α M1 for the persistent-excitation class.
class WeightSignal {
 public:
  WeightSignal() = default;
  explicit WeightSignal(std::vector<WeightSegment> segments);

  const std::vector<WeightSegment>& segments() const { return segments_; }
  double total_duration() const { return total_; }
  std::vector<double> breakpoints() const;

  /// ∫_a^b α(t) dt for 0 <= a <= b <= total_duration().
  double integral(double a, double b) const;

 private:
  std::vector<WeightSegment> segments_;
  double total_{0.0};
};

struct Violation {
  std::string constraint;
  double location{0.0};
  double measured{0.0};
  double bound{0.0};
};

struct ViolationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Parses the JSON system document
/// {"n","m","p","modes":[{"A","B","C"}],"label"}.
SystemSpec parse_system(std::string_view text);
std::string serialize_system(const SystemSpec& sys);

/// Parses {"segments":[[mode, duration], ...]}.
Signal parse_signal(std::string_view text);
std::string serialize_signal(const Signal& sig);

/// Parses {"weights":[[alpha, duration], ...]}.
WeightSignal parse_weight_signal(std::string_view text);

/// Checks that `sig`, read as the restriction to [0, total_duration()] of an
/// admissible infinite-horizon signal, belongs to `cls`.
///
/// For dwell(τ) every maximal constant piece other than the last must last at
/// least τ. The last piece may be a truncation. Average dwell uses the switch
/// count bound N0 + t/τ over every window. The matrix norms needed by the
/// Lipschitz and bounded-variation classes are taken from `sys` when given,
/// otherwise a unit jump per switch is assumed.
ViolationReport validate_membership(const Signal& sig,
                                    const SignalClassSpec& cls,
                                    const SystemSpec* sys = nullptr);

/// Persistent-excitation membership: ∫_t^{t+T} α ≥ μ for every full window.
ViolationReport validate_membership(const WeightSignal& sig,
                                    const SignalClassSpec& cls);

}  // namespace swgain
