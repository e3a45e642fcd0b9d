#pragma once

#include <vector>

#include <Eigen/Dense>

namespace swgain {
namespace internal {

/// q(φ) = a + b cos φ + c sin φ, the quadratic form xᵀ S x at
/// x = (cos θ, sin θ) with φ = 2θ.
struct Sinusoid {
  double a{0.0};
  double b{0.0};
  double c{0.0};

  static Sinusoid FromForm(const Eigen::Matrix2d& S);
  double operator()(double phi) const;
};

/// Maximum of num(φ) / den(φ) over [lo, hi], where den > 0 on the interval.
double MaxRatioOnArc(const Sinusoid& num, const Sinusoid& den, double lo,
                     double hi);

/// Upper envelope of positive quadratic forms on the unit circle of the
/// plane, stored as arcs of φ in [0, 2π) labelled by the active form.
class CircleEnvelope {
 public:
  struct Arc {
    double lo;
    double hi;
    int id;
  };

  CircleEnvelope() = default;

  /// Starts the envelope with one form covering the whole circle.
  void Reset(const Sinusoid& q, int id);

  /// max over the circle of s / envelope.
  double MaxRatio(const Sinusoid& s) const;

  /// Inserts s with label id. Returns the labels that no longer own any arc.
  std::vector<int> Insert(const Sinusoid& s, int id);

  /// max over arcs of num_{id}(φ) / form_{id}(φ), where `num` maps an arc
  /// label to the numerator sinusoid for that label.
  template <typename NumeratorFor>
  double MaxActiveRatio(NumeratorFor&& num) const {
    double best = -1e300;
    for (const Arc& arc : arcs_) {
      best = std::max(best,
                      MaxRatioOnArc(num(arc.id), forms_.at(arc.id), arc.lo,
                                    arc.hi));
    }
    return best;
  }

  const std::vector<Arc>& arcs() const { return arcs_; }
  const Sinusoid& form(int id) const { return forms_.at(id); }

 private:
  std::vector<Arc> arcs_;
  std::vector<Sinusoid> forms_;
};

}  // namespace internal
}  // namespace swgain
