#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "envelope.hpp"
#include "swgain/linalg.hpp"
#include "swgain/spectral.hpp"

namespace swgain {
namespace internal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double Wrap(double phi) {
  phi = std::fmod(phi, kTwoPi);
  return phi < 0.0 ? phi + kTwoPi : phi;
}

// Roots in [0, 2π) of p + q cos φ + r sin φ.
int SinusoidRoots(double p, double q, double r, double roots[2]) {
  const double R = std::hypot(q, r);
  if (!(R > 0.0) || std::abs(p) >= R) return 0;
  const double psi = std::atan2(r, q);
  const double off = std::acos(-p / R);
  roots[0] = Wrap(psi - off);
  roots[1] = Wrap(psi + off);
  return 2;
}

}  // namespace

Sinusoid Sinusoid::FromForm(const Eigen::Matrix2d& S) {
  return {0.5 * (S(0, 0) + S(1, 1)), 0.5 * (S(0, 0) - S(1, 1)),
          0.5 * (S(0, 1) + S(1, 0))};
}

double Sinusoid::operator()(double phi) const {
  return a + b * std::cos(phi) + c * std::sin(phi);
}

double MaxRatioOnArc(const Sinusoid& num, const Sinusoid& den, double lo,
                     double hi) {
  double best = std::max(num(lo) / den(lo), num(hi) / den(hi));
  // Stationary points of num/den solve A sin φ + B cos φ + D = 0.
  const double A = num.a * den.b - den.a * num.b;
  const double B = den.a * num.c - num.a * den.c;
  const double D = den.b * num.c - num.b * den.c;
  double roots[2];
  const int count = SinusoidRoots(D, B, A, roots);
  for (int k = 0; k < count; ++k) {
    if (roots[k] > lo && roots[k] < hi) {
      best = std::max(best, num(roots[k]) / den(roots[k]));
    }
  }
  return best;
}

void CircleEnvelope::Reset(const Sinusoid& q, int id) {
  forms_.assign(id + 1, Sinusoid{});
  forms_[id] = q;
  arcs_ = {{0.0, kTwoPi, id}};
}

double CircleEnvelope::MaxRatio(const Sinusoid& s) const {
  double best = 0.0;
  for (const Arc& arc : arcs_) {
    best = std::max(best, MaxRatioOnArc(s, forms_[arc.id], arc.lo, arc.hi));
  }
  return best;
}

std::vector<int> CircleEnvelope::Insert(const Sinusoid& s, int id) {
  if (static_cast<int>(forms_.size()) <= id) forms_.resize(id + 1);
  forms_[id] = s;
  std::vector<Arc> out;
  out.reserve(arcs_.size() + 2);
  auto push = [&out](double lo, double hi, int label) {
    if (!(hi > lo)) return;
    if (!out.empty() && out.back().id == label) {
      out.back().hi = hi;
    } else {
      out.push_back({lo, hi, label});
    }
  };
  std::vector<int> before;
  for (const Arc& arc : arcs_) before.push_back(arc.id);
  for (const Arc& arc : arcs_) {
    const Sinusoid& q = forms_[arc.id];
    const double p = s.a - q.a;
    const double u = s.b - q.b;
    const double v = s.c - q.c;
    double pts[4];
    int count = 0;
    pts[count++] = arc.lo;
    double roots[2];
    const int nr = SinusoidRoots(p, u, v, roots);
    if (nr == 2 && roots[0] > roots[1]) std::swap(roots[0], roots[1]);
    for (int k = 0; k < nr; ++k) {
      if (roots[k] > arc.lo && roots[k] < arc.hi) pts[count++] = roots[k];
    }
    pts[count++] = arc.hi;
    for (int k = 0; k + 1 < count; ++k) {
      const double mid = 0.5 * (pts[k] + pts[k + 1]);
      const double diff = p + u * std::cos(mid) + v * std::sin(mid);
      push(pts[k], pts[k + 1], diff > 0.0 ? id : arc.id);
    }
  }
  arcs_ = std::move(out);
  std::sort(before.begin(), before.end());
  before.erase(std::unique(before.begin(), before.end()), before.end());
  std::vector<int> alive;
  for (const Arc& arc : arcs_) alive.push_back(arc.id);
  std::sort(alive.begin(), alive.end());
  alive.erase(std::unique(alive.begin(), alive.end()), alive.end());
  std::vector<int> dropped;
  std::set_difference(before.begin(), before.end(), alive.begin(), alive.end(),
                      std::back_inserter(dropped));
  return dropped;
}

}  // namespace internal

PolytopeNorm::PolytopeNorm(int n) : n_(n) {
  generators_.push_back({Eigen::MatrixXd::Identity(n, n), 0.0, 1.0});
}

PolytopeNorm::PolytopeNorm(int n, std::vector<Generator> generators)
    : n_(n), generators_(std::move(generators)) {
  if (generators_.empty() ||
      !generators_.front().R.isApprox(Eigen::MatrixXd::Identity(n, n))) {
    generators_.insert(generators_.begin(),
                       {Eigen::MatrixXd::Identity(n, n), 0.0, 1.0});
  }
}

double PolytopeNorm::operator()(const Eigen::VectorXd& x) const {
  double best = 0.0;
  for (const Generator& g : generators_) best = std::max(best, (g.R * x).norm());
  return best;
}

double PolytopeNorm::lipschitz() const {
  double best = 0.0;
  for (const Generator& g : generators_) best = std::max(best, OperatorNorm(g.R));
  return best;
}

double PolytopeNorm::InducedBound(const Eigen::MatrixXd& M) const {
  if (n_ == 0) return 0.0;
  if (n_ == 2) {
    internal::CircleEnvelope env;
    env.Reset(internal::Sinusoid::FromForm(Eigen::Matrix2d::Identity()), 0);
    for (size_t k = 1; k < generators_.size(); ++k) {
      const Eigen::Matrix2d G = generators_[k].R.transpose() * generators_[k].R;
      const internal::Sinusoid s = internal::Sinusoid::FromForm(G);
      if (env.MaxRatio(s) > 1.0) env.Insert(s, static_cast<int>(k));
    }
    double best = 0.0;
    for (const Generator& g : generators_) {
      const Eigen::MatrixXd RM = g.R * M;
      const Eigen::Matrix2d G = RM.transpose() * RM;
      best = std::max(best, env.MaxRatio(internal::Sinusoid::FromForm(G)));
    }
    return std::sqrt(best);
  }
  // ‖R_k M x‖ <= ‖R_k M R_j⁻¹‖ ‖R_j x‖ <= ‖R_k M R_j⁻¹‖ v̂(x) for every j.
  double best = 0.0;
  for (const Generator& gk : generators_) {
    const Eigen::MatrixXd RM = gk.R * M;
    double local = std::numeric_limits<double>::infinity();
    for (const Generator& gj : generators_) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gj.R);
      if (!lu.isInvertible()) continue;
      local = std::min(local, OperatorNorm(RM * lu.inverse()));
    }
    best = std::max(best, local);
  }
  return best;
}

}  // namespace swgain
