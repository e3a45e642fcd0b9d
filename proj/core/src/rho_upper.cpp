#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "envelope.hpp"
#include "swgain/linalg.hpp"
#include "swgain/spectral.hpp"

namespace swgain {

namespace {

using internal::CircleEnvelope;
using internal::Sinusoid;

// Products whose norm ratio to the current polytope is below 1 + kTolerance
// are treated as dominated. The reported bound uses the measured ratios, so
// the tolerance only affects when the closure is declared stable.
constexpr double kTolerance = 1e-9;

struct Problem {
  std::vector<Eigen::MatrixXd> As;
  // Dwell time of the letter set; zero selects the short-window argument.
  double tau{0.0};
  std::vector<std::string> flags;
};

Problem MapClass(const std::vector<Eigen::MatrixXd>& As,
                 const SignalClassSpec& cls) {
  cls.Validate();
  Problem p;
  p.As = As;
  switch (cls.kind) {
    case ClassKind::kArbitrary:
      break;
    case ClassKind::kDwell:
      p.tau = cls.tau;
      break;
    case ClassKind::kAverageDwell:
      if (cls.n0 == 1) {
        p.tau = cls.tau;
      } else {
        p.flags.push_back("avg_dwell_upper_via_arbitrary_switching");
      }
      break;
    case ClassKind::kPersistentExcitation:
      if (cls.m0 < 0 || cls.m1 < 0 || cls.m0 >= static_cast<int>(As.size()) ||
          cls.m1 >= static_cast<int>(As.size())) {
        throw std::invalid_argument("endpoint modes out of range");
      }
      p.As = {As[cls.m0], As[cls.m1]};
      p.flags.push_back("pers_exc_upper_via_arbitrary_switching");
      break;
    default:
      throw std::invalid_argument("class " + to_string(cls.kind) +
                                  " has no spectral radius estimate");
  }
  return p;
}

// With a single mode every signal is constant, so any positive dwell time
// describes the same family of flows.
bool SingleMode(const std::vector<Eigen::MatrixXd>& As) {
  for (size_t i = 1; i < As.size(); ++i) {
    if (As[i] != As[0]) return false;
  }
  return true;
}

struct LetterSet {
  std::vector<Letter> letters;
  double step{0.0};
};

LetterSet MakeLetters(const std::vector<Eigen::MatrixXd>& As, double tau,
                      double grid_step) {
  LetterSet set;
  const int modes = static_cast<int>(As.size());
  if (tau > 0.0) {
    set.step = grid_step > 0.0 ? grid_step : tau / 20.0;
    // Pieces [τ + kδ, τ + (k+1)δ) for k < K cover [τ, 2τ); every dwell of
    // at least τ splits into such pieces.
    const int K = std::max(1, static_cast<int>(std::ceil(tau / set.step - 1e-9)));
    for (int i = 0; i < modes; ++i) {
      for (int k = 0; k < K; ++k) set.letters.push_back({i, tau + k * set.step});
    }
  } else {
    double a = 0.0;
    for (const Eigen::MatrixXd& A : As) a = std::max(a, OperatorNorm(A));
    set.step = grid_step > 0.0 ? grid_step
                               : std::min(0.05, 0.04 / std::max(a * a, 1e-12));
    for (int i = 0; i < modes; ++i) set.letters.push_back({i, set.step});
  }
  return set;
}

struct Element {
  Eigen::MatrixXd R;
  Eigen::MatrixXd G;
  Eigen::MatrixXd L;  // Cholesky factor of G, empty when G is singular.
  double time{0.0};
  bool alive{true};
  bool expanded{false};
};

// A finite set of scaled products together with the norm they define.
class Polytope {
 public:
  explicit Polytope(int n) : n_(n) {
    Add(Eigen::MatrixXd::Identity(n, n), 0.0);
  }

  int dim() const { return n_; }
  const std::vector<Element>& elements() const { return elements_; }
  std::vector<Element>& elements() { return elements_; }
  int alive_count() const {
    int c = 0;
    for (const Element& e : elements_) c += e.alive;
    return c;
  }

  // Smallest c found with ‖C x‖ <= c v̂(x) for all x.
  double Ratio(const Eigen::MatrixXd& C) const {
    const Eigen::MatrixXd G = C.transpose() * C;
    if (n_ == 1) {
      double best = 0.0;
      for (const Element& e : elements_) {
        if (e.alive) best = std::max(best, e.G(0, 0));
      }
      return std::sqrt(G(0, 0) / best);
    }
    if (n_ == 2) {
      return std::sqrt(std::max(0.0, envelope_.MaxRatio(Sinusoid::FromForm(G))));
    }
    return RatioND(G);
  }

  int Add(const Eigen::MatrixXd& R, double time) {
    Element e;
    e.R = R;
    e.G = R.transpose() * R;
    e.time = time;
    Eigen::LLT<Eigen::MatrixXd> llt(e.G);
    if (llt.info() == Eigen::Success) e.L = llt.matrixL();
    const int id = static_cast<int>(elements_.size());
    elements_.push_back(std::move(e));
    const Element& added = elements_.back();
    if (n_ == 2) {
      const Sinusoid s = Sinusoid::FromForm(added.G);
      if (id == 0) {
        envelope_.Reset(s, 0);
      } else {
        for (int dead : envelope_.Insert(s, id)) elements_[dead].alive = false;
      }
    } else if (n_ > 2 && added.L.size() != 0) {
      // Drop elements dominated by the new one alone.
      for (int k = 0; k < id; ++k) {
        if (!elements_[k].alive || k == 0) continue;
        if (MaxGeneralized(elements_[k].G, added) <= 1.0) {
          elements_[k].alive = false;
        }
      }
    }
    return id;
  }

  // Upper bound of sup_x d/dt log v̂(e^{A t} x) at t = 0.
  double LogDerivativeBound(const Eigen::MatrixXd& A) const {
    if (n_ == 1) return A(0, 0);
    if (n_ == 2) {
      return envelope_.MaxActiveRatio([&](int id) {
        const Eigen::MatrixXd GA = elements_[id].G * A;
        const Eigen::Matrix2d S = 0.5 * (GA + GA.transpose());
        return Sinusoid::FromForm(S);
      });
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const Element& e : elements_) {
      if (!e.alive) continue;
      if (e.L.size() == 0) return std::numeric_limits<double>::infinity();
      const Eigen::MatrixXd GA = e.G * A;
      best = std::max(best, MaxGeneralized(0.5 * (GA + GA.transpose()), e));
    }
    return best;
  }

  // lipschitz constant max ‖R_k‖ over live elements.
  double Lipschitz() const {
    double best = 1.0;
    for (const Element& e : elements_) {
      if (e.alive) best = std::max(best, OperatorNorm(e.R));
    }
    return best;
  }

 private:
  // λ_max of L⁻¹ S L⁻ᵀ with G = L Lᵀ.
  static double MaxGeneralized(const Eigen::MatrixXd& S, const Element& e) {
    const auto L = e.L.triangularView<Eigen::Lower>();
    Eigen::MatrixXd X = L.solve(S);
    X = L.solve(X.transpose()).transpose().eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (X + X.transpose()),
                                                       Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }

  static double MaxGeneralizedMix(const Eigen::MatrixXd& S,
                                  const Eigen::MatrixXd& M) {
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd Lm = llt.matrixL();
    const auto L = Lm.triangularView<Eigen::Lower>();
    Eigen::MatrixXd X = L.solve(S);
    X = L.solve(X.transpose()).transpose().eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (X + X.transpose()),
                                                       Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }

  double RatioND(const Eigen::MatrixXd& G) const {
    // Probe the direction where the candidate is largest and keep the
    // elements that are largest there.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    const Eigen::VectorXd u = eig.eigenvectors().col(n_ - 1);
    std::vector<std::pair<double, int>> ranked;
    for (int k = 0; k < static_cast<int>(elements_.size()); ++k) {
      const Element& e = elements_[k];
      if (!e.alive || e.L.size() == 0) continue;
      ranked.push_back({-(u.dot(e.G * u)), k});
    }
    const int top = std::min<int>(8, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + top, ranked.end());
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < top; ++a) {
      best = std::min(best, MaxGeneralized(G, elements_[ranked[a].second]));
    }
    if (best > 1.0) {
      for (int a = 0; a < top; ++a) {
        for (int b = a + 1; b < top; ++b) {
          const Eigen::MatrixXd& Gj = elements_[ranked[a].second].G;
          const Eigen::MatrixXd& Gk = elements_[ranked[b].second].G;
          auto f = [&](double th) {
            return MaxGeneralizedMix(G, th * Gj + (1.0 - th) * Gk);
          };
          double lo = 0.0;
          double hi = 1.0;
          const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
          double x1 = hi - phi * (hi - lo);
          double x2 = lo + phi * (hi - lo);
          double f1 = f(x1);
          double f2 = f(x2);
          for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
              hi = x2;
              x2 = x1;
              f2 = f1;
              x1 = hi - phi * (hi - lo);
              f1 = f(x1);
            } else {
              lo = x1;
              x1 = x2;
              f1 = f2;
              x2 = lo + phi * (hi - lo);
              f2 = f(x2);
            }
          }
          best = std::min({best, f1, f2});
        }
      }
    }
    return std::sqrt(std::max(best, 0.0));
  }

  int n_;
  std::vector<Element> elements_;
  CircleEnvelope envelope_;
};

struct ClosureResult {
  bool stabilized{false};
  bool budget_exhausted{false};
  bool horizon_reached{false};
  // Per letter: c_g with v̂(S_g x) <= c_g v̂(x) for the scaled flows
  // S_g = e^{A t_g} λ^{-t_g}.
  std::vector<double> letter_ratio;
};

ClosureResult RunClosure(const std::vector<Eigen::MatrixXd>& As,
                         const std::vector<Letter>& letters, double lambda,
                         const RhoUpperOptions& opts, Polytope* poly) {
  ClosureResult result;
  result.letter_ratio.assign(letters.size(), 0.0);
  std::vector<Eigen::MatrixXd> scaled;
  for (const Letter& l : letters) {
    scaled.push_back(expm(As[l.mode] * l.duration) *
                     std::pow(lambda, -l.duration));
  }
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    if (!poly->elements()[k].alive) continue;
    if (poly->elements()[k].time > opts.horizon_h) {
      result.horizon_reached = true;
      continue;
    }
    poly->elements()[k].expanded = true;
    for (size_t g = 0; g < letters.size(); ++g) {
      const Eigen::MatrixXd C = poly->elements()[k].R * scaled[g];
      const double ratio = poly->Ratio(C);
      if (ratio <= 1.0 + kTolerance) {
        result.letter_ratio[g] = std::max(result.letter_ratio[g], ratio);
        continue;
      }
      if (static_cast<int>(poly->elements().size()) >= opts.polytope_budget) {
        result.budget_exhausted = true;
        result.letter_ratio[g] = std::max(result.letter_ratio[g], ratio);
        continue;
      }
      const double t = poly->elements()[k].time + letters[g].duration;
      queue.push_back(poly->Add(C, t));
      result.letter_ratio[g] = std::max(result.letter_ratio[g], 1.0);
    }
    if (result.budget_exhausted) break;
  }
  // Live elements that were never expanded still need their images bounded.
  for (const Element& e : poly->elements()) {
    if (!e.alive || e.expanded) continue;
    for (size_t g = 0; g < letters.size(); ++g) {
      result.letter_ratio[g] =
          std::max(result.letter_ratio[g], poly->Ratio(e.R * scaled[g]));
    }
  }
  result.stabilized = !result.budget_exhausted && !result.horizon_reached;
  return result;
}

double Rate(double F, double t) { return std::exp(std::log(F) / t); }

// sup over s in [0, δ] of F(s)^{1/(t + s)} where F is increasing with
// F(δ) = F_end. Exact for e^{κ s} F(0) and an upper bound for affine F.
double PieceRate(double F_start, double F_end, double t, double delta) {
  const double at_start = Rate(F_start, t);
  const double at_end = F_end >= 1.0 ? Rate(F_end, t) : Rate(F_end, t + delta);
  return std::max(at_start, at_end);
}

// Solves Aᵀ P + P A = -I through the Kronecker form. Returns an empty matrix
// when A is not Hurwitz.
Eigen::MatrixXd LyapunovSolution(const Eigen::MatrixXd& A) {
  const int n = A.rows();
  if (SpectralAbscissa(A) >= 0.0) return {};
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd K(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) = A(j, i) * I;
      if (i == j) K.block(i * n, j * n, n, n) += A.transpose();
    }
  }
  const Eigen::VectorXd p = K.fullPivLu().solve(-Eigen::Map<const Eigen::VectorXd>(I.data(), n * n));
  Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(p.data(), n, n);
  return 0.5 * (P + P.transpose());
}

// max_i λ_max(sym(Lᵀ A_i L⁻ᵀ)), the largest log-derivative of ‖Lᵀ x‖.
double QuadraticLogNorm(const std::vector<Eigen::MatrixXd>& As,
                        const Eigen::MatrixXd& L) {
  const Eigen::MatrixXd Lt = L.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Lt);
  if (!(std::abs(lu.determinant()) > 1e-300)) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd Lt_inv = lu.inverse();
  double worst = -std::numeric_limits<double>::infinity();
  for (const Eigen::MatrixXd& A : As) worst = std::max(worst, LogNorm(Lt * A * Lt_inv));
  return std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
}

// Growth rate bound e^κ from a quadratic norm ‖Lᵀ x‖ valid under arbitrary
// switching. Candidate norms come from Lyapunov solutions of the modes and of
// their mean, refined by Nelder-Mead on the entries of the factor L.
double QuadraticRate(const std::vector<Eigen::MatrixXd>& As) {
  const int n = As.front().rows();
  std::vector<Eigen::MatrixXd> starts = {Eigen::MatrixXd::Identity(n, n)};
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  for (const Eigen::MatrixXd& A : As) mean += A / static_cast<double>(As.size());
  std::vector<Eigen::MatrixXd> bases = As;
  bases.push_back(mean);
  for (const Eigen::MatrixXd& A : bases) {
    const Eigen::MatrixXd P = LyapunovSolution(A);
    if (P.size() == 0) continue;
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() == Eigen::Success) starts.push_back(llt.matrixL());
  }
  Eigen::MatrixXd best_L = starts.front();
  double best = QuadraticLogNorm(As, best_L);
  for (const Eigen::MatrixXd& L : starts) {
    const double v = QuadraticLogNorm(As, L);
    if (v < best) best = v, best_L = L;
  }
  if (n > 8) return std::exp(best);

  // Nelder-Mead over the lower triangle of L, scaled to unit Frobenius norm.
  std::vector<std::pair<int, int>> entries;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) entries.push_back({i, j});
  }
  const int d = static_cast<int>(entries.size());
  auto to_matrix = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < d; ++k) L(entries[k].first, entries[k].second) = v(k);
    return L;
  };
  auto f = [&](const Eigen::VectorXd& v) { return QuadraticLogNorm(As, to_matrix(v)); };
  Eigen::VectorXd x0(d);
  const Eigen::MatrixXd L0 = best_L / best_L.norm();
  for (int k = 0; k < d; ++k) x0(k) = L0(entries[k].first, entries[k].second);
  std::vector<Eigen::VectorXd> simplex(d + 1, x0);
  std::vector<double> values(d + 1);
  for (int k = 0; k < d; ++k) simplex[k + 1](k) += 0.1;
  for (int k = 0; k <= d; ++k) values[k] = f(simplex[k]);
  for (int iter = 0; iter < 300 * d; ++iter) {
    std::vector<int> order(d + 1);
    for (int k = 0; k <= d; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int lo = order.front(), hi = order.back(), second = order[d - 1];
    if (values[hi] - values[lo] < 1e-12 * (1.0 + std::abs(values[lo]))) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int k = 0; k <= d; ++k) {
      if (k != hi) centroid += simplex[k] / d;
    }
    const Eigen::VectorXd reflected = centroid + (centroid - simplex[hi]);
    const double fr = f(reflected);
    if (fr < values[lo]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[hi]);
      const double fe = f(expanded);
      simplex[hi] = fe < fr ? expanded : reflected;
      values[hi] = std::min(fe, fr);
    } else if (fr < values[second]) {
      simplex[hi] = reflected;
      values[hi] = fr;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (simplex[hi] - centroid);
      const double fc = f(contracted);
      if (fc < values[hi]) {
        simplex[hi] = contracted;
        values[hi] = fc;
      } else {
        for (int k = 0; k <= d; ++k) {
          if (k == lo) continue;
          simplex[k] = simplex[lo] + 0.5 * (simplex[k] - simplex[lo]);
          values[k] = f(simplex[k]);
        }
      }
    }
  }
  best = std::min(best, *std::min_element(values.begin(), values.end()));
  return std::exp(best);
}

}  // namespace

std::vector<Letter> ClosureLetters(const std::vector<Eigen::MatrixXd>& As,
                                   const SignalClassSpec& cls,
                                   const RhoUpperOptions& opts) {
  Problem p = MapClass(As, cls);
  double tau = p.tau;
  if (tau == 0.0 && SingleMode(p.As)) tau = 1.0;
  return MakeLetters(p.As, tau, opts.grid_step).letters;
}

RhoEstimate rho_upper(const std::vector<Eigen::MatrixXd>& As,
                      const SignalClassSpec& cls, const RhoUpperOptions& opts,
                      const RhoEstimate* lower, PolytopeNorm* norm_out) {
  if (As.empty()) throw std::invalid_argument("no modes");
  if (!(opts.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (opts.grid_step < 0.0) throw std::invalid_argument("grid step must be positive");
  Problem problem = MapClass(As, cls);
  const int n = As.front().rows();

  RhoEstimate est;
  if (lower != nullptr) {
    est = *lower;
  } else {
    est = rho_lower(As, cls);
  }
  est.flags.insert(est.flags.end(), problem.flags.begin(), problem.flags.end());
  if (n == 0) {
    est.lower = est.upper = 0.0;
    est.stabilized = true;
    return est;
  }

  double tau = problem.tau;
  const bool single = SingleMode(problem.As);
  if (tau == 0.0 && single) tau = 1.0;
  const LetterSet letters = MakeLetters(problem.As, tau, opts.grid_step);
  est.generator_grid.clear();
  for (const Letter& l : letters.letters) {
    if (l.mode == 0) est.generator_grid.push_back(l.duration);
  }

  const double mu_hat =
      opts.mu_override ? *opts.mu_override : std::max(est.lower, 1e-300);
  est.mu_hat = mu_hat;
  est.epsilon = opts.epsilon;

  double lambda = mu_hat * (1.0 + opts.epsilon);
  Polytope poly(n);
  ClosureResult closure;
  for (int attempt = 0;; ++attempt) {
    poly = Polytope(n);
    closure = RunClosure(problem.As, letters.letters, lambda, opts, &poly);
    if (closure.stabilized || attempt >= opts.max_escalations) break;
    lambda *= 1.0 + opts.epsilon;
    est.flags.push_back("escalated");
  }
  est.stabilized = closure.stabilized;
  if (closure.budget_exhausted) est.flags.push_back("budget_exhausted");
  if (closure.horizon_reached) est.flags.push_back("horizon_reached");
  if (!closure.stabilized) est.flags.push_back("not_stabilized");
  est.polytope_size = poly.alive_count();

  // Growth rate certified on the letter grid alone.
  double grid_rate = 0.0;
  for (size_t g = 0; g < letters.letters.size(); ++g) {
    const double t = letters.letters[g].duration;
    grid_rate = std::max(grid_rate,
                         lambda * Rate(std::max(closure.letter_ratio[g], 1e-300), t));
  }

  const double Lip = poly.Lipschitz();
  std::vector<double> kappa;
  for (const Eigen::MatrixXd& A : problem.As) {
    kappa.push_back(poly.LogDerivativeBound(A));
  }

  double upper = std::numeric_limits<double>::infinity();
  if (tau > 0.0) {
    // Each admissible dwell splits into pieces of length in [t_k, t_k + δ).
    const double delta = letters.step;
    double worst = 0.0;
    for (size_t g = 0; g < letters.letters.size(); ++g) {
      const Letter& l = letters.letters[g];
      const Eigen::MatrixXd& A = problem.As[l.mode];
      const double t = l.duration;
      const double base =
          std::max(closure.letter_ratio[g], 1e-300) * std::pow(lambda, t);
      double rate = std::numeric_limits<double>::infinity();
      const double k = kappa[l.mode];
      if (std::isfinite(k)) {
        // ‖e^{A(t+s)}‖ <= base · e^{κ s}; the exponent of the rate is a
        // ratio of affine functions of s, extremal at an end point.
        const double lb = std::log(base);
        rate = std::exp(std::max(lb / t, (lb + k * delta) / (t + delta)));
      }
      // e^{A(t+s)} = e^{At} + ∫_0^s e^{Ar} A e^{At} dr.
      const double a = OperatorNorm(A);
      const double beta = std::min(1.0 + Lip * std::expm1(a * delta),
                                   std::isfinite(k)
                                       ? std::max(1.0, std::exp(k * delta))
                                       : std::numeric_limits<double>::infinity());
      const double drift = Lip * OperatorNorm(A * expm(A * t));
      rate = std::min(rate, PieceRate(base, base + delta * beta * drift, t, delta));
      worst = std::max(worst, rate);
    }
    upper = worst;
  } else {
    // Continuous-time bound from the log-derivative of v̂ along each field.
    double k_max = -std::numeric_limits<double>::infinity();
    for (double k : kappa) k_max = std::max(k_max, k);
    upper = std::exp(k_max);
    // Window argument over [0, h]: any switching on the window differs from
    // the convex combination of single-mode flows by at most
    // 2(e^{a'h} - 1 - a'h) after removing the common shift c·I.
    const double h = letters.step;
    double shift = 0.0;
    for (const Eigen::MatrixXd& A : problem.As) shift += A.trace();
    shift /= static_cast<double>(problem.As.size() * n);
    double a_shift = 0.0;
    double max_letter = 0.0;
    for (size_t g = 0; g < letters.letters.size(); ++g) {
      const Eigen::MatrixXd& A = problem.As[letters.letters[g].mode];
      a_shift = std::max(
          a_shift, OperatorNorm(A - shift * Eigen::MatrixXd::Identity(n, n)));
      max_letter = std::max(max_letter, closure.letter_ratio[g]);
    }
    const double remainder =
        std::expm1(a_shift * h) - a_shift * h;
    const double window = max_letter * std::pow(lambda, h) +
                          std::exp(shift * h) * 2.0 * Lip * remainder;
    upper = std::min(upper, Rate(window, h));
  }
  // Any quadratic norm also bounds the rate, for every class inside
  // arbitrary switching.
  const double quadratic = QuadraticRate(problem.As);
  if (quadratic < upper) {
    upper = quadratic;
    est.flags.push_back("quadratic_norm_bound");
  }
  est.upper = std::max(upper, est.lower);
  est.inflation = grid_rate > 0.0 ? est.upper / grid_rate : 1.0;

  if (norm_out != nullptr) {
    std::vector<PolytopeNorm::Generator> gens;
    for (const Element& e : poly.elements()) {
      if (!e.alive) continue;
      gens.push_back({e.R, e.time, std::pow(lambda, -e.time)});
    }
    *norm_out = PolytopeNorm(n, std::move(gens));
  }
  return est;
}

RhoEstimate rho_upper(const SystemSpec& sys, const SignalClassSpec& cls,
                      const RhoUpperOptions& opts, const RhoEstimate* lower,
                      PolytopeNorm* norm_out) {
  return rho_upper(sys.state_matrices(), cls, opts, lower, norm_out);
}

RhoEstimate rho_estimate(const std::vector<Eigen::MatrixXd>& As,
                         const SignalClassSpec& cls,
                         const RhoSearchOptions& search,
                         const RhoUpperOptions& opts) {
  const RhoEstimate lower = rho_lower(As, cls, search);
  return rho_upper(As, cls, opts, &lower);
}

PolytopeNorm extremal_norm(const std::vector<Eigen::MatrixXd>& As,
                           const SignalClassSpec& cls, double mu_hat,
                           const RhoUpperOptions& opts) {
  if (!(mu_hat > 0.0)) throw std::invalid_argument("mu_hat must be positive");
  RhoUpperOptions o = opts;
  o.mu_override = mu_hat;
  RhoEstimate lower;
  lower.lower = 0.0;
  PolytopeNorm norm;
  rho_upper(As, cls, o, &lower, &norm);
  return norm;
}

}  // namespace swgain
