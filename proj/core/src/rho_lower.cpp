#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "swgain/linalg.hpp"
#include "swgain/spectral.hpp"

namespace swgain {

namespace {

struct Candidate {
  double value{-1.0};
  Word word;
};

double GrowthRate(const Eigen::MatrixXd& product, double time) {
  if (!(time > 0.0)) return 0.0;
  const double r = SpectralRadius(product);
  if (r <= 0.0) return 0.0;
  return std::exp(std::log(r) / time);
}

double EvaluateWord(const std::vector<Eigen::MatrixXd>& As, const Word& w) {
  return GrowthRate(WordFlow(As, w), w.total_time());
}

void CheckModes(const std::vector<Eigen::MatrixXd>& As) {
  if (As.empty()) throw std::invalid_argument("no modes");
  const int n = As.front().rows();
  for (const Eigen::MatrixXd& A : As) {
    if (A.rows() != n || A.cols() != n) {
      throw std::invalid_argument("modes must be square of equal size");
    }
  }
}

// Effective dwell time of the subclass searched for lower bounds.
double SearchDwell(const SignalClassSpec& cls) {
  cls.Validate();
  switch (cls.kind) {
    case ClassKind::kArbitrary: return 0.0;
    case ClassKind::kDwell: return cls.tau;
    case ClassKind::kAverageDwell: return cls.tau;
    default:
      throw std::invalid_argument("class " + to_string(cls.kind) +
                                  " has no spectral radius estimate");
  }
}

std::vector<double> DurationGrid(const RhoSearchOptions& search, double tau) {
  std::vector<double> grid;
  if (!search.duration_grid.empty()) {
    for (double d : search.duration_grid) {
      if (d >= tau * (1.0 - 1e-12) && d > 0.0) grid.push_back(std::max(d, tau));
    }
  } else {
    const int K = std::max(search.grid_points, 1);
    const double span =
        search.grid_span > 0.0 ? search.grid_span : 2.0 * std::max(tau, 0.5);
    for (int k = 0; k < K; ++k) {
      if (tau > 0.0) {
        grid.push_back(K == 1 ? tau : tau + span * k / (K - 1));
      } else {
        grid.push_back(span * (k + 1) / K);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw std::invalid_argument("empty duration grid");
  return grid;
}

// Enumerates words whose letters come from a finite alphabet of
// (mode, duration) pairs, with adjacent letters (cyclically) in different
// modes and only the lexicographically least rotation kept.
class WordEnumerator {
 public:
  WordEnumerator(const std::vector<Eigen::MatrixXd>& As,
                 const std::vector<double>& grid)
      : As_(As), grid_(grid), K_(static_cast<int>(grid.size())) {
    for (size_t i = 0; i < As.size(); ++i) {
      for (double d : grid) flows_.push_back(expm(As[i] * d));
    }
  }

  int alphabet() const { return static_cast<int>(flows_.size()); }
  int mode_of(int letter) const { return letter / K_; }

  // Best `keep` words of exactly L letters whose first letter is `first`.
  std::vector<Candidate> Run(int L, int first, int keep) const {
    std::vector<Candidate> best;
    std::vector<int> idx(L);
    idx[0] = first;
    Recurse(L, 1, &idx, flows_[first], grid_[first % K_], keep, &best);
    return best;
  }

 private:
  bool Canonical(const std::vector<int>& idx) const {
    const int L = static_cast<int>(idx.size());
    for (int s = 1; s < L; ++s) {
      for (int j = 0; j < L; ++j) {
        const int a = idx[(s + j) % L];
        const int b = idx[j];
        if (a < b) return false;
        if (a > b) break;
      }
    }
    return true;
  }

  void Record(const std::vector<int>& idx, double value, int keep,
              std::vector<Candidate>* best) const {
    if (static_cast<int>(best->size()) >= keep &&
        value <= best->back().value) {
      return;
    }
    std::vector<Letter> letters;
    for (int l : idx) letters.push_back({mode_of(l), grid_[l % K_]});
    Candidate c{value, Word(std::move(letters))};
    auto pos = std::upper_bound(
        best->begin(), best->end(), c,
        [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    best->insert(pos, std::move(c));
    if (static_cast<int>(best->size()) > keep) best->pop_back();
  }

  void Recurse(int L, int depth, std::vector<int>* idx,
               const Eigen::MatrixXd& product, double time, int keep,
               std::vector<Candidate>* best) const {
    const int first = (*idx)[0];
    for (int l = first; l < alphabet(); ++l) {
      if (mode_of(l) == mode_of((*idx)[depth - 1])) continue;
      if (depth == L - 1 && mode_of(l) == mode_of(first)) continue;
      (*idx)[depth] = l;
      const Eigen::MatrixXd next = flows_[l] * product;
      const double t = time + grid_[l % K_];
      if (depth == L - 1) {
        if (Canonical(*idx)) Record(*idx, GrowthRate(next, t), keep, best);
      } else {
        Recurse(L, depth + 1, idx, next, t, keep, best);
      }
    }
  }

  const std::vector<Eigen::MatrixXd>& As_;
  std::vector<double> grid_;
  int K_;
  std::vector<Eigen::MatrixXd> flows_;
};

// Pattern search on the durations of `start`, keeping each at least
// `min_duration`.
Candidate Refine(const std::vector<Eigen::MatrixXd>& As, Candidate start,
                 double min_duration, double step, int iters) {
  std::vector<Letter> letters = start.word.letters();
  double value = start.value;
  for (int it = 0; it < iters && step > 1e-12; ++it) {
    bool improved = false;
    for (size_t j = 0; j < letters.size(); ++j) {
      for (double dir : {1.0, -1.0}) {
        std::vector<Letter> trial = letters;
        trial[j].duration = std::max(min_duration, trial[j].duration + dir * step);
        if (trial[j].duration == letters[j].duration) continue;
        const double v = EvaluateWord(As, Word(trial));
        if (v > value) {
          value = v;
          letters = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {value, Word(std::move(letters))};
}

}  // namespace

RhoEstimate rho_lower(const std::vector<Eigen::MatrixXd>& As,
                      const SignalClassSpec& cls,
                      const RhoSearchOptions& search) {
  CheckModes(As);
  RhoEstimate est;
  const int n = As.front().rows();
  const int modes = static_cast<int>(As.size());

  if (cls.kind == ClassKind::kPersistentExcitation) {
    cls.Validate();
    if (cls.m0 >= modes || cls.m1 >= modes || cls.m0 < 0 || cls.m1 < 0) {
      throw std::invalid_argument("endpoint modes out of range");
    }
    // Constant weights c with c·T >= μ are admissible.
    const double c_min = cls.mu / cls.T;
    double best_c = 1.0;
    est.lower = std::exp(SpectralAbscissa(As[cls.m1]));
    for (int k = 0; k <= 64; ++k) {
      const double c = c_min + (1.0 - c_min) * k / 64.0;
      const double v = std::exp(
          SpectralAbscissa((1.0 - c) * As[cls.m0] + c * As[cls.m1]));
      if (v > est.lower) {
        est.lower = v;
        best_c = c;
      }
    }
    if (best_c == 1.0) {
      est.witness = Word({{cls.m1, 1.0}});
      est.lower = EvaluateWord(As, est.witness);
    } else {
      est.flags.push_back("witness_convex_weight=" + std::to_string(best_c));
    }
    est.mu_hat = est.lower;
    return est;
  }

  const double tau = SearchDwell(cls);
  est.tau = tau;
  if (n == 0) {
    est.lower = 0.0;
    est.upper = 0.0;
    return est;
  }
  const std::vector<double> grid = DurationGrid(search, tau);
  est.generator_grid = grid;

  std::vector<Candidate> pool;
  auto consider = [&](Candidate c) {
    if (c.value < 0.0) return;
    pool.push_back(std::move(c));
  };

  // Dwelling in one mode forever is admissible for every supported class.
  const double single = std::max(tau, 1.0);
  for (int i = 0; i < modes; ++i) {
    Word w({{i, single}});
    consider({EvaluateWord(As, w), w});
  }
  for (const Word& w : search.seeds) {
    if (w.empty() || !w.IsValidForDwell(tau)) continue;
    bool known = true;
    for (const Letter& l : w.letters()) known = known && l.mode < modes;
    if (known) consider({EvaluateWord(As, w), w});
  }

  // Periodic words.
  const int K = static_cast<int>(grid.size());
  const int keep = std::max(search.refine_candidates, 1);
  if (modes > 1) {
    const WordEnumerator enumerator(As, grid);
    double count = 0.0;
    for (int L = 2; L <= search.max_letters; ++L) {
      const double words =
          std::pow(static_cast<double>(modes - 1), L - 1) * modes *
          std::pow(static_cast<double>(K), L) / L;
      count += words;
      if (count > static_cast<double>(search.max_words)) {
        est.flags.push_back("word_search_truncated_at_" + std::to_string(L - 1));
        break;
      }
      const int alphabet = enumerator.alphabet();
      std::vector<std::vector<Candidate>> results(alphabet);
      const int threads = std::clamp(search.threads, 1, alphabet);
      if (threads == 1) {
        for (int f = 0; f < alphabet; ++f) results[f] = enumerator.Run(L, f, keep);
      } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < threads; ++w) {
          workers.emplace_back([&, w] {
            for (int f = w; f < alphabet; f += threads) {
              results[f] = enumerator.Run(L, f, keep);
            }
          });
        }
        for (std::thread& t : workers) t.join();
      }
      for (auto& r : results) {
        for (Candidate& c : r) consider(std::move(c));
      }
    }
  }

  // Stable order: value descending, then discovery order.
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.value > b.value;
                   });
  Candidate best = pool.front();
  const double spacing =
      K > 1 ? (grid.back() - grid.front()) / (K - 1) : std::max(grid[0], 0.1);
  const double min_duration = std::max(tau, 1e-9);
  const int to_refine = std::min<int>(keep, pool.size());
  for (int c = 0; c < to_refine && search.refine_iters > 0; ++c) {
    if (pool[c].word.letters().size() < 2) continue;
    Candidate refined =
        Refine(As, pool[c], min_duration, spacing, search.refine_iters);
    if (refined.value > best.value) best = std::move(refined);
  }

  est.witness = best.word;
  est.lower = best.value;
  est.mu_hat = est.lower;
  return est;
}

RhoEstimate rho_lower(const SystemSpec& sys, const SignalClassSpec& cls,
                      const RhoSearchOptions& search) {
  return rho_lower(sys.state_matrices(), cls, search);
}

std::vector<RhoCurvePoint> rho_curve(const std::vector<Eigen::MatrixXd>& As,
                                     const std::vector<double>& taus,
                                     const RhoSearchOptions& search,
                                     const RhoUpperOptions* upper) {
  for (size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] > 0.0)) throw std::invalid_argument("tau values must be positive");
    if (k > 0 && taus[k] < taus[k - 1]) {
      throw std::invalid_argument("tau values must be sorted");
    }
  }
  std::vector<RhoCurvePoint> points(taus.size());
  RhoSearchOptions opts = search;
  double envelope = 0.0;
  for (size_t r = taus.size(); r-- > 0;) {
    const SignalClassSpec cls = SignalClassSpec::Dwell(taus[r]);
    RhoEstimate est = rho_lower(As, cls, opts);
    points[r].raw_lower = est.lower;
    envelope = std::max(envelope, est.lower);
    points[r].envelope_lower = envelope;
    if (!est.witness.empty()) opts.seeds.push_back(est.witness);
    if (upper != nullptr) est = rho_upper(As, cls, *upper, &est);
    points[r].estimate = std::move(est);
  }
  return points;
}

}  // namespace swgain
