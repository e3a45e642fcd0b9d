#include <cmath>
#include <stdexcept>

#include "swgain/linalg.hpp"
#include "swgain/spectral.hpp"

namespace swgain {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (const Letter& l : letters_) {
    if (!(l.duration > 0.0) || !std::isfinite(l.duration)) {
      throw std::invalid_argument("letter durations must be positive");
    }
    if (l.mode < 0) throw std::invalid_argument("negative mode index");
    total_ += l.duration;
  }
}

double Word::first_dwell() const {
  double d = 0.0;
  for (const Letter& l : letters_) {
    if (l.mode != letters_.front().mode) break;
    d += l.duration;
  }
  return d;
}

double Word::last_dwell() const {
  double d = 0.0;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    if (it->mode != letters_.back().mode) break;
    d += it->duration;
  }
  return d;
}

bool Word::IsValidForDwell(double tau) const {
  if (letters_.empty()) return true;
  const double slack = 1.0 - 1e-12;
  double run = 0.0;
  for (size_t j = 0; j < letters_.size(); ++j) {
    run += letters_[j].duration;
    const bool closes =
        j + 1 == letters_.size() || letters_[j + 1].mode != letters_[j].mode;
    if (closes) {
      if (run < tau * slack) return false;
      run = 0.0;
    }
  }
  return true;
}

Word Word::concatenate(const Word& other) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

Signal Word::to_signal() const {
  if (letters_.empty()) throw std::invalid_argument("empty word");
  std::vector<Segment> segments;
  for (const Letter& l : letters_) segments.push_back({l.mode, l.duration});
  return Signal(std::move(segments));
}

Eigen::MatrixXd WordFlow(const std::vector<Eigen::MatrixXd>& As,
                         const Word& word) {
  const int n = As.empty() ? 0 : As.front().rows();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
  for (const Letter& l : word.letters()) {
    if (l.mode >= static_cast<int>(As.size())) {
      throw std::invalid_argument("word uses an unknown mode");
    }
    phi = (expm(As[l.mode] * l.duration) * phi).eval();
  }
  return phi;
}

std::pair<Eigen::MatrixXd, double> word_flow(const SystemSpec& sys,
                                             const Word& word) {
  return {WordFlow(sys.state_matrices(), word), word.total_time()};
}

}  // namespace swgain
