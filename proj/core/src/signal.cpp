#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swgain/system.hpp"

namespace swgain {

Signal::Signal(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw std::invalid_argument("signal needs at least one segment");
  }
  for (const Segment& s : segments_) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw std::invalid_argument("segment durations must be positive");
    }
    if (s.mode < 0) throw std::invalid_argument("negative mode index");
    total_ += s.duration;
  }
}

Signal Signal::Constant(int mode, double duration) {
  return Signal({{mode, duration}});
}

std::vector<double> Signal::breakpoints() const {
  std::vector<double> result;
  result.reserve(segments_.size() + 1);
  double t = 0.0;
  result.push_back(t);
  for (const Segment& s : segments_) {
    t += s.duration;
    result.push_back(t);
  }
  result.back() = total_;
  return result;
}

int Signal::mode_at(double t) const {
  double end = 0.0;
  for (const Segment& s : segments_) {
    end += s.duration;
    if (t < end) return s.mode;
  }
  return segments_.back().mode;
}

Signal Signal::merged() const {
  std::vector<Segment> out;
  for (const Segment& s : segments_) {
    if (!out.empty() && out.back().mode == s.mode) {
      out.back().duration += s.duration;
    } else {
      out.push_back(s);
    }
  }
  return Signal(std::move(out));
}

Signal Signal::concatenate(const Signal& other) const {
  std::vector<Segment> out = segments_;
  out.insert(out.end(), other.segments_.begin(), other.segments_.end());
  return Signal(std::move(out));
}

Signal Signal::truncated(double T) const {
  if (!(T > 0.0) || T > total_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("truncation horizon outside the signal");
  }
  std::vector<Segment> out;
  double start = 0.0;
  for (const Segment& s : segments_) {
    const double end = start + s.duration;
    if (end >= T) {
      if (T - start > 0.0) out.push_back({s.mode, T - start});
      break;
    }
    out.push_back(s);
    start = end;
  }
  return Signal(std::move(out));
}

void Signal::ValidateFor(const SystemSpec& sys) const {
  for (const Segment& s : segments_) {
    if (s.mode >= sys.num_modes()) {
      throw std::invalid_argument("signal uses mode " + std::to_string(s.mode) +
                                  " but the system has " +
                                  std::to_string(sys.num_modes()));
    }
  }
}

WeightSignal::WeightSignal(std::vector<WeightSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw std::invalid_argument("weight signal needs at least one segment");
  }
  for (const WeightSegment& s : segments_) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw std::invalid_argument("segment durations must be positive");
    }
    if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) {
      throw std::invalid_argument("weights must lie in [0, 1]");
    }
    total_ += s.duration;
  }
}

std::vector<double> WeightSignal::breakpoints() const {
  std::vector<double> result{0.0};
  double t = 0.0;
  for (const WeightSegment& s : segments_) {
    t += s.duration;
    result.push_back(t);
  }
  result.back() = total_;
  return result;
}

double WeightSignal::integral(double a, double b) const {
  double sum = 0.0;
  double start = 0.0;
  for (const WeightSegment& s : segments_) {
    const double end = start + s.duration;
    const double lo = std::max(a, start);
    const double hi = std::min(b, end);
    if (hi > lo) sum += s.alpha * (hi - lo);
    start = end;
  }
  return sum;
}

}  // namespace swgain
