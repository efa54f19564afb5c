#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "faasim/sim_time.hpp"

namespace faasim {

// Per-function inter-arrival-time statistics over a bounded sliding window
// of the most recent samples. Quantiles are exact nearest-rank over the
// retained window. This is the signal behind the dual-track metric filter.
class IatTracker {
 public:
  explicit IatTracker(std::size_t function_count, std::size_t window = 128,
                      std::size_t min_samples = 2)
      : window_(window), min_samples_(min_samples), per_fn_(function_count) {}

  void record_arrival(std::int32_t fn, SimTime t) {
    State& s = per_fn_[fn];
    if (s.arrivals > 0) {
      SimTime iat = t - s.last_arrival;
      if (iat < 0) throw std::logic_error("record_arrival: time went backwards");
      // Zero gaps (same-microsecond arrivals) carry no spacing information
      // and would violate the all-samples-positive invariant.
      if (iat > 0) push_sample(s, iat);
    }
    s.last_arrival = t;
    ++s.arrivals;
  }

  // Nearest-rank quantile of the retained window; nullopt while fewer than
  // min_samples samples are available (a cold function).
  std::optional<SimTime> quantile(std::int32_t fn, double q) const {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
    const State& s = per_fn_[fn];
    if (s.samples.size() < min_samples_) return std::nullopt;
    std::vector<SimTime> sorted(s.samples);
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
  }

  std::size_t sample_count(std::int32_t fn) const { return per_fn_[fn].samples.size(); }
  std::uint64_t arrival_count(std::int32_t fn) const { return per_fn_[fn].arrivals; }
  SimTime last_arrival(std::int32_t fn) const { return per_fn_[fn].last_arrival; }
  std::size_t window() const { return window_; }

  // Retained window, oldest first.
  std::vector<SimTime> samples(std::int32_t fn) const {
    const State& s = per_fn_[fn];
    if (s.samples.size() < window_) return s.samples;
    std::vector<SimTime> out;
    out.reserve(window_);
    for (std::size_t i = 0; i < window_; ++i) {
      out.push_back(s.samples[(s.head + i) % window_]);
    }
    return out;
  }

 private:
  struct State {
    SimTime last_arrival = 0;
    std::uint64_t arrivals = 0;
    std::vector<SimTime> samples;  // ring once full
    std::size_t head = 0;          // index of the oldest sample when full
  };

  void push_sample(State& s, SimTime iat) {
    if (s.samples.size() < window_) {
      s.samples.push_back(iat);
    } else {
      s.samples[s.head] = iat;
      s.head = (s.head + 1) % window_;
    }
  }

  std::size_t window_;
  std::size_t min_samples_;
  std::vector<State> per_fn_;
};

}  // namespace faasim
