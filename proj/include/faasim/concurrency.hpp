#pragma once

#include <cstdint>
#include <deque>

#include "faasim/sim_time.hpp"

namespace faasim {

// Time-weighted in-flight concurrency for one function: change points plus a
// running integral, trimmed to the trailing window. All arithmetic is exact
// integer microsecond-concurrency, so autoscaler decisions are bit-stable.
class ConcurrencySeries {
 public:
  explicit ConcurrencySeries(SimTime window) : window_(window) {}

  void step(SimTime t, int delta) { set_level(t, level_ + delta); }

  void set_level(SimTime t, int level) {
    integral_ += static_cast<std::int64_t>(level_) * (t - last_change_);
    points_.push_back({t, level_, integral_});
    level_ = level;
    last_change_ = t;
    trim(t);
  }

  int level() const { return level_; }

  // Integral of concurrency over (from, to], exact.
  std::int64_t integral_over(SimTime from, SimTime to) const {
    return integral_at(to) - integral_at(from);
  }

  // Mean concurrency over the trailing window ending at t, times 2^0 —
  // returned as the exact pair (integral, window) via ceil on demand.
  std::int64_t window_integral(SimTime t) const { return integral_over(t - window_, t); }

  SimTime window() const { return window_; }

 private:
  struct Point {
    SimTime t;
    int level_before;          // level on (prev.t, t]
    std::int64_t integral_at;  // integral over [0, t]
  };

  std::int64_t integral_at(SimTime t) const {
    if (t <= 0) return 0;
    if (t >= last_change_) {
      return integral_ + static_cast<std::int64_t>(level_) * (t - last_change_);
    }
    // Binary search the last point with point.t <= t.
    std::size_t lo = 0, hi = points_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (points_[mid].t <= t) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo == 0) return base_integral_estimate(t);
    const Point& p = points_[lo - 1];
    int level_after = (lo < points_.size()) ? points_[lo].level_before : level_;
    return p.integral_at + static_cast<std::int64_t>(level_after) * (t - p.t);
  }

  std::int64_t base_integral_estimate(SimTime t) const {
    // t precedes every retained point: reconstruct from the oldest point,
    // whose level_before covers the gap back to the trim horizon.
    if (points_.empty()) {
      return integral_ - static_cast<std::int64_t>(level_) * (last_change_ - t);
    }
    const Point& p = points_.front();
    return p.integral_at - static_cast<std::int64_t>(p.level_before) * (p.t - t);
  }

  void trim(SimTime t) {
    // Keep one point older than the window so queries at t-window still
    // resolve the boundary level.
    SimTime cutoff = t - 2 * window_;
    while (points_.size() > 1 && points_[1].t < cutoff) points_.pop_front();
  }

  SimTime window_;
  SimTime last_change_ = 0;
  int level_ = 0;
  std::int64_t integral_ = 0;
  std::deque<Point> points_;
};

}  // namespace faasim
