#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "faasim/iat.hpp"
#include "faasim/sim_time.hpp"

namespace faasim {

enum class PolicyKind : std::uint8_t {
  kSync = 0,        // instance creation on the invocation's critical path
  kAsyncWindow,     // windowed concurrency autoscaler, central wait queue
  kPredictiveLr,    // async reconcile driven by per-function linear regression
  kDualTrack,       // standard track + expedited emergency track
  kFastAsync,       // AsyncWindow with an overridden (fast) creation delay
};

const char* policy_kind_name(PolicyKind k);

struct LrConfig {
  int lags = 8;
  SimTime training = 1200 * kUsPerSec;  // history before this fits the model
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kAsyncWindow;
  SimTime keep_alive = 60 * kUsPerSec;
  SimTime window = 60 * kUsPerSec;
  SimTime tick = 2 * kUsPerSec;
  double filter_quantile = 0.5;
  bool report_all = false;  // disable the dual-track metric filter
  LrConfig lr;
  SimTime fast_async_delay = 100 * kUsPerMs;

  bool uses_central_queue() const { return kind != PolicyKind::kDualTrack; }
  bool window_autoscaled() const {
    return kind == PolicyKind::kAsyncWindow || kind == PolicyKind::kFastAsync ||
           kind == PolicyKind::kDualTrack;
  }
};

struct RoutingDecision {
  enum class Target : std::uint8_t { kExistingInstance, kExpedited, kWaitInCentralQueue };
  Target target = Target::kWaitInCentralQueue;
  std::int64_t instance = -1;
  bool reported = true;  // contributes to the standard track's concurrency series
};

// desired = ceil(mean concurrency / target_concurrency), with the mean taken
// over the trailing window. Exact integer arithmetic.
inline std::int64_t window_desired(std::int64_t window_integral_us, SimTime window,
                                   int target_concurrency) {
  if (window_integral_us <= 0) return 0;
  return ceil_div(window_integral_us, window * target_concurrency);
}

// Scale-from-zero path: the first sample is acted on directly instead of
// waiting for the window mean to move.
inline std::int64_t instantaneous_desired(int in_flight, int target_concurrency) {
  if (in_flight <= 0) return 0;
  return ceil_div(in_flight, target_concurrency);
}

// Report an expedited-served invocation to the standard track only when the
// function's IAT quantile is known and below the keep-alive period; a cold
// function (too few samples) is treated as sporadic.
inline bool filter_reports(const IatTracker& tracker, std::int32_t fn,
                           const PolicyConfig& policy) {
  if (policy.report_all) return true;
  auto q = tracker.quantile(fn, policy.filter_quantile);
  return q.has_value() && *q < policy.keep_alive;
}

// Per-function one-step-ahead predictor: ordinary least squares of the next
// tick-mean concurrency on the last `lags` tick means plus an intercept.
// Fitting is a one-shot batch over the training span.
class LrModel {
 public:
  // Returns false when the history is degenerate (constant target); callers
  // then fall back to the last observed mean.
  bool fit(const std::vector<double>& tick_means, int lags);

  double predict(const std::vector<double>& recent) const;  // recent[0] = newest

  bool fitted() const { return fitted_; }
  int lags() const { return lags_; }

 private:
  bool fitted_ = false;
  int lags_ = 0;
  std::vector<double> weights_;  // size lags_, newest first
  double intercept_ = 0.0;
};

}  // namespace faasim
