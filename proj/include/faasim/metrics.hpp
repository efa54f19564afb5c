#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "faasim/sim_time.hpp"
#include "faasim/trace.hpp"

namespace faasim {

// End-to-end response time over pure execution time; 1.0 is ideal.
inline double slowdown(SimTime e2e_us, SimTime duration_us) {
  if (duration_us <= 0) throw std::invalid_argument("slowdown: duration must be > 0");
  if (e2e_us < duration_us) {
    throw std::logic_error("slowdown: e2e below execution time (clock bug)");
  }
  return static_cast<double>(e2e_us) / static_cast<double>(duration_us);
}

// Nearest-rank quantile of an unsorted sample set (copies and sorts).
double nearest_rank(std::vector<double> values, double q);
SimTime nearest_rank_us(std::vector<SimTime> values, double q);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

struct MemorySample {
  SimTime t = 0;
  std::int64_t busy_mb = 0;       // regular instances executing >= 1 invocation
  std::int64_t idle_mb = 0;       // regular instances creating or idle
  std::int64_t emergency_mb = 0;  // margin meters, any phase
  std::int64_t busy_total_mb = 0; // busy regular + busy emergency, cost denominator
  std::int64_t creations_regular = 0;   // since previous sample
  std::int64_t creations_emergency = 0;
};

struct FunctionStats {
  std::string id;
  double p99_slowdown = 0.0;
  std::int64_t invocations = 0;
  std::int64_t cold_starts = 0;
  std::int64_t emergency_served = 0;
};

// Cost attributed to control-plane work, in cpu-milliseconds per event. A
// declared model with calibration knobs, not a measurement.
struct CpuCostModel {
  double regular_creation_ms = 25.0;
  double emergency_creation_ms = 5.0;
  double tick_ms = 1.0;
  double lr_inference_ms = 10.0;
};

struct MetricsReport {
  bool empty = true;

  double slowdown_geomean_p99 = 0.0;
  double normalized_cost = 0.0;  // NaN when no busy memory was ever sampled
  double creation_rate_regular_per_s = 0.0;
  double creation_rate_emergency_per_s = 0.0;
  double cpu_overhead_fraction = 0.0;
  double reported_fraction = 1.0;  // of expedited-served invocations

  std::int64_t invocations = 0;   // arrivals after warm-up
  std::int64_t served = 0;
  std::int64_t rejected = 0;
  std::int64_t cold_starts = 0;
  std::int64_t emergency_served = 0;
  std::int64_t creations_regular = 0;   // after warm-up
  std::int64_t creations_emergency = 0;
  std::int64_t deferred_creations = 0;
  std::uint64_t event_count = 0;
  std::uint64_t dispatch_hash = 0;

  std::vector<FunctionStats> per_function;          // function table order
  std::vector<MemorySample> timeseries;             // post-warm-up samples
  std::vector<std::pair<double, SimTime>> sched_delay_cdf;  // (quantile, delay)

  std::map<std::string, double> scalar_map() const;
};

struct AggregateInputs {
  const Workload* workload = nullptr;
  SimTime warmup = 0;
  SimTime horizon = 0;
  std::vector<bool> cold_start;  // per trace event
  std::vector<bool> reported;    // per trace event (expedited reporting)
  std::vector<MemorySample> samples;  // full run, 1 per sample tick
  std::int64_t creations_regular_total = 0;
  std::int64_t creations_emergency_total = 0;
  std::int64_t deferred_creations = 0;
  std::int64_t ticks_post_warmup = 0;
  bool lr_inference = false;
  CpuCostModel cpu_costs;
  std::uint64_t event_count = 0;
  std::uint64_t dispatch_hash = 0;
};

// Collapses per-invocation outcomes and sampled series into the report.
// Per-function p99 by nearest rank over post-warm-up served invocations;
// the headline performance number is the geometric mean of those p99s.
MetricsReport aggregate(const AggregateInputs& in);

// Writes summary.csv, per_function.csv, timeseries.csv, sched_delay_cdf.csv
// under dir. Deterministic: re-exporting the same report is byte-identical.
void export_report(const MetricsReport& report, const std::string& dir);

}  // namespace faasim
