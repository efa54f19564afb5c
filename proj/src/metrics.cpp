#include "faasim/metrics.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

namespace faasim {

namespace {

template <typename T>
T nearest_rank_impl(std::vector<T> values, double q) {
  if (values.empty()) throw std::invalid_argument("nearest_rank: empty sample set");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("nearest_rank: q outside [0,1]");
  std::sort(values.begin(), values.end());
  auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return values[rank - 1];
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char probe[64];
      std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
      if (std::strtod(probe, nullptr) == v) return probe;
    }
  }
  return buf;
}

double nearest_rank(std::vector<double> values, double q) {
  return nearest_rank_impl(std::move(values), q);
}

SimTime nearest_rank_us(std::vector<SimTime> values, double q) {
  return nearest_rank_impl(std::move(values), q);
}

std::map<std::string, double> MetricsReport::scalar_map() const {
  return {
      {"invocations", static_cast<double>(invocations)},
      {"served", static_cast<double>(served)},
      {"rejected", static_cast<double>(rejected)},
      {"cold_starts", static_cast<double>(cold_starts)},
      {"emergency_served", static_cast<double>(emergency_served)},
      {"creations_regular", static_cast<double>(creations_regular)},
      {"creations_emergency", static_cast<double>(creations_emergency)},
      {"deferred_creations", static_cast<double>(deferred_creations)},
      {"slowdown_geomean_p99", slowdown_geomean_p99},
      {"normalized_cost", normalized_cost},
      {"creation_rate_regular_per_s", creation_rate_regular_per_s},
      {"creation_rate_emergency_per_s", creation_rate_emergency_per_s},
      {"cpu_overhead_fraction", cpu_overhead_fraction},
      {"reported_fraction", reported_fraction},
  };
}

MetricsReport aggregate(const AggregateInputs& in) {
  const Workload& w = *in.workload;
  MetricsReport r;
  r.event_count = in.event_count;
  r.dispatch_hash = in.dispatch_hash;
  r.deferred_creations = in.deferred_creations;

  std::vector<std::vector<double>> fn_slowdowns(w.functions.size());
  std::vector<SimTime> sched_delays;
  std::vector<FunctionStats> fn_stats(w.functions.size());
  for (std::size_t i = 0; i < w.functions.size(); ++i) fn_stats[i].id = w.functions[i].id;

  std::int64_t expedited_total = 0, expedited_reported = 0;
  double exec_time_ms = 0.0;
  for (std::size_t i = 0; i < w.events.size(); ++i) {
    const TraceEvent& e = w.events[i];
    if (e.arrival < in.warmup || e.arrival > in.horizon) continue;
    ++r.invocations;
    FunctionStats& fs = fn_stats[e.function];
    ++fs.invocations;
    if (e.track == Track::kRejected) {
      ++r.rejected;
      continue;
    }
    if (!e.served()) continue;  // still in flight at the horizon
    ++r.served;
    fn_slowdowns[e.function].push_back(
        slowdown(e.completion - e.arrival, e.duration));
    sched_delays.push_back(e.scheduling_delay());
    exec_time_ms += static_cast<double>(e.duration) / kUsPerMs;
    if (e.track == Track::kEmergency) {
      ++r.emergency_served;
      ++fs.emergency_served;
      ++expedited_total;
      if (in.reported[i]) ++expedited_reported;
    }
    if (in.cold_start[i]) {
      ++r.cold_starts;
      ++fs.cold_starts;
    }
  }

  if (r.served == 0) {
    r.empty = true;
    return r;
  }
  r.empty = false;

  double log_sum = 0.0;
  std::int64_t fn_with_data = 0;
  for (std::size_t f = 0; f < fn_slowdowns.size(); ++f) {
    if (fn_slowdowns[f].empty()) continue;
    double p99 = nearest_rank(fn_slowdowns[f], 0.99);
    fn_stats[f].p99_slowdown = p99;
    log_sum += std::log(p99);
    ++fn_with_data;
  }
  r.slowdown_geomean_p99 = std::exp(log_sum / static_cast<double>(fn_with_data));
  r.per_function = std::move(fn_stats);

  // Memory-time from post-warm-up samples; busy_total is the denominator.
  std::int64_t total_mbs = 0, busy_mbs = 0;
  for (const MemorySample& s : in.samples) {
    if (s.t < in.warmup) continue;
    r.timeseries.push_back(s);
    total_mbs += s.busy_mb + s.idle_mb + s.emergency_mb;
    busy_mbs += s.busy_total_mb;
    r.creations_regular += s.creations_regular;
    r.creations_emergency += s.creations_emergency;
  }
  r.normalized_cost = busy_mbs > 0
                          ? static_cast<double>(total_mbs) / static_cast<double>(busy_mbs)
                          : std::numeric_limits<double>::quiet_NaN();

  double span_s = to_seconds(in.horizon - in.warmup);
  r.creation_rate_regular_per_s = static_cast<double>(r.creations_regular) / span_s;
  r.creation_rate_emergency_per_s =
      static_cast<double>(r.creations_emergency) / span_s;

  double overhead_ms =
      in.cpu_costs.regular_creation_ms * static_cast<double>(r.creations_regular) +
      in.cpu_costs.emergency_creation_ms * static_cast<double>(r.creations_emergency) +
      in.cpu_costs.tick_ms * static_cast<double>(in.ticks_post_warmup) +
      (in.lr_inference ? in.cpu_costs.lr_inference_ms *
                             static_cast<double>(in.ticks_post_warmup)
                       : 0.0);
  r.cpu_overhead_fraction = exec_time_ms > 0 ? overhead_ms / exec_time_ms : 0.0;

  r.reported_fraction =
      expedited_total > 0
          ? static_cast<double>(expedited_reported) / static_cast<double>(expedited_total)
          : 1.0;

  for (int pct = 1; pct <= 100; ++pct) {
    double q = pct / 100.0;
    r.sched_delay_cdf.push_back({q, nearest_rank_us(sched_delays, q)});
  }
  return r;
}

namespace {

std::ofstream open_out(const std::string& dir, const char* name) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void export_report(const MetricsReport& report, const std::string& dir) {
  {
    auto out = open_out(dir, "summary.csv");
    out << "metric,value\n";
    for (const auto& [k, v] : report.scalar_map()) out << k << ',' << format_double(v) << '\n';
    out << "event_count," << report.event_count << '\n';
    out << "dispatch_hash," << report.dispatch_hash << '\n';
  }
  {
    auto out = open_out(dir, "per_function.csv");
    out << "function_id,p99_slowdown,invocations,cold_starts,emergency_served\n";
    for (const auto& f : report.per_function) {
      out << f.id << ',' << format_double(f.p99_slowdown) << ',' << f.invocations << ','
          << f.cold_starts << ',' << f.emergency_served << '\n';
    }
  }
  {
    auto out = open_out(dir, "timeseries.csv");
    out << "t_s,busy_mb,idle_mb,emergency_mb,creations_regular,creations_emergency\n";
    for (const auto& s : report.timeseries) {
      out << format_double(to_seconds(s.t)) << ',' << s.busy_mb << ',' << s.idle_mb << ','
          << s.emergency_mb << ',' << s.creations_regular << ','
          << s.creations_emergency << '\n';
    }
  }
  {
    auto out = open_out(dir, "sched_delay_cdf.csv");
    out << "quantile,delay_us\n";
    for (const auto& [q, d] : report.sched_delay_cdf) {
      out << format_double(q) << ',' << d << '\n';
    }
  }
}

}  // namespace faasim
