#include "faasim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace faasim {

std::vector<int> class_function_counts(const SyntheticWorkloadSpec& spec) {
  double wsum = 0.0;
  for (const auto& c : spec.classes) wsum += c.weight;
  if (spec.classes.empty() || std::abs(wsum - 1.0) > 1e-9) {
    throw std::invalid_argument("workload class weights must sum to 1");
  }
  std::vector<int> counts(spec.classes.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < spec.classes.size(); ++i) {
    double exact = spec.classes[i].weight * spec.function_count;
    counts[i] = static_cast<int>(std::floor(exact + 1e-9));
    assigned += counts[i];
    remainders.push_back({exact - counts[i], i});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (int k = 0; k < spec.function_count - assigned; ++k) {
    counts[remainders[k % remainders.size()].second]++;
  }
  return counts;
}

Workload generate_synthetic(const SyntheticWorkloadSpec& spec) {
  if (spec.horizon <= 0) throw std::invalid_argument("synthetic horizon must be > 0");
  std::vector<int> counts = class_function_counts(spec);

  Workload w;
  int fn_index = 0;
  for (std::size_t ci = 0; ci < spec.classes.size(); ++ci) {
    const WorkloadClass& cls = spec.classes[ci];
    for (int k = 0; k < counts[ci]; ++k, ++fn_index) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "fn-%04d", fn_index);
      std::string name(buf);
      Rng rng(spec.seed, "workload." + name);

      FunctionSpec f;
      f.id = name;
      f.memory_mb = std::max(1, static_cast<int>(std::llround(cls.memory_mb.sample(rng))));
      f.target_concurrency = cls.target_concurrency;
      std::int32_t fi = static_cast<std::int32_t>(w.functions.size());
      w.functions.push_back(f);

      // Per-function rate jitter: a median-1 lognormal multiplier on the
      // class IAT, spreading functions across a continuous rate spectrum.
      double iat_scale =
          cls.rate_spread_sigma > 0 ? rng.lognormal(0.0, cls.rate_spread_sigma) : 1.0;

      SimTime t = 0;
      while (true) {
        double gap = cls.iat.sample(rng) * iat_scale;
        if (gap < 1.0) gap = 1.0;
        t += static_cast<SimTime>(std::llround(gap));
        if (t > spec.horizon) break;
        int emit = 1;
        if (cls.burst_size > 1 && cls.burst_prob > 0 &&
            rng.next_double() < cls.burst_prob) {
          emit = cls.burst_size;
        }
        for (int j = 0; j < emit; ++j) {
          SimTime at = t + static_cast<SimTime>(j) * cls.burst_spacing_us;
          if (at > spec.horizon) break;
          TraceEvent e;
          e.function = fi;
          e.arrival = at;
          e.duration = std::max<SimTime>(1, cls.duration.sample_us(rng));
          w.events.push_back(e);
        }
      }
    }
  }

  // Stable: per-function generation order is chronological, so ties within a
  // function keep their emit order.
  std::stable_sort(w.events.begin(), w.events.end(),
                   [](const TraceEvent& x, const TraceEvent& y) {
                     if (x.arrival != y.arrival) return x.arrival < y.arrival;
                     return x.function < y.function;
                   });
  return w;
}

}  // namespace faasim
