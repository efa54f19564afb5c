#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "faasim/rng.hpp"
#include "faasim/sim_time.hpp"

namespace faasim {

enum class InstanceKind : std::uint8_t { kRegular = 0, kEmergency };
enum class InstancePhase : std::uint8_t { kCreating = 0, kIdle, kBusy, kTerminated };

struct NodeState {
  int id = 0;
  std::int64_t cpu_millicores = 0;
  std::int64_t memory_mb = 0;
  std::int64_t allocated_mb = 0;  // regular instances, charged from creation
  std::int64_t margin_mb = 0;     // emergency instances, never refused
  int resident = 0;

  std::int64_t free_mb() const { return memory_mb - allocated_mb; }
};

struct InstanceState {
  std::int64_t id = -1;
  std::int64_t display_ordinal = -1;  // per-kind counter, for logs
  std::int32_t function = -1;
  int node = -1;
  InstanceKind kind = InstanceKind::kRegular;
  InstancePhase phase = InstancePhase::kCreating;
  SimTime requested_at = 0;
  SimTime ready_at = -1;
  SimTime last_used_at = 0;
  int in_flight = 0;
  std::deque<std::int64_t> queue;  // pending invocation ids, bounded
  std::int64_t bound_invocation = -1;  // sync track: invocation awaiting this creation
  std::uint64_t expiry_handle = 0;
  bool expiry_pending = false;
  bool failed = false;  // fault-injected emergency spawn, detected at timeout
  std::uint64_t served = 0;  // completed invocations over the lifetime

  bool alive() const { return phase != InstancePhase::kTerminated; }
};

// Instance creation and routing latency model. Regular creation time is the
// sum of component samples in breakdown mode, or one aggregate draw.
// Defaults follow the Knative-style breakdown: readiness probe 500ms,
// namespace/networking 400ms, proxy+sandbox 250ms, runtime init 100ms; the
// aggregate alternative is a lognormal clamped to 1-3s. Emergency creation
// defaults to a constant 150ms.
struct DelayModel {
  enum class Mode { kBreakdown, kAggregate };

  Mode mode = Mode::kBreakdown;
  std::vector<std::pair<std::string, DistSpec>> regular_components = {
      {"readiness_probe", DistSpec::constant(500.0 * kUsPerMs)},
      {"namespace_network", DistSpec::constant(400.0 * kUsPerMs)},
      {"proxy_sandbox", DistSpec::constant(250.0 * kUsPerMs)},
      {"runtime_init", DistSpec::constant(100.0 * kUsPerMs)},
  };
  DistSpec aggregate = []() {
    DistSpec d = DistSpec::lognormal(1.0 * kUsPerSec, 0.35);
    d.clamp_lo = 1.0 * kUsPerSec;
    d.clamp_hi = 3.0 * kUsPerSec;
    return d;
  }();
  DistSpec emergency = DistSpec::constant(150.0 * kUsPerMs);
  DistSpec routing = DistSpec::constant(0);

  SimTime sample_regular(Rng& rng) const {
    if (mode == Mode::kAggregate) return std::max<SimTime>(0, aggregate.sample_us(rng));
    SimTime total = 0;
    for (const auto& [name, dist] : regular_components) {
      total += std::max<SimTime>(0, dist.sample_us(rng));
    }
    return total;
  }
  double regular_analytic_mean_us() const {
    if (mode == Mode::kAggregate) return aggregate.analytic_mean();
    double total = 0;
    for (const auto& [name, dist] : regular_components) total += dist.analytic_mean();
    return total;
  }
};

struct ClusterConfig {
  int node_count = 8;
  std::int64_t cpu_millicores = 40'000;
  std::int64_t memory_mb = 65'536;
  int queue_cap = 0;  // per-instance queue beyond target_concurrency
  DelayModel delays;
};

}  // namespace faasim
