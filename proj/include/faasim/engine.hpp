#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "faasim/cluster.hpp"
#include "faasim/concurrency.hpp"
#include "faasim/expedited.hpp"
#include "faasim/iat.hpp"
#include "faasim/kernel.hpp"
#include "faasim/metrics.hpp"
#include "faasim/policy.hpp"
#include "faasim/trace.hpp"

namespace faasim {

struct EngineConfig {
  ClusterConfig cluster;
  PolicyConfig policy;
  SimTime horizon = 3600 * kUsPerSec;
  SimTime warmup = 1200 * kUsPerSec;
  std::uint64_t seed = 1;
  SimTime sample_period = 1 * kUsPerSec;
  CpuCostModel cpu_costs;
  ExpeditedFaultConfig fault;
  std::size_t iat_window = 128;
  std::size_t iat_min_samples = 2;
  // Optional per-function node subsets allowed to host emergencies
  // (snapshot availability); empty = every node.
  std::unordered_map<std::int32_t, std::vector<int>> snapshot_mask;
  bool collect_event_log = false;
};

// One simulation run: wires the kernel, cluster model, policy and metrics
// together and owns all mutable state. Runs share nothing, so sweep points
// can execute on parallel threads.
class Engine {
 public:
  Engine(Workload workload, EngineConfig cfg);

  MetricsReport run();

  // Introspection (valid after run()).
  const Workload& workload() const { return workload_; }
  const std::deque<InstanceState>& instances() const { return instances_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  const std::vector<WorkletState>& worklets() const { return worklets_; }
  const FastPlacement& fast_placement() const { return placement_; }
  const IatTracker& iat_tracker() const { return iat_; }
  const std::vector<MemorySample>& samples() const { return samples_; }
  const std::vector<std::string>& event_log() const { return event_log_; }
  const std::vector<bool>& cold_flags() const { return cold_; }
  const std::vector<bool>& reported_flags() const { return reported_; }
  std::int64_t creations_regular() const { return creations_regular_total_; }
  std::int64_t creations_emergency() const { return creations_emergency_total_; }
  std::int64_t deferred_creations() const { return deferred_total_; }
  const Kernel& kernel() const { return kernel_; }

  // Routing decision for one invocation under the configured policy; pure
  // with respect to the decision (no state mutation).
  RoutingDecision route(std::int32_t fn, SimTime t) const;

  std::string instance_label(std::int64_t id) const;

 private:
  struct FunctionRuntime {
    std::deque<std::int64_t> central_queue;
    std::vector<std::int64_t> instances;  // alive regular instances, id order
    int reported_in_flight = 0;
    ConcurrencySeries series;
    std::vector<double> lr_ticks;  // per-tick mean concurrency (LR policy)
    LrModel lr_model;
    bool lr_degenerate = false;
    int deferred = 0;  // creation requests waiting for node memory

    explicit FunctionRuntime(SimTime window) : series(window) {}
  };

  struct DeferredCreation {
    std::int32_t fn;
    std::int64_t bound_invocation;  // -1 unless sync track
  };

  // Event handlers.
  void on_arrival(const SimEvent& ev);
  void on_instance_ready(const SimEvent& ev);
  void on_invocation_complete(const SimEvent& ev);
  void on_keepalive_expiry(const SimEvent& ev);
  void on_autoscaler_tick(const SimEvent& ev);
  void on_emergency_ready(const SimEvent& ev);
  void on_emergency_teardown(const SimEvent& ev);
  void on_metrics_sample(const SimEvent& ev);

  // Cluster operations.
  std::int64_t admit_regular(std::int32_t fn, SimTime t, std::int64_t bound_inv);
  void spawn_emergency(std::int32_t fn, std::int64_t inv, SimTime t, int attempt);
  void terminate_regular(InstanceState& inst, SimTime t, const char* reason);
  void schedule_expiry(InstanceState& inst, SimTime t);

  // Invocation flow.
  void assign_to_instance(InstanceState& inst, std::int64_t inv, SimTime t, bool cold);
  void start_exec(InstanceState& inst, std::int64_t inv, SimTime t, bool cold);
  void drain_central_queue(InstanceState& inst, SimTime t);
  void mark_reported(std::int64_t inv, SimTime t, bool reported);
  void finish_reported(std::int64_t inv, SimTime t);

  // Autoscaling.
  void reconcile(std::int32_t fn, std::int64_t desired, SimTime t);
  std::int64_t desired_count(std::int32_t fn, SimTime t);
  std::int64_t current_nonterminated(std::int32_t fn) const;

  int pick_worst_fit_node(int memory_mb) const;
  int pick_emergency_node(std::int32_t fn);

  void log(SimTime t, const std::string& line);
  void verify_sample_invariants(SimTime t, const MemorySample& s) const;

  Workload workload_;
  EngineConfig cfg_;
  Kernel kernel_;
  Rng delay_rng_;
  Rng routing_rng_;
  Rng fault_rng_;
  IatTracker iat_;

  std::vector<FunctionRuntime> fns_;
  std::vector<NodeState> nodes_;
  std::deque<InstanceState> instances_;  // deque: stable refs across creation
  std::vector<std::int64_t> alive_instances_;
  std::vector<WorkletState> worklets_;
  FastPlacement placement_;
  std::deque<DeferredCreation> deferred_;

  std::vector<bool> reported_;
  std::vector<bool> cold_;
  std::vector<int> fault_attempt_;  // per instance

  std::vector<MemorySample> samples_;
  std::vector<std::string> event_log_;

  std::int64_t regular_ordinal_ = 0;
  std::int64_t emergency_ordinal_ = 0;
  std::int64_t creations_regular_total_ = 0;
  std::int64_t creations_emergency_total_ = 0;
  std::int64_t creations_regular_window_ = 0;    // since last sample
  std::int64_t creations_emergency_window_ = 0;
  std::int64_t deferred_total_ = 0;
  std::int64_t ticks_post_warmup_ = 0;
  bool lr_fitted_ = false;
};

// Debug/golden artifacts: the state-changing event log (periodic ticks and
// samples excluded) and one row per invocation with its simulated outcome.
void write_event_log_csv(const Engine& eng, const std::string& path);
void write_outcomes_csv(const Engine& eng, const std::string& path);

}  // namespace faasim
