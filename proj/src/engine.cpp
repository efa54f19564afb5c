#include "faasim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace faasim {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::kArrival: return "Arrival";
    case EventKind::kInstanceReady: return "InstanceReady";
    case EventKind::kInvocationComplete: return "InvocationComplete";
    case EventKind::kKeepAliveExpiry: return "KeepAliveExpiry";
    case EventKind::kAutoscalerTick: return "AutoscalerTick";
    case EventKind::kEmergencyReady: return "EmergencyReady";
    case EventKind::kEmergencyTeardown: return "EmergencyTeardown";
    case EventKind::kMetricsSample: return "MetricsSample";
  }
  return "?";
}

Engine::Engine(Workload workload, EngineConfig cfg)
    : workload_(std::move(workload)),
      cfg_(std::move(cfg)),
      delay_rng_(cfg_.seed, "delay"),
      routing_rng_(cfg_.seed, "routing"),
      fault_rng_(cfg_.seed, "expedited.fault"),
      iat_(workload_.functions.size(), cfg_.iat_window, cfg_.iat_min_samples),
      placement_(cfg_.cluster.node_count) {
  if (cfg_.warmup >= cfg_.horizon) {
    throw std::invalid_argument("warmup must be below the horizon");
  }
  SimTime window = std::max(cfg_.policy.window, cfg_.policy.tick);
  fns_.reserve(workload_.functions.size());
  for (std::size_t i = 0; i < workload_.functions.size(); ++i) fns_.emplace_back(window);
  nodes_.resize(cfg_.cluster.node_count);
  for (int n = 0; n < cfg_.cluster.node_count; ++n) {
    nodes_[n].id = n;
    nodes_[n].cpu_millicores = cfg_.cluster.cpu_millicores;
    nodes_[n].memory_mb = cfg_.cluster.memory_mb;
  }
  worklets_.resize(cfg_.cluster.node_count);
  reported_.assign(workload_.events.size(), false);
  cold_.assign(workload_.events.size(), false);

  kernel_.register_handler(EventKind::kArrival, [this](const SimEvent& e) { on_arrival(e); });
  kernel_.register_handler(EventKind::kInstanceReady,
                           [this](const SimEvent& e) { on_instance_ready(e); });
  kernel_.register_handler(EventKind::kInvocationComplete,
                           [this](const SimEvent& e) { on_invocation_complete(e); });
  kernel_.register_handler(EventKind::kKeepAliveExpiry,
                           [this](const SimEvent& e) { on_keepalive_expiry(e); });
  kernel_.register_handler(EventKind::kAutoscalerTick,
                           [this](const SimEvent& e) { on_autoscaler_tick(e); });
  kernel_.register_handler(EventKind::kEmergencyReady,
                           [this](const SimEvent& e) { on_emergency_ready(e); });
  kernel_.register_handler(EventKind::kEmergencyTeardown,
                           [this](const SimEvent& e) { on_emergency_teardown(e); });
  kernel_.register_handler(EventKind::kMetricsSample,
                           [this](const SimEvent& e) { on_metrics_sample(e); });
}

std::string Engine::instance_label(std::int64_t id) const {
  const InstanceState& inst = instances_[id];
  return (inst.kind == InstanceKind::kEmergency ? "e" : "r") +
         std::to_string(inst.display_ordinal);
}

void Engine::log(SimTime t, const std::string& line) {
  if (cfg_.collect_event_log) {
    event_log_.push_back(std::to_string(t) + ',' + line);
  }
}

MetricsReport Engine::run() {
  for (std::size_t i = 0; i < workload_.events.size(); ++i) {
    const TraceEvent& e = workload_.events[i];
    if (e.arrival > cfg_.horizon) continue;
    kernel_.schedule(e.arrival, EventKind::kArrival, static_cast<std::int64_t>(i));
  }
  if (cfg_.policy.tick <= cfg_.horizon) {
    kernel_.schedule(cfg_.policy.tick, EventKind::kAutoscalerTick);
  }
  if (cfg_.sample_period <= cfg_.horizon) {
    kernel_.schedule(cfg_.sample_period, EventKind::kMetricsSample);
  }
  RunResult rr = kernel_.run(cfg_.horizon);

  AggregateInputs in;
  in.workload = &workload_;
  in.warmup = cfg_.warmup;
  in.horizon = cfg_.horizon;
  in.cold_start.assign(cold_.begin(), cold_.end());
  in.reported.assign(reported_.begin(), reported_.end());
  in.samples = samples_;
  in.creations_regular_total = creations_regular_total_;
  in.creations_emergency_total = creations_emergency_total_;
  in.deferred_creations = deferred_total_;
  in.ticks_post_warmup = ticks_post_warmup_;
  in.lr_inference = cfg_.policy.kind == PolicyKind::kPredictiveLr;
  in.cpu_costs = cfg_.cpu_costs;
  in.event_count = rr.events_dispatched;
  in.dispatch_hash = rr.dispatch_hash;
  return aggregate(in);
}

RoutingDecision Engine::route(std::int32_t fn, SimTime /*t*/) const {
  const FunctionRuntime& fr = fns_[fn];
  const int cap = workload_.functions[fn].target_concurrency + cfg_.cluster.queue_cap;
  std::int64_t best = -1;
  int best_load = std::numeric_limits<int>::max();
  for (std::int64_t id : fr.instances) {
    const InstanceState& inst = instances_[id];
    if (inst.phase != InstancePhase::kIdle && inst.phase != InstancePhase::kBusy) continue;
    int load = inst.in_flight + static_cast<int>(inst.queue.size());
    if (load >= cap) continue;  // per-instance queue full
    if (load < best_load) {
      best_load = load;
      best = id;
    }
  }
  RoutingDecision d;
  if (best >= 0) {
    d.target = RoutingDecision::Target::kExistingInstance;
    d.instance = best;
    d.reported = true;
    return d;
  }
  if (cfg_.policy.kind == PolicyKind::kDualTrack) {
    d.target = RoutingDecision::Target::kExpedited;
    d.reported = filter_reports(iat_, fn, cfg_.policy);
    return d;
  }
  d.target = RoutingDecision::Target::kWaitInCentralQueue;
  d.reported = true;
  return d;
}

void Engine::mark_reported(std::int64_t inv, SimTime t, bool reported) {
  reported_[inv] = reported;
  if (reported) {
    FunctionRuntime& fr = fns_[workload_.events[inv].function];
    fr.reported_in_flight++;
    fr.series.step(t, +1);
  }
}

void Engine::finish_reported(std::int64_t inv, SimTime t) {
  if (!reported_[inv]) return;
  FunctionRuntime& fr = fns_[workload_.events[inv].function];
  fr.reported_in_flight--;
  fr.series.step(t, -1);
}

void Engine::on_arrival(const SimEvent& ev) {
  const std::int64_t inv = ev.a;
  TraceEvent& e = workload_.events[inv];
  const std::int32_t fn = e.function;
  const SimTime t = ev.fire_at;

  iat_.record_arrival(fn, t);
  log(t, "arrival,i" + std::to_string(inv) + ',' + workload_.functions[fn].id + ',');

  RoutingDecision d = route(fn, t);
  switch (d.target) {
    case RoutingDecision::Target::kExistingInstance:
      mark_reported(inv, t, true);
      assign_to_instance(instances_[d.instance], inv, t, /*cold=*/false);
      break;
    case RoutingDecision::Target::kWaitInCentralQueue:
      mark_reported(inv, t, true);
      if (cfg_.policy.kind == PolicyKind::kSync) {
        // Scale on miss: one creation per miss, invocation bound to it.
        admit_regular(fn, t, inv);
      } else {
        fns_[fn].central_queue.push_back(inv);
      }
      break;
    case RoutingDecision::Target::kExpedited:
      mark_reported(inv, t, d.reported);
      spawn_emergency(fn, inv, t, /*attempt=*/0);
      break;
  }
}

void Engine::assign_to_instance(InstanceState& inst, std::int64_t inv, SimTime t,
                                bool cold) {
  if (inst.in_flight < workload_.functions[inst.function].target_concurrency) {
    start_exec(inst, inv, t, cold);
  } else {
    inst.queue.push_back(inv);
  }
}

void Engine::start_exec(InstanceState& inst, std::int64_t inv, SimTime t, bool cold) {
  if (inst.expiry_pending) {
    kernel_.cancel(inst.expiry_handle);
    inst.expiry_pending = false;
  }
  inst.phase = InstancePhase::kBusy;
  inst.in_flight++;
  TraceEvent& e = workload_.events[inv];
  e.exec_start = t + cfg_.cluster.delays.routing.sample_us(routing_rng_);
  e.instance = inst.id;
  e.track = inst.kind == InstanceKind::kEmergency ? Track::kEmergency : Track::kRegular;
  cold_[inv] = cold || inst.kind == InstanceKind::kEmergency;
  log(t, "exec_start,i" + std::to_string(inv) + ',' + instance_label(inst.id) + ',');
  kernel_.schedule(e.exec_start + e.duration, EventKind::kInvocationComplete, inv, inst.id);
}

void Engine::drain_central_queue(InstanceState& inst, SimTime t) {
  if (!cfg_.policy.uses_central_queue()) return;
  FunctionRuntime& fr = fns_[inst.function];
  const int cap = workload_.functions[inst.function].target_concurrency +
                  cfg_.cluster.queue_cap;
  const bool at_ready = inst.served == 0 && inst.in_flight == 0;
  while (!fr.central_queue.empty() &&
         inst.in_flight + static_cast<int>(inst.queue.size()) < cap) {
    std::int64_t inv = fr.central_queue.front();
    fr.central_queue.pop_front();
    // Waiting on a fresh instance's readiness is a cold start; waiting out
    // another invocation on a warm instance is not.
    assign_to_instance(inst, inv, t, /*cold=*/at_ready);
  }
}

void Engine::on_instance_ready(const SimEvent& ev) {
  InstanceState& inst = instances_[ev.a];
  const SimTime t = ev.fire_at;
  inst.phase = InstancePhase::kIdle;
  inst.ready_at = t;
  inst.last_used_at = t;
  log(t, "ready," + instance_label(inst.id) + ",,");
  if (inst.bound_invocation >= 0) {
    std::int64_t inv = inst.bound_invocation;
    inst.bound_invocation = -1;
    start_exec(inst, inv, t, /*cold=*/true);
  }
  drain_central_queue(inst, t);
  if (inst.in_flight == 0 && inst.queue.empty()) schedule_expiry(inst, t);
}

void Engine::on_invocation_complete(const SimEvent& ev) {
  const std::int64_t inv = ev.a;
  InstanceState& inst = instances_[ev.b];
  const SimTime t = ev.fire_at;
  TraceEvent& e = workload_.events[inv];
  e.completion = t;
  inst.in_flight--;
  inst.served++;
  inst.last_used_at = t;
  finish_reported(inv, t);
  log(t, "complete,i" + std::to_string(inv) + ',' + instance_label(inst.id) + ',');

  if (inst.kind == InstanceKind::kEmergency) {
    // Single-use: dispose as soon as the bound invocation finishes.
    kernel_.schedule(t, EventKind::kEmergencyTeardown, inst.id);
    return;
  }
  if (!inst.queue.empty()) {
    std::int64_t next = inst.queue.front();
    inst.queue.pop_front();
    start_exec(inst, next, t, /*cold=*/false);
  }
  drain_central_queue(inst, t);
  if (inst.in_flight == 0 && inst.queue.empty()) {
    inst.phase = InstancePhase::kIdle;
    schedule_expiry(inst, t);
  }
}

void Engine::schedule_expiry(InstanceState& inst, SimTime t) {
  if (inst.expiry_pending) kernel_.cancel(inst.expiry_handle);
  inst.expiry_handle =
      kernel_.schedule(t + cfg_.policy.keep_alive, EventKind::kKeepAliveExpiry, inst.id);
  inst.expiry_pending = true;
}

void Engine::on_keepalive_expiry(const SimEvent& ev) {
  InstanceState& inst = instances_[ev.a];
  if (!inst.alive()) return;
  inst.expiry_pending = false;
  // Stale events (instance reused since scheduling) are no-ops.
  if (inst.phase == InstancePhase::kIdle &&
      inst.last_used_at + cfg_.policy.keep_alive <= ev.fire_at) {
    terminate_regular(inst, ev.fire_at, "expire");
  }
}

void Engine::terminate_regular(InstanceState& inst, SimTime t, const char* reason) {
  NodeState& node = nodes_[inst.node];
  node.allocated_mb -= workload_.functions[inst.function].memory_mb;
  node.resident--;
  if (inst.expiry_pending) {
    kernel_.cancel(inst.expiry_handle);
    inst.expiry_pending = false;
  }
  inst.phase = InstancePhase::kTerminated;
  FunctionRuntime& fr = fns_[inst.function];
  fr.instances.erase(std::find(fr.instances.begin(), fr.instances.end(), inst.id));
  alive_instances_.erase(
      std::find(alive_instances_.begin(), alive_instances_.end(), inst.id));
  log(t, std::string(reason) + ',' + instance_label(inst.id) + ",,");
}

int Engine::pick_worst_fit_node(int memory_mb) const {
  int best = -1;
  std::int64_t best_free = -1;
  for (const NodeState& n : nodes_) {
    std::int64_t free = n.free_mb();
    if (free >= memory_mb && free > best_free) {
      best_free = free;
      best = n.id;
    }
  }
  return best;
}

std::int64_t Engine::admit_regular(std::int32_t fn, SimTime t, std::int64_t bound_inv) {
  const int mem = workload_.functions[fn].memory_mb;
  int node = pick_worst_fit_node(mem);
  if (node < 0) {
    deferred_.push_back({fn, bound_inv});
    fns_[fn].deferred++;
    deferred_total_++;
    log(t, "defer_regular," + workload_.functions[fn].id + ",,");
    return -1;
  }
  const std::int64_t id = static_cast<std::int64_t>(instances_.size());
  instances_.emplace_back();
  fault_attempt_.push_back(0);
  InstanceState& inst = instances_.back();
  inst.id = id;
  inst.display_ordinal = regular_ordinal_++;
  inst.function = fn;
  inst.node = node;
  inst.kind = InstanceKind::kRegular;
  inst.phase = InstancePhase::kCreating;
  inst.requested_at = t;
  inst.bound_invocation = bound_inv;
  nodes_[node].allocated_mb += mem;
  nodes_[node].resident++;
  fns_[fn].instances.push_back(id);
  alive_instances_.push_back(id);
  creations_regular_total_++;
  creations_regular_window_++;

  SimTime delay = cfg_.policy.kind == PolicyKind::kFastAsync
                      ? cfg_.policy.fast_async_delay
                      : cfg_.cluster.delays.sample_regular(delay_rng_);
  kernel_.schedule(t + delay, EventKind::kInstanceReady, id);
  log(t, "create_regular," + instance_label(id) + ',' + workload_.functions[fn].id +
             ",n" + std::to_string(node));
  return id;
}

int Engine::pick_emergency_node(std::int32_t fn) {
  auto it = cfg_.snapshot_mask.find(fn);
  if (it == cfg_.snapshot_mask.end()) return placement_.place();
  for (int tries = 0; tries < cfg_.cluster.node_count; ++tries) {
    int node = placement_.place();
    if (std::find(it->second.begin(), it->second.end(), node) != it->second.end()) {
      return node;
    }
    placement_.on_teardown(node);  // skipped probe holds no instance
  }
  throw SimulationError("snapshot mask excludes every node for function " +
                        workload_.functions[fn].id);
}

void Engine::spawn_emergency(std::int32_t fn, std::int64_t inv, SimTime t, int attempt) {
  const int mem = workload_.functions[fn].memory_mb;
  const int node = pick_emergency_node(fn);
  const std::int64_t id = static_cast<std::int64_t>(instances_.size());
  instances_.emplace_back();
  fault_attempt_.push_back(attempt);
  InstanceState& inst = instances_.back();
  inst.id = id;
  inst.display_ordinal = emergency_ordinal_++;
  inst.function = fn;
  inst.node = node;
  inst.kind = InstanceKind::kEmergency;
  inst.phase = InstancePhase::kCreating;
  inst.requested_at = t;
  inst.bound_invocation = inv;
  worklets_[node].created++;
  worklets_[node].margin_mb += mem;
  nodes_[node].margin_mb += mem;
  alive_instances_.push_back(id);
  creations_emergency_total_++;
  creations_emergency_window_++;

  bool eligible = cfg_.fault.node_mask.empty() ||
                  (node < static_cast<int>(cfg_.fault.node_mask.size()) &&
                   cfg_.fault.node_mask[node]);
  if (cfg_.fault.enabled && eligible && fault_rng_.next_double() < cfg_.fault.prob) {
    inst.failed = true;
    kernel_.schedule(t + cfg_.fault.timeout, EventKind::kEmergencyReady, id);
  } else {
    kernel_.schedule(t + cfg_.cluster.delays.emergency.sample_us(delay_rng_),
                     EventKind::kEmergencyReady, id);
  }
  log(t, "create_emergency," + instance_label(id) + ',' + workload_.functions[fn].id +
             ",n" + std::to_string(node));
}

void Engine::on_emergency_ready(const SimEvent& ev) {
  InstanceState& inst = instances_[ev.a];
  const SimTime t = ev.fire_at;
  if (inst.failed) {
    const std::int32_t fn = inst.function;
    const std::int64_t inv = inst.bound_invocation;
    const int attempt = fault_attempt_[inst.id];
    const int mem = workload_.functions[fn].memory_mb;
    worklets_[inst.node].completed++;
    worklets_[inst.node].margin_mb -= mem;
    nodes_[inst.node].margin_mb -= mem;
    placement_.on_teardown(inst.node);
    inst.phase = InstancePhase::kTerminated;
    alive_instances_.erase(
        std::find(alive_instances_.begin(), alive_instances_.end(), inst.id));
    log(t, "fault," + instance_label(inst.id) + ",n" + std::to_string(inst.node) + ',');
    if (attempt == 0) {
      spawn_emergency(fn, inv, t, 1);  // one retry on the next round-robin node
    } else {
      workload_.events[inv].track = Track::kRejected;
      finish_reported(inv, t);
      log(t, "reject,i" + std::to_string(inv) + ",,");
    }
    return;
  }
  inst.ready_at = t;
  inst.last_used_at = t;
  log(t, "ready," + instance_label(inst.id) + ",,");
  std::int64_t inv = inst.bound_invocation;
  inst.bound_invocation = -1;
  start_exec(inst, inv, t, /*cold=*/true);
}

void Engine::on_emergency_teardown(const SimEvent& ev) {
  InstanceState& inst = instances_[ev.a];
  const int mem = workload_.functions[inst.function].memory_mb;
  worklets_[inst.node].completed++;
  worklets_[inst.node].margin_mb -= mem;
  nodes_[inst.node].margin_mb -= mem;
  placement_.on_teardown(inst.node);
  inst.phase = InstancePhase::kTerminated;
  alive_instances_.erase(
      std::find(alive_instances_.begin(), alive_instances_.end(), inst.id));
  log(ev.fire_at, "teardown," + instance_label(inst.id) + ",,");
}

std::int64_t Engine::current_nonterminated(std::int32_t fn) const {
  return static_cast<std::int64_t>(fns_[fn].instances.size()) + fns_[fn].deferred;
}

std::int64_t Engine::desired_count(std::int32_t fn, SimTime t) {
  FunctionRuntime& fr = fns_[fn];
  const int target = workload_.functions[fn].target_concurrency;
  const std::int64_t current = current_nonterminated(fn);

  if (cfg_.policy.kind == PolicyKind::kPredictiveLr && lr_fitted_) {
    // Scale from zero reacts to the live sample; everything else follows the
    // one-step-ahead prediction.
    if (current == 0) return instantaneous_desired(fr.reported_in_flight, target);
    double pred;
    if (fr.lr_degenerate || !fr.lr_model.fitted()) {
      pred = fr.lr_ticks.empty() ? 0.0 : fr.lr_ticks.back();
    } else {
      std::vector<double> recent(cfg_.policy.lr.lags, 0.0);
      for (int j = 0; j < cfg_.policy.lr.lags; ++j) {
        std::size_t idx = fr.lr_ticks.size() - 1 - j;
        if (idx < fr.lr_ticks.size()) recent[j] = fr.lr_ticks[idx];
      }
      pred = fr.lr_model.predict(recent);
    }
    if (pred <= 0.0) return 0;
    return static_cast<std::int64_t>(std::ceil(pred / target));
  }

  if (current == 0) return instantaneous_desired(fr.reported_in_flight, target);
  return window_desired(fr.series.window_integral(t), fr.series.window(), target);
}

void Engine::reconcile(std::int32_t fn, std::int64_t desired, SimTime t) {
  std::int64_t current = current_nonterminated(fn);
  if (desired > current) {
    for (std::int64_t k = current; k < desired; ++k) admit_regular(fn, t, -1);
    return;
  }
  if (desired >= current) return;
  // Scale down: only Idle instances are removable, newest-idle first. Busy
  // and Creating instances are never reclaimed here.
  std::vector<std::int64_t> idle;
  for (std::int64_t id : fns_[fn].instances) {
    if (instances_[id].phase == InstancePhase::kIdle) idle.push_back(id);
  }
  std::sort(idle.begin(), idle.end(), [this](std::int64_t x, std::int64_t y) {
    const InstanceState& a = instances_[x];
    const InstanceState& b = instances_[y];
    if (a.last_used_at != b.last_used_at) return a.last_used_at > b.last_used_at;
    return a.id > b.id;
  });
  std::int64_t excess = current - desired;
  for (std::int64_t id : idle) {
    if (excess-- <= 0) break;
    terminate_regular(instances_[id], t, "scale_down");
  }
}

void Engine::on_autoscaler_tick(const SimEvent& ev) {
  const SimTime t = ev.fire_at;
  if (t > cfg_.warmup) ticks_post_warmup_++;

  // Deferred creations retry once per tick.
  if (!deferred_.empty()) {
    std::deque<DeferredCreation> retry;
    retry.swap(deferred_);
    for (const DeferredCreation& d : retry) {
      fns_[d.fn].deferred--;
      admit_regular(d.fn, t, d.bound_invocation);
    }
  }

  const PolicyKind kind = cfg_.policy.kind;
  if (kind == PolicyKind::kPredictiveLr) {
    for (std::size_t fn = 0; fn < fns_.size(); ++fn) {
      FunctionRuntime& fr = fns_[fn];
      fr.lr_ticks.push_back(
          static_cast<double>(fr.series.integral_over(t - cfg_.policy.tick, t)) /
          static_cast<double>(cfg_.policy.tick));
    }
    if (!lr_fitted_ && t >= cfg_.policy.lr.training) {
      for (std::size_t fn = 0; fn < fns_.size(); ++fn) {
        FunctionRuntime& fr = fns_[fn];
        fr.lr_degenerate = !fr.lr_model.fit(fr.lr_ticks, cfg_.policy.lr.lags);
      }
      lr_fitted_ = true;
    }
  }
  if (kind != PolicyKind::kSync) {
    for (std::size_t fn = 0; fn < fns_.size(); ++fn) {
      reconcile(static_cast<std::int32_t>(fn),
                desired_count(static_cast<std::int32_t>(fn), t), t);
    }
  }

  if (t + cfg_.policy.tick <= cfg_.horizon) {
    kernel_.schedule(t + cfg_.policy.tick, EventKind::kAutoscalerTick);
  }
}

void Engine::verify_sample_invariants(SimTime t, const MemorySample& s) const {
  std::int64_t allocated = 0, margin = 0;
  for (const NodeState& n : nodes_) {
    allocated += n.allocated_mb;
    margin += n.margin_mb;
    if (n.allocated_mb < 0 || n.allocated_mb > n.memory_mb) {
      throw SimulationError("node " + std::to_string(n.id) +
                            " regular allocation out of range at t=" + std::to_string(t));
    }
    if (worklets_[n.id].margin_mb != n.margin_mb) {
      throw SimulationError("worklet/node margin meters disagree at t=" +
                            std::to_string(t));
    }
  }
  if (s.busy_mb + s.idle_mb != allocated || s.emergency_mb != margin) {
    throw SimulationError("memory accounting does not close at t=" + std::to_string(t));
  }
}

void write_event_log_csv(const Engine& eng, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t_us,event,a,b,c\n";
  for (const std::string& line : eng.event_log()) out << line << '\n';
}

void write_outcomes_csv(const Engine& eng, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "invocation,function_id,arrival_us,duration_us,exec_start_us,completion_us,"
         "track,instance,sched_delay_us,slowdown,cold,reported\n";
  const Workload& w = eng.workload();
  for (std::size_t i = 0; i < w.events.size(); ++i) {
    const TraceEvent& e = w.events[i];
    out << 'i' << i << ',' << w.functions[e.function].id << ',' << e.arrival << ','
        << e.duration << ',';
    if (e.served()) {
      out << e.exec_start << ',' << e.completion << ',' << track_name(e.track) << ','
          << eng.instance_label(e.instance) << ',' << e.scheduling_delay() << ','
          << format_double(e.slowdown());
    } else {
      out << ",," << (e.track == Track::kRejected ? "rejected" : "unserved") << ",,,";
    }
    out << ',' << (eng.cold_flags()[i] ? 1 : 0) << ',' << (eng.reported_flags()[i] ? 1 : 0)
        << '\n';
  }
}

void Engine::on_metrics_sample(const SimEvent& ev) {
  const SimTime t = ev.fire_at;
  MemorySample s;
  s.t = t;
  for (std::int64_t id : alive_instances_) {
    const InstanceState& inst = instances_[id];
    const int mem = workload_.functions[inst.function].memory_mb;
    if (inst.kind == InstanceKind::kEmergency) {
      s.emergency_mb += mem;
      if (inst.in_flight > 0) s.busy_total_mb += mem;
    } else if (inst.in_flight > 0) {
      s.busy_mb += mem;
      s.busy_total_mb += mem;
    } else {
      s.idle_mb += mem;
    }
  }
  s.creations_regular = creations_regular_window_;
  s.creations_emergency = creations_emergency_window_;
  creations_regular_window_ = 0;
  creations_emergency_window_ = 0;
  verify_sample_invariants(t, s);
  samples_.push_back(s);
  if (t + cfg_.sample_period <= cfg_.horizon) {
    kernel_.schedule(t + cfg_.sample_period, EventKind::kMetricsSample);
  }
}

}  // namespace faasim
