#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "faasim/sim_time.hpp"

namespace faasim {

enum class EventKind : std::uint8_t {
  kArrival = 0,
  kInstanceReady,
  kInvocationComplete,
  kKeepAliveExpiry,
  kAutoscalerTick,
  kEmergencyReady,
  kEmergencyTeardown,
  kMetricsSample,
};

constexpr int kEventKindCount = 8;

const char* event_kind_name(EventKind k);

struct SimEvent {
  SimTime fire_at = 0;
  std::uint64_t seq = 0;  // assigned at scheduling; total order tiebreak
  EventKind kind = EventKind::kArrival;
  std::int64_t a = -1;  // kind-specific payload ids
  std::int64_t b = -1;
};

// Raised when the simulation itself is broken (scheduling in the past,
// missing handler, a handler error). Callers map this to exit code 4.
struct SimulationError : std::runtime_error {
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

struct RunResult {
  SimTime clock = 0;
  std::uint64_t events_dispatched = 0;
  std::uint64_t dispatch_hash = 0;  // order-sensitive digest of the dispatch log
};

// Deterministic discrete-event kernel: a virtual clock and one binary-heap
// event queue. Events fire in (fire_at, seq) order; seq increases in
// scheduling order, so simultaneous events dispatch in the order they were
// scheduled. Single-threaded by construction: simulated concurrency must not
// depend on host parallelism.
class Kernel {
 public:
  using Handler = std::function<void(const SimEvent&)>;
  using EventHandle = std::uint64_t;

  Kernel() : handlers_(kEventKindCount) {}

  SimTime now() const { return clock_; }

  void register_handler(EventKind kind, Handler h) {
    handlers_[static_cast<int>(kind)] = std::move(h);
  }

  EventHandle schedule(SimTime fire_at, EventKind kind, std::int64_t a = -1,
                       std::int64_t b = -1) {
    if (fire_at < clock_) {
      throw SimulationError("schedule in the past: event " +
                            std::string(event_kind_name(kind)) + " at t=" +
                            std::to_string(fire_at) + "us, clock=" +
                            std::to_string(clock_) + "us");
    }
    SimEvent ev{fire_at, next_seq_++, kind, a, b};
    heap_.push(ev);
    pending_.insert(ev.seq);
    return ev.seq;
  }

  // True iff the event had not yet fired (nor been cancelled).
  bool cancel(EventHandle handle) { return pending_.erase(handle) > 0; }

  // Dispatches every event with fire_at <= until. The clock ends at `until`
  // unless the queue ran dry, in which case it stays at the last dispatched
  // event.
  RunResult run(SimTime until) {
    bool dispatched_any = false;
    SimTime last_fire = 0;
    while (!heap_.empty() && heap_.top().fire_at <= until) {
      SimEvent ev = heap_.top();
      heap_.pop();
      if (pending_.erase(ev.seq) == 0) continue;  // cancelled
      clock_ = ev.fire_at;
      last_fire = ev.fire_at;
      dispatched_any = true;
      ++events_dispatched_;
      mix_hash(ev);
      const Handler& h = handlers_[static_cast<int>(ev.kind)];
      if (!h) {
        throw SimulationError(std::string("no handler registered for event kind ") +
                              event_kind_name(ev.kind));
      }
      try {
        h(ev);
      } catch (const SimulationError&) {
        throw;
      } catch (const std::exception& e) {
        throw SimulationError(std::string("handler for ") + event_kind_name(ev.kind) +
                              " failed at t=" + std::to_string(ev.fire_at) +
                              "us (seq " + std::to_string(ev.seq) + "): " + e.what());
      }
    }
    clock_ = (heap_.empty() && dispatched_any) ? last_fire : until;
    return RunResult{clock_, events_dispatched_, dispatch_hash_};
  }

  std::uint64_t events_dispatched() const { return events_dispatched_; }
  std::uint64_t dispatch_hash() const { return dispatch_hash_; }
  bool empty() const { return pending_.empty(); }

 private:
  struct Later {
    bool operator()(const SimEvent& x, const SimEvent& y) const {
      if (x.fire_at != y.fire_at) return x.fire_at > y.fire_at;
      return x.seq > y.seq;
    }
  };

  void mix_hash(const SimEvent& ev) {
    auto mix = [this](std::uint64_t v) {
      dispatch_hash_ ^= v + 0x9e3779b97f4a7c15ULL + (dispatch_hash_ << 6) +
                        (dispatch_hash_ >> 2);
    };
    mix(static_cast<std::uint64_t>(ev.fire_at));
    mix(ev.seq);
    mix(static_cast<std::uint64_t>(ev.kind));
    mix(static_cast<std::uint64_t>(ev.a));
    mix(static_cast<std::uint64_t>(ev.b));
  }

  SimTime clock_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t events_dispatched_ = 0;
  std::uint64_t dispatch_hash_ = 0;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::unordered_set<std::uint64_t> pending_;
  std::vector<Handler> handlers_;
};

}  // namespace faasim
