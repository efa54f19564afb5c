#include "doctest.h"

#include <vector>

#include "faasim/kernel.hpp"
#include "faasim/rng.hpp"

using namespace faasim;

namespace {

struct LogEntry {
  SimTime t;
  std::int64_t a;
};

// Runs a kernel over the given (time, id) schedule and returns the dispatch
// order. Used as the replay harness for the determinism checks.
std::vector<LogEntry> dispatch_order(const std::vector<std::pair<SimTime, std::int64_t>>& evs,
                                     SimTime until) {
  Kernel k;
  std::vector<LogEntry> log;
  k.register_handler(EventKind::kArrival,
                     [&](const SimEvent& e) { log.push_back({e.fire_at, e.a}); });
  for (const auto& [t, id] : evs) k.schedule(t, EventKind::kArrival, id);
  k.run(until);
  return log;
}

}  // namespace

TEST_CASE("events at the same time dispatch in scheduling order") {
  auto log = dispatch_order({{0, 1}, {0, 2}, {0, 3}}, 10);
  REQUIRE(log.size() == 3);
  CHECK(log[0].a == 1);
  CHECK(log[1].a == 2);
  CHECK(log[2].a == 3);
}

TEST_CASE("queue orders by fire time") {
  auto log = dispatch_order({{5, 5}, {3, 3}}, 10);
  REQUIRE(log.size() == 2);
  CHECK(log[0].t == 3);
  CHECK(log[1].t == 5);
}

TEST_CASE("10k random events replay identically") {
  Rng rng(42, "test.times");
  std::vector<std::pair<SimTime, std::int64_t>> evs;
  for (int i = 0; i < 10'000; ++i) {
    evs.push_back({static_cast<SimTime>(rng.next_below(1'000'000)), i});
  }
  auto a = dispatch_order(evs, 1'000'000);
  auto b = dispatch_order(evs, 1'000'000);
  REQUIRE(a.size() == 10'000);
  REQUIRE(b.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t == b[i].t);
    CHECK(a[i].a == b[i].a);
  }

  Kernel k1, k2;
  k1.register_handler(EventKind::kArrival, [](const SimEvent&) {});
  k2.register_handler(EventKind::kArrival, [](const SimEvent&) {});
  for (const auto& [t, id] : evs) {
    k1.schedule(t, EventKind::kArrival, id);
    k2.schedule(t, EventKind::kArrival, id);
  }
  CHECK(k1.run(1'000'000).dispatch_hash == k2.run(1'000'000).dispatch_hash);
}

TEST_CASE("cancel suppresses an unfired event and reports the state") {
  Kernel k;
  int fired = 0;
  k.register_handler(EventKind::kArrival, [&](const SimEvent&) { ++fired; });
  auto h1 = k.schedule(10, EventKind::kArrival, 1);
  auto h2 = k.schedule(20, EventKind::kArrival, 2);
  CHECK(k.cancel(h1));
  k.run(100);
  CHECK(fired == 1);
  CHECK_FALSE(k.cancel(h1));  // already cancelled
  CHECK_FALSE(k.cancel(h2));  // already fired
}

TEST_CASE("cancel and reschedule fires exactly once at the later time") {
  // Keep-alive reset pattern: an idle timer moved forward on reuse.
  Kernel k;
  std::vector<SimTime> fires;
  Kernel::EventHandle pending = 0;
  k.register_handler(EventKind::kKeepAliveExpiry,
                     [&](const SimEvent& e) { fires.push_back(e.fire_at); });
  k.register_handler(EventKind::kArrival, [&](const SimEvent& e) {
    // Reuse at t=10s with keep_alive=60s: retime expiry to last_used + 60s.
    CHECK(k.cancel(pending));
    pending = k.schedule(e.fire_at + seconds(60), EventKind::kKeepAliveExpiry);
  });
  pending = k.schedule(seconds(60), EventKind::kKeepAliveExpiry);
  k.schedule(seconds(10), EventKind::kArrival);
  k.run(seconds(600));
  REQUIRE(fires.size() == 1);
  CHECK(fires[0] == seconds(70));
}

TEST_CASE("run on an empty queue returns immediately with clock = until") {
  Kernel k;
  auto r = k.run(5);
  CHECK(r.clock == 5);
  CHECK(r.events_dispatched == 0);
}

TEST_CASE("events beyond until stay queued") {
  Kernel k;
  int fired = 0;
  k.register_handler(EventKind::kArrival, [&](const SimEvent&) { ++fired; });
  k.schedule(10, EventKind::kArrival, 0);
  auto r = k.run(5);
  CHECK(fired == 0);
  CHECK(r.clock == 5);
  r = k.run(15);
  CHECK(fired == 1);
}

TEST_CASE("micro-trace dispatch log matches the hand-enumerated sequence") {
  // Three arrivals; each immediately schedules a completion 100ms later.
  Kernel k;
  std::vector<std::pair<std::string, SimTime>> log;
  k.register_handler(EventKind::kArrival, [&](const SimEvent& e) {
    log.push_back({"arrival", e.fire_at});
    k.schedule(e.fire_at + ms(100), EventKind::kInvocationComplete, e.a);
  });
  k.register_handler(EventKind::kInvocationComplete, [&](const SimEvent& e) {
    log.push_back({"complete", e.fire_at});
  });
  k.schedule(0, EventKind::kArrival, 0);
  k.schedule(ms(50), EventKind::kArrival, 1);
  k.schedule(ms(500), EventKind::kArrival, 2);
  k.run(seconds(10));

  std::vector<std::pair<std::string, SimTime>> want = {
      {"arrival", 0},        {"arrival", ms(50)},  {"complete", ms(100)},
      {"complete", ms(150)}, {"arrival", ms(500)}, {"complete", ms(600)},
  };
  REQUIRE(log.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(log[i].first == want[i].first);
    CHECK(log[i].second == want[i].second);
  }
}

TEST_CASE("handlers never observe a clock going backwards") {
  Kernel k;
  Rng rng(7, "test.causality");
  SimTime last_seen = -1;
  k.register_handler(EventKind::kArrival, [&](const SimEvent& e) {
    CHECK(e.fire_at >= last_seen);
    CHECK(k.now() == e.fire_at);
    last_seen = e.fire_at;
    if (rng.next_double() < 0.3) {
      k.schedule(e.fire_at + static_cast<SimTime>(rng.next_below(1000)),
                 EventKind::kArrival);
    }
  });
  for (int i = 0; i < 1000; ++i) {
    k.schedule(static_cast<SimTime>(rng.next_below(100'000)), EventKind::kArrival);
  }
  k.run(200'000);
  CHECK(last_seen >= 0);
}

TEST_CASE("scheduling in the past is a hard error") {
  Kernel k;
  k.register_handler(EventKind::kArrival, [&](const SimEvent& e) {
    if (e.a == 1) CHECK_THROWS_AS(k.schedule(e.fire_at - 1, EventKind::kArrival), SimulationError);
  });
  k.schedule(10, EventKind::kArrival, 1);
  k.run(100);
}

TEST_CASE("run with a missing handler identifies the event") {
  Kernel k;
  k.schedule(1, EventKind::kMetricsSample);
  CHECK_THROWS_AS(k.run(10), SimulationError);
}
