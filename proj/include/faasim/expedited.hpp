#pragma once

#include <cstdint>
#include <vector>

#include "faasim/rng.hpp"
#include "faasim/sim_time.hpp"

namespace faasim {

// Round-robin node selector for emergency instances. Placement quality is
// deliberately traded for speed: emergencies are a small resource share, so
// uniform spreading is enough.
class FastPlacement {
 public:
  explicit FastPlacement(int node_count) : outstanding_(node_count, 0) {}

  int place() {
    int node = cursor_;
    cursor_ = (cursor_ + 1) % static_cast<int>(outstanding_.size());
    outstanding_[node]++;
    return node;
  }

  void on_teardown(int node) { outstanding_[node]--; }

  int cursor() const { return cursor_; }
  int outstanding(int node) const { return outstanding_[node]; }

 private:
  int cursor_ = 0;
  std::vector<int> outstanding_;
};

struct ExpeditedFaultConfig {
  bool enabled = false;
  double prob = 0.0;                    // per spawn attempt, per node
  SimTime timeout = 1 * kUsPerSec;      // failure detection time
  std::vector<bool> node_mask;          // empty = all nodes eligible for faults
};

// Per-node agent bookkeeping for emergency instances. Live set and margin
// meter are invariant-checked by the metrics sampler: live = created -
// completed and margin equals the sum of live footprints.
struct WorkletState {
  std::int64_t created = 0;
  std::int64_t completed = 0;
  std::int64_t margin_mb = 0;

  std::int64_t live() const { return created - completed; }
};

}  // namespace faasim
