#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "faasim/sim_time.hpp"

namespace faasim {

enum class Track : std::uint8_t { kRegular = 0, kEmergency, kRejected };

const char* track_name(Track t);

struct FunctionSpec {
  std::string id;
  int memory_mb = 128;
  int target_concurrency = 1;
};

// One function invocation from the workload, plus its simulated outcome.
// Times are SimTime microseconds; duration is pure execution time.
struct TraceEvent {
  std::int32_t function = -1;  // index into the function table
  SimTime arrival = 0;
  SimTime duration = 0;

  // Outcome, filled by the simulation.
  SimTime exec_start = -1;
  SimTime completion = -1;
  Track track = Track::kRegular;
  std::int64_t instance = -1;

  bool served() const { return completion >= 0; }
  SimTime scheduling_delay() const { return exec_start - arrival; }
  double slowdown() const {
    return static_cast<double>(completion - arrival) / static_cast<double>(duration);
  }
};

struct Workload {
  std::vector<FunctionSpec> functions;
  std::vector<TraceEvent> events;  // sorted by arrival, file order on ties

  std::int32_t function_index(const std::string& id) const;
};

struct TraceError : std::runtime_error {
  explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

// Reads `function_id,memory_mb,target_concurrency` (header required).
std::vector<FunctionSpec> load_manifest(const std::string& path);

// Reads `function_id,arrival_us,duration_us` (header required) against a
// manifest. Rows may arrive out of order; they are stably sorted by arrival.
// Malformed rows and unknown function ids raise TraceError with the line
// number.
Workload load_trace(const std::string& trace_path, const std::string& manifest_path);

void write_manifest(const Workload& w, const std::string& path);
void write_trace(const Workload& w, const std::string& path);

}  // namespace faasim
