#pragma once

#include <string>
#include <vector>

#include "faasim/rng.hpp"
#include "faasim/trace.hpp"

namespace faasim {

// One traffic class of the synthetic generator. Functions assigned to a
// class draw their invocations from a renewal process with the class's IAT
// distribution (optionally jittered per function), plus optional bursts of
// back-to-back arrivals.
struct WorkloadClass {
  std::string name;
  double weight = 1.0;           // share of functions; class counts are exact
  DistSpec iat;                  // microseconds between base arrivals
  double rate_spread_sigma = 0;  // per-function lognormal multiplier on mean IAT
  DistSpec duration;             // microseconds
  DistSpec memory_mb = DistSpec::constant(128);
  int target_concurrency = 1;
  double burst_prob = 0.0;       // per base arrival
  int burst_size = 0;            // total arrivals in a burst (base included)
  SimTime burst_spacing_us = 1000;
};

struct SyntheticWorkloadSpec {
  std::uint64_t seed = 1;
  SimTime horizon = 0;
  int function_count = 0;
  std::vector<WorkloadClass> classes;  // weights must sum to 1
};

// Exact per-class function counts by largest remainder, preserving class
// order on ties. Deterministic: no rounding drift.
std::vector<int> class_function_counts(const SyntheticWorkloadSpec& spec);

// Deterministic for a given spec: each function owns an RNG substream keyed
// by (seed, function name), so changing one class never perturbs another.
Workload generate_synthetic(const SyntheticWorkloadSpec& spec);

}  // namespace faasim
