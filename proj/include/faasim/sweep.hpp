#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "faasim/config.hpp"
#include "faasim/metrics.hpp"

namespace faasim {

// One axis swept over a base experiment. Points are independent runs and may
// execute on parallel workers; a failing point is flagged in the combined
// output instead of aborting the sweep.
struct SweepSpec {
  nlohmann::json base;
  std::string base_dir;
  std::string axis_path;  // dotted config key, e.g. policy.keep_alive_s
  std::vector<nlohmann::json> values;
  int parallelism = 1;
};

struct SweepPoint {
  nlohmann::json axis_value;
  bool ok = false;
  std::string error;
  MetricsReport report;
};

SweepSpec load_sweep_file(const std::string& path);

// Runs all points; per-point CSVs under <out_dir>/point_<i>/, combined rows
// in <out_dir>/sweep.csv.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const std::string& out_dir);

struct CompareEntry {
  std::string label;
  nlohmann::json config;
  std::string base_dir;
};

std::vector<CompareEntry> load_compare_file(const std::string& path);

// Runs every config (which must share workload and cluster) and writes
// <out_dir>/tradeoff.csv with one performance/cost row per config.
std::vector<SweepPoint> run_compare(const std::vector<CompareEntry>& entries,
                                    const std::string& out_dir);

void write_sweep_csv(const std::string& axis, const std::vector<SweepPoint>& points,
                     const std::string& path);

}  // namespace faasim
