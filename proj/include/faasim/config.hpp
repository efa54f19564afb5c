#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "faasim/engine.hpp"
#include "faasim/synthetic.hpp"
#include "faasim/trace.hpp"

namespace faasim {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Everything one run needs, parsed from a single JSON file. Unknown keys are
// rejected; relative workload paths resolve against the config file's
// directory; SIM_-prefixed environment variables override individual keys
// (path segments joined by double underscores, e.g.
// SIM_POLICY__KEEP_ALIVE_S=120 overrides policy.keep_alive_s).
struct ExperimentConfig {
  enum class WorkloadKind { kTrace, kSynthetic };

  WorkloadKind workload_kind = WorkloadKind::kSynthetic;
  std::string trace_csv;
  std::string manifest_csv;
  SyntheticWorkloadSpec synthetic;

  EngineConfig engine;
  std::vector<std::pair<std::string, std::vector<int>>> snapshot_mask_by_name;
  std::string output_dir = "out";
};

nlohmann::json apply_env_overrides(nlohmann::json j, const char* prefix = "SIM_");

// Sets j at a dotted path ("policy.keep_alive_s"), creating objects on the way.
void set_json_path(nlohmann::json& j, const std::string& dotted,
                   const nlohmann::json& value);

ExperimentConfig parse_config(const nlohmann::json& j, const std::string& base_dir);
ExperimentConfig load_config_file(const std::string& path, bool env_overrides = true);

// Fully-defaulted form of the config; reloading it yields an identical run.
nlohmann::json effective_json(const ExperimentConfig& cfg);

Workload load_workload(const ExperimentConfig& cfg);

// Engine config with the snapshot mask resolved against the loaded workload.
EngineConfig engine_config(const ExperimentConfig& cfg, const Workload& w);

DistSpec parse_dist(const nlohmann::json& j, const std::string& path,
                    const std::string& unit_suffix);
nlohmann::json dist_json(const DistSpec& d, const std::string& unit_suffix);

}  // namespace faasim
