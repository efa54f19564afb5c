#include "faasim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

extern char** environ;

namespace faasim {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return it.key() == k;
        }) == allowed.end()) {
      throw ConfigError(path + ": unknown key '" + it.key() + "'");
    }
  }
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError(path + ": missing required key '" + key + "'");
    return fallback;
  }
  if (!obj[key].is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return obj[key].get<double>();
}

SimTime get_seconds(const json& obj, const std::string& path, const char* key,
                    double fallback_s) {
  double v = get_num(obj, path, key, fallback_s);
  if (v < 0) throw ConfigError(path + "." + key + ": must be >= 0");
  return static_cast<SimTime>(std::llround(v * kUsPerSec));
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError(path + "." + key + ": expected a bool");
  return obj[key].get<bool>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError(path + ": missing required key '" + key + "'");
    return fallback;
  }
  if (!obj[key].is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return obj[key].get<std::string>();
}

}  // namespace

DistSpec parse_dist(const json& j, const std::string& path,
                    const std::string& sfx) {
  auto key = [&sfx](const char* base) { return std::string(base) + sfx; };
  std::string kind = get_str(j, path, "kind", "", true);
  DistSpec d;
  if (kind == "constant") {
    check_keys(j, path, {"kind", "value", "value_us"});
    d = DistSpec::constant(get_num(j, path, key("value").c_str(), 0, true));
  } else if (kind == "uniform") {
    check_keys(j, path, {"kind", "lo", "hi", "lo_us", "hi_us"});
    d = DistSpec::uniform(get_num(j, path, key("lo").c_str(), 0, true),
                          get_num(j, path, key("hi").c_str(), 0, true));
  } else if (kind == "exponential") {
    check_keys(j, path, {"kind", "mean", "mean_us"});
    d = DistSpec::exponential(get_num(j, path, key("mean").c_str(), 0, true));
  } else if (kind == "lognormal") {
    check_keys(j, path,
               {"kind", "median", "median_us", "sigma", "clamp_lo", "clamp_hi",
                "clamp_lo_us", "clamp_hi_us"});
    d = DistSpec::lognormal(get_num(j, path, key("median").c_str(), 0, true),
                            get_num(j, path, "sigma", 0, true));
    d.clamp_lo = get_num(j, path, key("clamp_lo").c_str(), 0);
    d.clamp_hi = get_num(j, path, key("clamp_hi").c_str(), 0);
  } else if (kind == "choice") {
    check_keys(j, path, {"kind", "values", "weights"});
    if (!j.contains("values") || !j["values"].is_array() || j["values"].empty()) {
      throw ConfigError(path + ": choice needs a non-empty 'values' array");
    }
    d.kind = DistSpec::Kind::kChoice;
    for (const auto& v : j["values"]) d.choice_values.push_back(v.get<double>());
    if (j.contains("weights")) {
      for (const auto& v : j["weights"]) d.choice_weights.push_back(v.get<double>());
      if (d.choice_weights.size() != d.choice_values.size()) {
        throw ConfigError(path + ": values and weights differ in length");
      }
    } else {
      d.choice_weights.assign(d.choice_values.size(), 1.0);
    }
  } else {
    throw ConfigError(path + ": unknown distribution kind '" + kind + "'");
  }
  return d;
}

json dist_json(const DistSpec& d, const std::string& sfx) {
  json j;
  auto key = [&sfx](const char* base) { return std::string(base) + sfx; };
  switch (d.kind) {
    case DistSpec::Kind::kConstant:
      j["kind"] = "constant";
      j[key("value")] = d.value;
      break;
    case DistSpec::Kind::kUniform:
      j["kind"] = "uniform";
      j[key("lo")] = d.lo;
      j[key("hi")] = d.hi;
      break;
    case DistSpec::Kind::kExponential:
      j["kind"] = "exponential";
      j[key("mean")] = d.mean;
      break;
    case DistSpec::Kind::kLognormal:
      j["kind"] = "lognormal";
      j[key("median")] = d.median;
      j["sigma"] = d.sigma;
      if (d.clamp_hi > d.clamp_lo) {
        j[key("clamp_lo")] = d.clamp_lo;
        j[key("clamp_hi")] = d.clamp_hi;
      }
      break;
    case DistSpec::Kind::kChoice:
      j["kind"] = "choice";
      j["values"] = d.choice_values;
      j["weights"] = d.choice_weights;
      break;
  }
  return j;
}

void set_json_path(json& j, const std::string& dotted, const json& value) {
  json* cur = &j;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = dotted.find('.', start);
    std::string seg = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
    if (seg.empty()) throw ConfigError("bad config path '" + dotted + "'");
    if (dot == std::string::npos) {
      (*cur)[seg] = value;
      return;
    }
    cur = &((*cur)[seg]);
    start = dot + 1;
  }
}

json apply_env_overrides(json j, const char* prefix) {
  const std::size_t plen = std::strlen(prefix);
  for (char** env = environ; *env != nullptr; ++env) {
    std::string entry(*env);
    if (entry.compare(0, plen, prefix) != 0) continue;
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(plen, eq - plen);
    std::string raw = entry.substr(eq + 1);
    // POLICY__KEEP_ALIVE_S -> policy.keep_alive_s
    std::string path;
    for (std::size_t i = 0; i < name.size(); ++i) {
      if (name[i] == '_' && i + 1 < name.size() && name[i + 1] == '_') {
        path += '.';
        ++i;
      } else {
        path += static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
      }
    }
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;  // bare strings are fine
    }
    set_json_path(j, path, value);
  }
  return j;
}

namespace {

SyntheticWorkloadSpec parse_synthetic(const json& j, const std::string& path) {
  check_keys(j, path, {"seed", "horizon_s", "function_count", "classes"});
  SyntheticWorkloadSpec spec;
  spec.seed = static_cast<std::uint64_t>(get_num(j, path, "seed", 1));
  spec.horizon = get_seconds(j, path, "horizon_s", 0);
  if (spec.horizon <= 0) throw ConfigError(path + ".horizon_s: must be > 0");
  spec.function_count = static_cast<int>(get_num(j, path, "function_count", 0, true));
  if (spec.function_count <= 0) throw ConfigError(path + ".function_count: must be > 0");
  if (!j.contains("classes") || !j["classes"].is_array() || j["classes"].empty()) {
    throw ConfigError(path + ": needs a non-empty 'classes' array");
  }
  int ci = 0;
  for (const auto& cj : j["classes"]) {
    std::string cpath = path + ".classes[" + std::to_string(ci++) + "]";
    check_keys(cj, cpath,
               {"name", "weight", "iat", "rate_spread_sigma", "duration", "memory_mb",
                "target_concurrency", "burst"});
    WorkloadClass c;
    c.name = get_str(cj, cpath, "name", "class" + std::to_string(ci));
    c.weight = get_num(cj, cpath, "weight", 0, true);
    if (!cj.contains("iat") || !cj.contains("duration")) {
      throw ConfigError(cpath + ": needs 'iat' and 'duration' distributions");
    }
    c.iat = parse_dist(cj["iat"], cpath + ".iat", "_us");
    c.rate_spread_sigma = get_num(cj, cpath, "rate_spread_sigma", 0);
    c.duration = parse_dist(cj["duration"], cpath + ".duration", "_us");
    if (cj.contains("memory_mb")) {
      c.memory_mb = parse_dist(cj["memory_mb"], cpath + ".memory_mb", "");
    }
    c.target_concurrency =
        static_cast<int>(get_num(cj, cpath, "target_concurrency", 1));
    if (cj.contains("burst")) {
      const json& bj = cj["burst"];
      check_keys(bj, cpath + ".burst", {"prob", "size", "spacing_us"});
      c.burst_prob = get_num(bj, cpath + ".burst", "prob", 0);
      c.burst_size = static_cast<int>(get_num(bj, cpath + ".burst", "size", 0));
      c.burst_spacing_us =
          static_cast<SimTime>(get_num(bj, cpath + ".burst", "spacing_us", 1000));
    }
    spec.classes.push_back(std::move(c));
  }
  return spec;
}

json synthetic_json(const SyntheticWorkloadSpec& spec) {
  json j;
  j["seed"] = spec.seed;
  j["horizon_s"] = to_seconds(spec.horizon);
  j["function_count"] = spec.function_count;
  j["classes"] = json::array();
  for (const auto& c : spec.classes) {
    json cj;
    cj["name"] = c.name;
    cj["weight"] = c.weight;
    cj["iat"] = dist_json(c.iat, "_us");
    cj["rate_spread_sigma"] = c.rate_spread_sigma;
    cj["duration"] = dist_json(c.duration, "_us");
    cj["memory_mb"] = dist_json(c.memory_mb, "");
    cj["target_concurrency"] = c.target_concurrency;
    cj["burst"] = {{"prob", c.burst_prob},
                   {"size", c.burst_size},
                   {"spacing_us", c.burst_spacing_us}};
    j["classes"].push_back(cj);
  }
  return j;
}

PolicyKind parse_policy_kind(const std::string& s, const std::string& path) {
  if (s == "sync") return PolicyKind::kSync;
  if (s == "async_window") return PolicyKind::kAsyncWindow;
  if (s == "predictive_lr") return PolicyKind::kPredictiveLr;
  if (s == "dual_track") return PolicyKind::kDualTrack;
  if (s == "fast_async") return PolicyKind::kFastAsync;
  throw ConfigError(path + ": unknown policy kind '" + s + "'");
}

std::string resolve_path(const std::string& p, const std::string& base_dir) {
  std::filesystem::path fp(p);
  if (fp.is_absolute() || base_dir.empty()) return p;
  return (std::filesystem::path(base_dir) / fp).string();
}

}  // namespace

ExperimentConfig parse_config(const json& j, const std::string& base_dir) {
  check_keys(j, "config",
             {"workload", "cluster", "policy", "expedited", "metrics", "run",
              "output_dir"});
  ExperimentConfig cfg;

  if (!j.contains("workload")) throw ConfigError("config: missing 'workload'");
  const json& wj = j["workload"];
  check_keys(wj, "workload",
             {"kind", "trace_csv", "manifest_csv", "synthetic", "iat_window",
              "iat_min_samples"});
  std::string wkind = get_str(wj, "workload", "kind", "", true);
  if (wkind == "trace") {
    cfg.workload_kind = ExperimentConfig::WorkloadKind::kTrace;
    cfg.trace_csv =
        resolve_path(get_str(wj, "workload", "trace_csv", "", true), base_dir);
    cfg.manifest_csv =
        resolve_path(get_str(wj, "workload", "manifest_csv", "", true), base_dir);
  } else if (wkind == "synthetic") {
    cfg.workload_kind = ExperimentConfig::WorkloadKind::kSynthetic;
    if (!wj.contains("synthetic")) throw ConfigError("workload: missing 'synthetic'");
    cfg.synthetic = parse_synthetic(wj["synthetic"], "workload.synthetic");
  } else {
    throw ConfigError("workload.kind: expected 'trace' or 'synthetic'");
  }
  cfg.engine.iat_window = static_cast<std::size_t>(get_num(wj, "workload", "iat_window", 128));
  cfg.engine.iat_min_samples =
      static_cast<std::size_t>(get_num(wj, "workload", "iat_min_samples", 2));

  if (j.contains("cluster")) {
    const json& cj = j["cluster"];
    check_keys(cj, "cluster",
               {"node_count", "cpu_millicores", "memory_mb", "queue_cap", "delay_model"});
    ClusterConfig& cc = cfg.engine.cluster;
    cc.node_count = static_cast<int>(get_num(cj, "cluster", "node_count", 8));
    if (cc.node_count <= 0) throw ConfigError("cluster.node_count: must be > 0");
    cc.cpu_millicores =
        static_cast<std::int64_t>(get_num(cj, "cluster", "cpu_millicores", 40000));
    cc.memory_mb = static_cast<std::int64_t>(get_num(cj, "cluster", "memory_mb", 65536));
    cc.queue_cap = static_cast<int>(get_num(cj, "cluster", "queue_cap", 0));
    if (cj.contains("delay_model")) {
      const json& dj = cj["delay_model"];
      check_keys(dj, "cluster.delay_model",
                 {"mode", "components", "aggregate", "emergency", "routing"});
      std::string mode = get_str(dj, "cluster.delay_model", "mode", "breakdown");
      if (mode == "breakdown") {
        cc.delays.mode = DelayModel::Mode::kBreakdown;
      } else if (mode == "aggregate") {
        cc.delays.mode = DelayModel::Mode::kAggregate;
      } else {
        throw ConfigError("cluster.delay_model.mode: expected breakdown|aggregate");
      }
      if (dj.contains("components")) {
        cc.delays.regular_components.clear();
        int i = 0;
        for (const auto& comp : dj["components"]) {
          std::string cpath = "cluster.delay_model.components[" + std::to_string(i++) + "]";
          check_keys(comp, cpath, {"name", "dist"});
          if (!comp.contains("dist")) throw ConfigError(cpath + ": missing 'dist'");
          cc.delays.regular_components.push_back(
              {get_str(comp, cpath, "name", "component", true),
               parse_dist(comp["dist"], cpath + ".dist", "_us")});
        }
        if (cc.delays.regular_components.empty()) {
          throw ConfigError("cluster.delay_model.components: must not be empty");
        }
      }
      if (dj.contains("aggregate")) {
        cc.delays.aggregate =
            parse_dist(dj["aggregate"], "cluster.delay_model.aggregate", "_us");
      }
      if (dj.contains("emergency")) {
        cc.delays.emergency =
            parse_dist(dj["emergency"], "cluster.delay_model.emergency", "_us");
      }
      if (dj.contains("routing")) {
        cc.delays.routing = parse_dist(dj["routing"], "cluster.delay_model.routing", "_us");
      }
    }
  }

  if (j.contains("policy")) {
    const json& pj = j["policy"];
    check_keys(pj, "policy",
               {"kind", "keep_alive_s", "window_s", "tick_s", "filter_quantile",
                "report_all", "lr", "fast_async_delay_ms"});
    PolicyConfig& pc = cfg.engine.policy;
    pc.kind = parse_policy_kind(get_str(pj, "policy", "kind", "async_window"), "policy.kind");
    pc.keep_alive = get_seconds(pj, "policy", "keep_alive_s", 60);
    pc.window = get_seconds(pj, "policy", "window_s", 60);
    pc.tick = get_seconds(pj, "policy", "tick_s", 2);
    if (pc.keep_alive <= 0 || pc.window <= 0 || pc.tick <= 0) {
      throw ConfigError("policy durations must be > 0");
    }
    pc.filter_quantile = get_num(pj, "policy", "filter_quantile", 0.5);
    if (pc.filter_quantile < 0 || pc.filter_quantile > 1) {
      throw ConfigError("policy.filter_quantile: must be in [0,1]");
    }
    pc.report_all = get_bool(pj, "policy", "report_all", false);
    if (pj.contains("lr")) {
      check_keys(pj["lr"], "policy.lr", {"lags", "training_s"});
      pc.lr.lags = static_cast<int>(get_num(pj["lr"], "policy.lr", "lags", 8));
      if (pc.lr.lags < 1) throw ConfigError("policy.lr.lags: must be >= 1");
      pc.lr.training = get_seconds(pj["lr"], "policy.lr", "training_s", 1200);
    }
    pc.fast_async_delay = static_cast<SimTime>(
        std::llround(get_num(pj, "policy", "fast_async_delay_ms", 100) * kUsPerMs));
  }

  if (j.contains("expedited")) {
    const json& ej = j["expedited"];
    check_keys(ej, "expedited", {"fault", "snapshot_mask"});
    if (ej.contains("fault")) {
      const json& fj = ej["fault"];
      check_keys(fj, "expedited.fault", {"enabled", "prob", "timeout_ms", "nodes"});
      cfg.engine.fault.enabled = get_bool(fj, "expedited.fault", "enabled", false);
      cfg.engine.fault.prob = get_num(fj, "expedited.fault", "prob", 0);
      cfg.engine.fault.timeout = static_cast<SimTime>(
          std::llround(get_num(fj, "expedited.fault", "timeout_ms", 1000) * kUsPerMs));
      if (fj.contains("nodes")) {
        cfg.engine.fault.node_mask.assign(cfg.engine.cluster.node_count, false);
        for (const auto& n : fj["nodes"]) {
          int idx = n.get<int>();
          if (idx < 0 || idx >= cfg.engine.cluster.node_count) {
            throw ConfigError("expedited.fault.nodes: node index out of range");
          }
          cfg.engine.fault.node_mask[idx] = true;
        }
      }
    }
    if (ej.contains("snapshot_mask")) {
      for (auto it = ej["snapshot_mask"].begin(); it != ej["snapshot_mask"].end(); ++it) {
        std::vector<int> nodes;
        for (const auto& n : it.value()) nodes.push_back(n.get<int>());
        if (nodes.empty()) {
          throw ConfigError("expedited.snapshot_mask: empty node list for '" + it.key() +
                            "'");
        }
        cfg.snapshot_mask_by_name.push_back({it.key(), nodes});
      }
    }
  }

  if (j.contains("metrics")) {
    const json& mj = j["metrics"];
    check_keys(mj, "metrics", {"sample_period_s", "cpu_costs"});
    cfg.engine.sample_period = get_seconds(mj, "metrics", "sample_period_s", 1);
    if (cfg.engine.sample_period <= 0) {
      throw ConfigError("metrics.sample_period_s: must be > 0");
    }
    if (mj.contains("cpu_costs")) {
      const json& cj = mj["cpu_costs"];
      check_keys(cj, "metrics.cpu_costs",
                 {"regular_creation_ms", "emergency_creation_ms", "tick_ms",
                  "lr_inference_ms"});
      CpuCostModel& cm = cfg.engine.cpu_costs;
      cm.regular_creation_ms = get_num(cj, "metrics.cpu_costs", "regular_creation_ms", 25);
      cm.emergency_creation_ms =
          get_num(cj, "metrics.cpu_costs", "emergency_creation_ms", 5);
      cm.tick_ms = get_num(cj, "metrics.cpu_costs", "tick_ms", 1);
      cm.lr_inference_ms = get_num(cj, "metrics.cpu_costs", "lr_inference_ms", 10);
    }
  }

  if (j.contains("run")) {
    const json& rj = j["run"];
    check_keys(rj, "run", {"horizon_s", "warmup_s", "seed"});
    cfg.engine.horizon = get_seconds(rj, "run", "horizon_s", 3600);
    cfg.engine.warmup = get_seconds(rj, "run", "warmup_s", 1200);
    cfg.engine.seed = static_cast<std::uint64_t>(get_num(rj, "run", "seed", 1));
  }
  if (cfg.engine.horizon <= 0) throw ConfigError("run.horizon_s: must be > 0");
  if (cfg.engine.warmup >= cfg.engine.horizon) {
    throw ConfigError("run.warmup_s: must be below run.horizon_s");
  }

  cfg.output_dir = get_str(j, "config", "output_dir", "out");
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, bool env_overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (env_overrides) j = apply_env_overrides(std::move(j));
  return parse_config(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::json effective_json(const ExperimentConfig& cfg) {
  json j;
  json& wj = j["workload"];
  if (cfg.workload_kind == ExperimentConfig::WorkloadKind::kTrace) {
    wj["kind"] = "trace";
    wj["trace_csv"] = cfg.trace_csv;
    wj["manifest_csv"] = cfg.manifest_csv;
  } else {
    wj["kind"] = "synthetic";
    wj["synthetic"] = synthetic_json(cfg.synthetic);
  }
  wj["iat_window"] = cfg.engine.iat_window;
  wj["iat_min_samples"] = cfg.engine.iat_min_samples;

  const ClusterConfig& cc = cfg.engine.cluster;
  json& cj = j["cluster"];
  cj["node_count"] = cc.node_count;
  cj["cpu_millicores"] = cc.cpu_millicores;
  cj["memory_mb"] = cc.memory_mb;
  cj["queue_cap"] = cc.queue_cap;
  json& dj = cj["delay_model"];
  dj["mode"] = cc.delays.mode == DelayModel::Mode::kBreakdown ? "breakdown" : "aggregate";
  dj["components"] = json::array();
  for (const auto& [name, dist] : cc.delays.regular_components) {
    dj["components"].push_back({{"name", name}, {"dist", dist_json(dist, "_us")}});
  }
  dj["aggregate"] = dist_json(cc.delays.aggregate, "_us");
  dj["emergency"] = dist_json(cc.delays.emergency, "_us");
  dj["routing"] = dist_json(cc.delays.routing, "_us");

  const PolicyConfig& pc = cfg.engine.policy;
  json& pj = j["policy"];
  pj["kind"] = policy_kind_name(pc.kind);
  pj["keep_alive_s"] = to_seconds(pc.keep_alive);
  pj["window_s"] = to_seconds(pc.window);
  pj["tick_s"] = to_seconds(pc.tick);
  pj["filter_quantile"] = pc.filter_quantile;
  pj["report_all"] = pc.report_all;
  pj["lr"] = {{"lags", pc.lr.lags}, {"training_s", to_seconds(pc.lr.training)}};
  pj["fast_async_delay_ms"] = static_cast<double>(pc.fast_async_delay) / kUsPerMs;

  json& ej = j["expedited"];
  ej["fault"]["enabled"] = cfg.engine.fault.enabled;
  ej["fault"]["prob"] = cfg.engine.fault.prob;
  ej["fault"]["timeout_ms"] = static_cast<double>(cfg.engine.fault.timeout) / kUsPerMs;
  if (!cfg.engine.fault.node_mask.empty()) {
    json nodes = json::array();
    for (std::size_t i = 0; i < cfg.engine.fault.node_mask.size(); ++i) {
      if (cfg.engine.fault.node_mask[i]) nodes.push_back(i);
    }
    ej["fault"]["nodes"] = nodes;
  }
  if (!cfg.snapshot_mask_by_name.empty()) {
    for (const auto& [name, nodes] : cfg.snapshot_mask_by_name) {
      ej["snapshot_mask"][name] = nodes;
    }
  }

  json& mj = j["metrics"];
  mj["sample_period_s"] = to_seconds(cfg.engine.sample_period);
  mj["cpu_costs"] = {{"regular_creation_ms", cfg.engine.cpu_costs.regular_creation_ms},
                     {"emergency_creation_ms", cfg.engine.cpu_costs.emergency_creation_ms},
                     {"tick_ms", cfg.engine.cpu_costs.tick_ms},
                     {"lr_inference_ms", cfg.engine.cpu_costs.lr_inference_ms}};

  j["run"] = {{"horizon_s", to_seconds(cfg.engine.horizon)},
              {"warmup_s", to_seconds(cfg.engine.warmup)},
              {"seed", cfg.engine.seed}};
  j["output_dir"] = cfg.output_dir;
  return j;
}

Workload load_workload(const ExperimentConfig& cfg) {
  if (cfg.workload_kind == ExperimentConfig::WorkloadKind::kTrace) {
    return load_trace(cfg.trace_csv, cfg.manifest_csv);
  }
  return generate_synthetic(cfg.synthetic);
}

EngineConfig engine_config(const ExperimentConfig& cfg, const Workload& w) {
  EngineConfig ec = cfg.engine;
  for (const auto& [name, nodes] : cfg.snapshot_mask_by_name) {
    std::int32_t idx = w.function_index(name);
    if (idx < 0) {
      throw ConfigError("expedited.snapshot_mask: unknown function '" + name + "'");
    }
    for (int n : nodes) {
      if (n < 0 || n >= ec.cluster.node_count) {
        throw ConfigError("expedited.snapshot_mask: node index out of range for '" +
                          name + "'");
      }
    }
    ec.snapshot_mask[idx] = nodes;
  }
  return ec;
}

}  // namespace faasim
