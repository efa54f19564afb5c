#include "faasim/sweep.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

namespace faasim {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

SweepSpec load_sweep_file(const std::string& path) {
  json j = load_json(path);
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  SweepSpec spec;
  spec.base_dir = base_dir;
  if (!j.contains("base")) throw ConfigError("sweep: missing 'base'");
  if (j["base"].is_string()) {
    std::string base_path = j["base"].get<std::string>();
    std::filesystem::path bp(base_path);
    if (!bp.is_absolute()) bp = std::filesystem::path(base_dir) / bp;
    spec.base = load_json(bp.string());
    spec.base_dir = bp.parent_path().string();
  } else {
    spec.base = j["base"];
  }
  if (!j.contains("axis") || !j["axis"].is_object()) {
    throw ConfigError("sweep: missing 'axis' object");
  }
  const json& axis = j["axis"];
  if (!axis.contains("path") || !axis.contains("values") || !axis["values"].is_array() ||
      axis["values"].empty()) {
    throw ConfigError("sweep.axis: needs 'path' and a non-empty 'values' array");
  }
  spec.axis_path = axis["path"].get<std::string>();
  for (const auto& v : axis["values"]) spec.values.push_back(v);
  spec.parallelism = j.value("parallelism", 1);
  if (spec.parallelism < 1) spec.parallelism = 1;

  // The axis must name a key the schema accepts.
  json probe = spec.base;
  set_json_path(probe, spec.axis_path, spec.values.front());
  parse_config(probe, spec.base_dir);
  return spec;
}

void write_sweep_csv(const std::string& axis, const std::vector<SweepPoint>& points,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "axis,axis_value,status,slowdown_geomean_p99,normalized_cost,"
         "creations_regular,creations_emergency,creation_rate_regular_per_s,"
         "reported_fraction,cold_starts,emergency_served,invocations,"
         "cpu_overhead_fraction\n";
  for (const SweepPoint& p : points) {
    out << axis << ',' << p.axis_value.dump() << ',' << (p.ok ? "ok" : "failed");
    if (p.ok) {
      const MetricsReport& r = p.report;
      out << ',' << format_double(r.slowdown_geomean_p99) << ','
          << format_double(r.normalized_cost) << ',' << r.creations_regular << ','
          << r.creations_emergency << ','
          << format_double(r.creation_rate_regular_per_s) << ','
          << format_double(r.reported_fraction) << ',' << r.cold_starts << ','
          << r.emergency_served << ',' << r.invocations << ','
          << format_double(r.cpu_overhead_fraction);
    } else {
      out << ",,,,,,,,,,";
    }
    out << '\n';
  }
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<SweepPoint> points(spec.values.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= spec.values.size()) return;
      SweepPoint& p = points[i];
      p.axis_value = spec.values[i];
      try {
        json cj = spec.base;
        set_json_path(cj, spec.axis_path, spec.values[i]);
        ExperimentConfig cfg = parse_config(cj, spec.base_dir);
        Workload w = load_workload(cfg);
        EngineConfig ec = engine_config(cfg, w);
        Engine engine(std::move(w), ec);
        p.report = engine.run();
        if (p.report.empty) {
          p.error = "no served invocations";
        } else {
          export_report(p.report, out_dir + "/point_" + std::to_string(i));
          p.ok = true;
        }
      } catch (const std::exception& e) {
        p.error = e.what();
      }
    }
  };

  int workers = std::min<int>(spec.parallelism, static_cast<int>(spec.values.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  write_sweep_csv(spec.axis_path, points, out_dir + "/sweep.csv");
  return points;
}

std::vector<CompareEntry> load_compare_file(const std::string& path) {
  json j = load_json(path);
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  if (!j.contains("configs") || !j["configs"].is_array() || j["configs"].size() < 2) {
    throw ConfigError("compare: needs a 'configs' array with at least 2 entries");
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto& l : j["labels"]) labels.push_back(l.get<std::string>());
    if (labels.size() != j["configs"].size()) {
      throw ConfigError("compare: labels and configs differ in length");
    }
  }
  std::vector<CompareEntry> entries;
  std::size_t i = 0;
  for (const auto& c : j["configs"]) {
    CompareEntry e;
    e.base_dir = base_dir;
    if (c.is_string()) {
      std::filesystem::path cp(c.get<std::string>());
      if (!cp.is_absolute()) cp = std::filesystem::path(base_dir) / cp;
      e.config = load_json(cp.string());
      e.base_dir = cp.parent_path().string();
      e.label = labels.empty() ? cp.stem().string() : labels[i];
    } else {
      e.config = c;
      e.label = labels.empty() ? "config" + std::to_string(i) : labels[i];
    }
    entries.push_back(std::move(e));
    ++i;
  }
  return entries;
}

std::vector<SweepPoint> run_compare(const std::vector<CompareEntry>& entries,
                                    const std::string& out_dir) {
  if (entries.size() < 2) throw ConfigError("compare: needs at least 2 configs");
  std::vector<ExperimentConfig> cfgs;
  for (const auto& e : entries) cfgs.push_back(parse_config(e.config, e.base_dir));

  json ref = effective_json(cfgs.front());
  for (std::size_t i = 1; i < cfgs.size(); ++i) {
    json other = effective_json(cfgs[i]);
    if (other["workload"] != ref["workload"] || other["cluster"] != ref["cluster"]) {
      throw ConfigError("compare: config '" + entries[i].label +
                        "' does not share the workload and cluster of '" +
                        entries.front().label + "'");
    }
  }

  std::filesystem::create_directories(out_dir);
  std::vector<SweepPoint> points(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    SweepPoint& p = points[i];
    p.axis_value = entries[i].label;
    try {
      Workload w = load_workload(cfgs[i]);
      EngineConfig ec = engine_config(cfgs[i], w);
      Engine engine(std::move(w), ec);
      p.report = engine.run();
      if (p.report.empty) {
        p.error = "no served invocations";
      } else {
        export_report(p.report, out_dir + "/" + entries[i].label);
        p.ok = true;
      }
    } catch (const std::exception& e) {
      p.error = e.what();
    }
  }

  std::ofstream out(out_dir + "/tradeoff.csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_dir + "/tradeoff.csv");
  out << "label,policy,keep_alive_s,window_s,status,slowdown_geomean_p99,"
         "normalized_cost,creations_regular,creations_emergency,emergency_served\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const SweepPoint& p = points[i];
    const PolicyConfig& pc = cfgs[i].engine.policy;
    out << entries[i].label << ',' << policy_kind_name(pc.kind) << ','
        << format_double(to_seconds(pc.keep_alive)) << ','
        << format_double(to_seconds(pc.window)) << ',' << (p.ok ? "ok" : "failed");
    if (p.ok) {
      out << ',' << format_double(p.report.slowdown_geomean_p99) << ','
          << format_double(p.report.normalized_cost) << ',' << p.report.creations_regular
          << ',' << p.report.creations_emergency << ',' << p.report.emergency_served;
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
  return points;
}

}  // namespace faasim
