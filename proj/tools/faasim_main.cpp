#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "faasim/config.hpp"
#include "faasim/engine.hpp"
#include "faasim/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitInternal = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool out_required = false) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)")
      ->required();
  auto* out = cmd->add_option("--out", opts.out_dir, "output directory");
  if (out_required) out->required();
  cmd->add_option("--seed", opts.seed, "override run.seed");
  cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
}

void note(const CommonOpts& opts, const std::string& msg) {
  if (!opts.quiet) std::cerr << msg << '\n';
}

int cmd_run(const CommonOpts& opts, bool dump_events) {
  faasim::ExperimentConfig cfg = faasim::load_config_file(opts.config_path);
  if (opts.seed >= 0) cfg.engine.seed = static_cast<std::uint64_t>(opts.seed);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;

  faasim::Workload w = faasim::load_workload(cfg);
  faasim::EngineConfig ec = faasim::engine_config(cfg, w);
  ec.collect_event_log = dump_events;
  note(opts, "running " + std::string(faasim::policy_kind_name(ec.policy.kind)) + " on " +
                 std::to_string(w.functions.size()) + " functions, " +
                 std::to_string(w.events.size()) + " invocations");
  faasim::Engine engine(std::move(w), ec);
  faasim::MetricsReport report = engine.run();
  if (report.empty) {
    std::cerr << "no invocations served after warm-up; nothing to report\n";
    return kExitEmpty;
  }
  faasim::export_report(report, cfg.output_dir);
  {
    std::ofstream out(cfg.output_dir + "/effective_config.json", std::ios::binary);
    out << faasim::effective_json(cfg).dump(2) << '\n';
  }
  if (dump_events) {
    faasim::write_event_log_csv(engine, cfg.output_dir + "/events.csv");
    faasim::write_outcomes_csv(engine, cfg.output_dir + "/outcomes.csv");
  }
  note(opts, "slowdown_geomean_p99=" + faasim::format_double(report.slowdown_geomean_p99) +
                 " normalized_cost=" + faasim::format_double(report.normalized_cost) +
                 " -> " + cfg.output_dir);
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
  faasim::SweepSpec spec = faasim::load_sweep_file(opts.config_path);
  std::string out = opts.out_dir.empty() ? "sweep_out" : opts.out_dir;
  auto points = faasim::run_sweep(spec, out);
  int failed = 0;
  for (const auto& p : points) {
    if (!p.ok) {
      ++failed;
      std::cerr << "point " << p.axis_value.dump() << " failed: " << p.error << '\n';
    }
  }
  note(opts, std::to_string(points.size() - failed) + "/" +
                 std::to_string(points.size()) + " points ok -> " + out + "/sweep.csv");
  return kExitOk;
}

int cmd_compare(const CommonOpts& opts) {
  auto entries = faasim::load_compare_file(opts.config_path);
  std::string out = opts.out_dir.empty() ? "compare_out" : opts.out_dir;
  auto points = faasim::run_compare(entries, out);
  for (const auto& p : points) {
    if (!p.ok) std::cerr << "config " << p.axis_value.dump() << " failed: " << p.error << '\n';
  }
  note(opts, "wrote " + out + "/tradeoff.csv");
  return kExitOk;
}

int cmd_gen_trace(const CommonOpts& opts, const std::string& trace_out,
                  const std::string& manifest_out) {
  faasim::ExperimentConfig cfg = faasim::load_config_file(opts.config_path);
  if (cfg.workload_kind != faasim::ExperimentConfig::WorkloadKind::kSynthetic) {
    throw faasim::ConfigError("gen-trace: config workload.kind must be 'synthetic'");
  }
  faasim::Workload w = faasim::generate_synthetic(cfg.synthetic);
  faasim::write_trace(w, trace_out);
  faasim::write_manifest(w, manifest_out);
  note(opts, "wrote " + trace_out + " (" + std::to_string(w.events.size()) +
                 " invocations) and " + manifest_out);
  return kExitOk;
}

int cmd_validate(const CommonOpts& opts) {
  faasim::ExperimentConfig cfg = faasim::load_config_file(opts.config_path);
  if (opts.seed >= 0) cfg.engine.seed = static_cast<std::uint64_t>(opts.seed);
  std::cout << faasim::effective_json(cfg).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serverless control-plane simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, cmp_opts, gen_opts, val_opts;
  bool dump_events = false;
  std::string trace_out = "trace.csv", manifest_out = "manifest.csv";

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_common(run, run_opts);
  run->add_flag("--events", dump_events, "also write events.csv and outcomes.csv");

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep, sweep_opts);

  CLI::App* cmp = app.add_subcommand("compare", "run several configs on one workload");
  add_common(cmp, cmp_opts);

  CLI::App* gen = app.add_subcommand("gen-trace", "write a synthetic workload as CSV");
  add_common(gen, gen_opts);
  gen->add_option("--trace-out", trace_out, "trace CSV path");
  gen->add_option("--manifest-out", manifest_out, "manifest CSV path");

  CLI::App* val = app.add_subcommand("validate", "check a config and print the effective form");
  add_common(val, val_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts, dump_events);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (cmp->parsed()) return cmd_compare(cmp_opts);
    if (gen->parsed()) return cmd_gen_trace(gen_opts, trace_out, manifest_out);
    if (val->parsed()) return cmd_validate(val_opts);
  } catch (const faasim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const faasim::TraceError& e) {
    std::cerr << "workload error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const faasim::SimulationError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
