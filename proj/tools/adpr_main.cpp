#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adpr/errors.hpp"
#include "adpr/experiments.hpp"
#include "adpr/io.hpp"

namespace {

using namespace adpr;

// Exit codes: 0 success, 1 internal error, 2 bad configuration or usage,
// 3 layout generation failure, 4 unconstructible sequence.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitLayout = 3;
constexpr int kExitSequence = 4;

std::string device_path_for(const RunConfig& config, const std::string& family) {
  if (!config.device_path.empty()) return config.device_path;
  return "configs/workload_" + family + ".json";
}

void placement_rows(std::vector<ResultRow>& rows, const RunConfig& config,
                    const std::string& family, const std::string& difficulty,
                    const PlacementExperimentResult& r) {
  auto push = [&](const std::string& system, const std::string& metric, double value) {
    rows.push_back(ResultRow{family, difficulty, system, metric, value, config.seed});
  };
  push("naive", "placement_rate", r.naive_rate);
  push("best_effort", "placement_rate", r.best_effort_rate);
  push("amorphous", "placement_rate", r.amorphous_rate);
  push("best_effort", "best_layout_index", static_cast<double>(r.best_layout_index));
}

void overhead_rows(std::vector<ResultRow>& rows, const RunConfig& config,
                   const std::string& family, const std::string& difficulty,
                   const OverheadExperimentResult& r) {
  const std::string suffix = "@delta" + std::to_string(r.afu_delta);
  auto push = [&](const std::string& system, const std::string& metric, double value) {
    rows.push_back(ResultRow{family, difficulty, system, metric + suffix, value, config.seed});
  };
  push("sequence", "sequence_completed", r.completed ? 1.0 : 0.0);
  push("sequence", "steps_built", static_cast<double>(r.steps_built));
  if (!r.completed) return;
  auto push_stats = [&](const std::string& system, const TransitionStats& stats) {
    push(system, "mean_transition_seconds", stats.mean_seconds);
    push(system, "max_transition_seconds", stats.max_seconds);
    push(system, "total_transition_bytes", static_cast<double>(stats.total_bytes));
    push(system, "full_repacks", static_cast<double>(stats.full_repacks));
    if (config.energy_per_byte > 0.0 && stats.transitions > 0) {
      push(system, "mean_transition_joules",
           static_cast<double>(stats.total_bytes) * config.energy_per_byte / stats.transitions);
    }
  };
  push_stats("standard", r.standard_stats);
  push_stats("amorphous", r.amorphous_stats);
}

void emit(const RunConfig& config, std::span<const ResultRow> rows,
          const std::string& manifest_path) {
  if (!config.out_csv.empty()) {
    write_results_csv(config.out_csv, rows);
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), config.out_csv.c_str());
  } else {
    for (const ResultRow& row : rows) {
      std::printf("%s,%s,%s,%s,%.10g,%llu\n", row.workload.c_str(), row.difficulty.c_str(),
                  row.system.c_str(), row.metric.c_str(), row.value,
                  static_cast<unsigned long long>(row.seed));
    }
  }
  if (!manifest_path.empty()) save_manifest(manifest_path, config);
}

int cmd_run(const RunConfig& config, const std::string& manifest_path) {
  WorkloadSpec spec{workload_family_from_string(config.workload),
                    difficulty_from_string(config.difficulty), config.afu_logic_demand};
  const Device device = load_device(device_path_for(config, config.workload));
  const ExperimentOptions options = experiment_options_from(config);
  std::vector<ResultRow> rows;
  bool all_completed = true;

  if (config.experiment == "placement") {
    PlacementExperimentResult r = run_placement_experiment(device, spec, config.combos,
                                                           config.layouts, config.seed, options);
    placement_rows(rows, config, config.workload, config.difficulty, r);
  } else if (config.experiment == "overhead") {
    for (int delta : config.afu_deltas) {
      OverheadExperimentResult r = run_overhead_experiment(device, spec, config.length, delta,
                                                           config.layouts, config.seed, options);
      overhead_rows(rows, config, config.workload, config.difficulty, r);
      if (!r.completed) {
        all_completed = false;
        std::fprintf(stderr, "sequence unconstructible for delta %d after %d steps\n", delta,
                     r.steps_built);
      }
    }
  } else {
    throw ConfigError("unknown experiment '" + config.experiment + "' (expected placement|overhead)");
  }
  emit(config, rows, manifest_path);
  return all_completed ? kExitOk : kExitSequence;
}

int cmd_sweep(const RunConfig& config, const std::string& config_dir,
              const std::string& manifest_path) {
  std::vector<ResultRow> rows;
  const ExperimentOptions options = experiment_options_from(config);
  for (WorkloadFamily family : all_workload_families) {
    const std::string family_name = to_string(family);
    const Device device = load_device(config_dir + "/workload_" + family_name + ".json");
    for (Difficulty difficulty : all_difficulties) {
      WorkloadSpec spec{family, difficulty, config.afu_logic_demand};
      const std::string difficulty_name = to_string(difficulty);
      if (config.experiment == "placement" || config.experiment == "all") {
        PlacementExperimentResult r = run_placement_experiment(
            device, spec, config.combos, config.layouts, config.seed, options);
        placement_rows(rows, config, family_name, difficulty_name, r);
        std::fprintf(stderr, "placement %s/%s: naive %.3f best %.3f amorphous %.3f\n",
                     family_name.c_str(), difficulty_name.c_str(), r.naive_rate,
                     r.best_effort_rate, r.amorphous_rate);
      }
      if (config.experiment == "overhead" || config.experiment == "all") {
        for (int delta : config.afu_deltas) {
          OverheadExperimentResult r = run_overhead_experiment(
              device, spec, config.length, delta, config.layouts, config.seed, options);
          overhead_rows(rows, config, family_name, difficulty_name, r);
          std::fprintf(stderr, "overhead %s/%s delta %d: %s\n", family_name.c_str(),
                       difficulty_name.c_str(), delta,
                       r.completed ? "completed" : "unconstructible");
        }
      }
    }
  }
  emit(config, rows, manifest_path);
  return kExitOk;
}

int cmd_table(const std::string& in_path) {
  std::vector<ResultRow> rows = read_results_csv(in_path);
  std::printf("%-8s %-8s %-12s %-28s %-6s %s\n", "workload", "diff", "system", "metric", "delta",
              "value");
  for (const ResultRow& row : rows) {
    std::string metric = row.metric;
    std::string delta = "-";
    if (const std::size_t at = metric.find("@delta"); at != std::string::npos) {
      delta = metric.substr(at + 6);
      metric = metric.substr(0, at);
    }
    std::printf("%-8s %-8s %-12s %-28s %-6s %.10g\n", row.workload.c_str(),
                row.difficulty.c_str(), row.system.c_str(), metric.c_str(), delta.c_str(),
                row.value);
  }
  return kExitOk;
}

int cmd_layouts(const std::string& device_path, int count, std::uint64_t seed,
                const std::string& out_path) {
  const Device device = load_device(device_path);
  std::vector<Layout> pool;
  pool.push_back(naive_layout(device));
  if (count > 0) {
    Rng rng = Rng::with_base(seed, rng_tag::layouts);
    auto randoms = random_layouts(device, count, rng);
    pool.insert(pool.end(), randoms.begin(), randoms.end());
  }
  save_layout_pool(out_path, device, pool);
  // Round-trip check: the reloaded pool must be identical.
  std::vector<Layout> reloaded = load_layout_pool(out_path, device);
  if (reloaded.size() != pool.size()) throw Error("layout pool round-trip lost layouts");
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!(reloaded[i] == pool[i])) throw Error("layout pool round-trip changed a layout");
  }
  std::fprintf(stderr, "wrote %zu layouts to %s\n", pool.size(), out_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic partial reconfiguration simulator: fixed-partition and amorphous packing"};
  app.require_subcommand(1);

  RunConfig config;
  std::string manifest_path;
  std::string from_manifest;
  std::string config_dir = "configs";

  CLI::App* run = app.add_subcommand("run", "Run one experiment cell");
  run->add_option("--experiment", config.experiment, "placement|overhead");
  run->add_option("--device", config.device_path, "Device config JSON");
  run->add_option("--workload", config.workload, "bram|dsp|mixed");
  run->add_option("--difficulty", config.difficulty, "easy|hard|harder");
  run->add_option("--combos", config.combos, "Combinations to sample");
  run->add_option("--layouts", config.layouts, "Random layouts in the pool");
  run->add_option("--length", config.length, "Sequence length (overhead)");
  run->add_option("--afu-delta", config.afu_deltas, "Slots changed per step (repeatable)");
  run->add_option("--seed", config.seed, "Base seed");
  run->add_option("--routability-cap", config.routability_cap, "Usable capacity fraction");
  run->add_option("--bandwidth", config.bandwidth_bytes_per_second,
                  "Configuration port bytes/second");
  run->add_option("--energy-per-byte", config.energy_per_byte, "Joules per byte (0 = off)");
  run->add_option("--afu-logic-demand", config.afu_logic_demand, "Logic cells per nonzero AFU");
  run->add_option("--calibration-combos", config.calibration_combos,
                  "Combos for picking the best-effort layout in overhead runs");
  run->add_flag("--approximate-delta{false}", config.exact_delta,
                "Allow steps to change fewer slots than afu-delta");
  run->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  run->add_option("--out", config.out_csv, "Results CSV path (default stdout)");
  run->add_option("--manifest", manifest_path, "Write a replayable manifest here");
  run->add_option("--from-manifest", from_manifest, "Replay a saved manifest");

  CLI::App* sweep = app.add_subcommand("sweep", "Replay the full experimental grid");
  sweep->add_option("--experiment", config.experiment, "placement|overhead|all");
  sweep->add_option("--config-dir", config_dir, "Directory with the bundled device configs");
  sweep->add_option("--combos", config.combos, "Combinations per placement cell");
  sweep->add_option("--layouts", config.layouts, "Random layouts in the pool");
  sweep->add_option("--length", config.length, "Sequence length (overhead)");
  sweep->add_option("--afu-delta", config.afu_deltas, "Slots changed per step (repeatable)");
  sweep->add_option("--seed", config.seed, "Base seed");
  sweep->add_option("--routability-cap", config.routability_cap, "Usable capacity fraction");
  sweep->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  sweep->add_option("--out", config.out_csv, "Results CSV path (default stdout)");
  sweep->add_option("--manifest", manifest_path, "Write a replayable manifest here");

  std::string table_in;
  CLI::App* table = app.add_subcommand("table", "Pretty-print a results CSV");
  table->add_option("--in", table_in, "Results CSV")->required();

  std::string pool_device;
  std::string pool_out;
  int pool_count = 1000;
  std::uint64_t pool_seed = 1;
  CLI::App* layouts_cmd = app.add_subcommand("layouts", "Dump a layout pool");
  layouts_cmd->add_option("--device", pool_device, "Device config JSON")->required();
  layouts_cmd->add_option("--count", pool_count, "Random layouts beyond the stripe layout");
  layouts_cmd->add_option("--seed", pool_seed, "Base seed");
  layouts_cmd->add_option("--out", pool_out, "Pool JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      if (!from_manifest.empty()) {
        const std::string out_override = config.out_csv;
        config = load_manifest(from_manifest);
        if (run->count("--out") > 0) config.out_csv = out_override;
        if (config.command == "sweep") return cmd_sweep(config, config_dir, manifest_path);
        return cmd_run(config, manifest_path);
      }
      config.command = "run";
      return cmd_run(config, manifest_path);
    }
    if (sweep->parsed()) {
      config.command = "sweep";
      if (config.experiment == "placement" && sweep->count("--experiment") == 0) {
        config.experiment = "all";
      }
      return cmd_sweep(config, config_dir, manifest_path);
    }
    if (table->parsed()) return cmd_table(table_in);
    if (layouts_cmd->parsed()) return cmd_layouts(pool_device, pool_count, pool_seed, pool_out);
  } catch (const SequenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSequence;
  } catch (const LayoutError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitLayout;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitOk;
}
