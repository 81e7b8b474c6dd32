#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "adpr/afu.hpp"
#include "adpr/device.hpp"
#include "adpr/experiments.hpp"
#include "adpr/layout.hpp"

namespace adpr {

// --- device configuration -------------------------------------------------

DeviceConfig device_config_from_json(const nlohmann::json& j);
nlohmann::json device_config_to_json(const DeviceConfig& config);

// Parses, validates and builds in one step. Throws ConfigError with the file
// path in the message on parse or validation failure.
Device load_device(const std::string& path);

// --- layout pools ----------------------------------------------------------

nlohmann::json layout_to_json(const Layout& layout);
Layout layout_from_json(const Device& device, const nlohmann::json& j);

void save_layout_pool(const std::string& path, const Device& device,
                      std::span<const Layout> layouts);
std::vector<Layout> load_layout_pool(const std::string& path,
                                     const Device& device);

// --- bitstream databases ---------------------------------------------------

nlohmann::json db_to_json(const BitstreamDb& db);
BitstreamDb db_from_json(const Device& device, const nlohmann::json& j);

// One line per AFU: version count, min/max bytes. For eyeballing a database.
std::string db_summary_csv(const BitstreamDb& db);

// --- result tables ----------------------------------------------------------

struct ResultRow {
  std::string workload;
  std::string difficulty;
  std::string system;   // naive | best_effort | amorphous | sequence
  std::string metric;   // e.g. placement_rate, mean_transition_seconds@delta2
  double value = 0.0;
  std::uint64_t seed = 0;
};

// Long-format CSV with a "# adpr-results v1" header line. Values are written
// with std::to_chars, so files are byte-stable across runs and locales.
void write_results_csv(const std::string& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results_csv(const std::string& path);

// --- run manifests ----------------------------------------------------------

// Everything needed to replay a run: command, inputs, knobs, seed.
struct RunConfig {
  std::string command = "run";        // run | sweep
  std::string experiment = "placement";  // placement | overhead | all
  std::string device_path;
  std::string workload = "bram";
  std::string difficulty = "easy";
  int combos = 1000;
  int layouts = 1000;
  int length = 1000;
  std::vector<int> afu_deltas = {1};
  std::uint64_t seed = 1;
  double routability_cap = 0.70;
  double bandwidth_bytes_per_second = 128.0 * 1024.0 * 1024.0;
  double energy_per_byte = 0.0;  // 0 disables energy rows
  long long afu_logic_demand = 500;
  int calibration_combos = 1000;
  bool exact_delta = true;
  int threads = 0;  // 0 = hardware concurrency
  std::string out_csv;
};

nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);
void save_manifest(const std::string& path, const RunConfig& config);
RunConfig load_manifest(const std::string& path);

ExperimentOptions experiment_options_from(const RunConfig& config);

}  // namespace adpr
