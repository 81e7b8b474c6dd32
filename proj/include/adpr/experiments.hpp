#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adpr/device.hpp"
#include "adpr/layout.hpp"
#include "adpr/packing.hpp"
#include "adpr/workloads.hpp"

namespace adpr {

struct OverheadModel {
  // PCAP-style configuration port: 128 MiB/s.
  double bandwidth_bytes_per_second = 128.0 * 1024.0 * 1024.0;
  // Optional energy accounting per transferred byte (joules).
  std::optional<double> energy_per_byte = std::nullopt;
};

// Seconds to reconfigure from `prev` to `next`: every interface whose
// (AFU, footprint) assignment changed bills the incoming version's bytes;
// unchanged assignments and emptied slots bill nothing.
double transition_time(const Placement& prev, const Placement& next,
                       const OverheadModel& model);
std::uint64_t transition_bytes(const Placement& prev, const Placement& next);

struct ExperimentOptions {
  double routability_cap = 0.70;
  SizeModel size_model;
  OverheadModel overhead;
  LayoutGenOptions layout_gen;
  SequenceOptions sequence;
  // Combinations used to score layouts when an experiment needs a best-effort
  // pick but the caller did not supply one (overhead runs).
  int calibration_combos = 1000;
  std::optional<int> max_versions_per_interface;
  int threads = 1;
};

struct PlacementExperimentResult {
  double naive_rate = 0.0;
  double best_effort_rate = 0.0;
  double amorphous_rate = 0.0;
  int best_layout_index = 0;
  int n_combos = 0;
  int n_layouts = 0;
  // Per-combination verdicts (1 = placeable), index-aligned with the sampled
  // combinations.
  std::vector<std::uint8_t> naive_verdicts;
  std::vector<std::uint8_t> best_effort_verdicts;
  std::vector<std::uint8_t> amorphous_verdicts;
};

// Placement-rate experiment: a layout pool of the deterministic stripe layout
// plus `n_layouts` random layouts, `n_combos` slot-uniform combinations, and
// the three systems scored on the same combinations. The bitstream database
// adopts every partition of every pooled layout, so the amorphous rate
// structurally dominates both fixed-partition rates.
PlacementExperimentResult run_placement_experiment(const Device& device,
                                                   const WorkloadSpec& workload,
                                                   int n_combos, int n_layouts,
                                                   std::uint64_t seed,
                                                   const ExperimentOptions& options = {});

struct TransitionStats {
  double mean_seconds = 0.0;
  double max_seconds = 0.0;
  double total_seconds = 0.0;
  std::uint64_t total_bytes = 0;
  int transitions = 0;
  // Steps where retaining unchanged slots failed and the whole combination
  // was repacked from scratch.
  int full_repacks = 0;
  std::vector<double> per_transition_seconds;
};

struct OverheadExperimentResult {
  bool completed = false;
  // Steps of the sequence actually built (== length when completed).
  int steps_built = 0;
  int afu_delta = 0;
  int best_layout_index = 0;
  TransitionStats standard_stats;
  TransitionStats amorphous_stats;
};

// Reconfiguration-overhead experiment: builds the layout pool and database as
// in the placement experiment, scores layouts on calibration combinations to
// pick the fixed-partition layout, then walks a sequence (each step feasible
// for both systems, consecutive steps differing in `afu_delta` slots) billing
// both systems under retain-then-repack. An unconstructible sequence yields
// completed == false with the steps built so far and no stats.
OverheadExperimentResult run_overhead_experiment(const Device& device,
                                                 const WorkloadSpec& workload,
                                                 int length, int afu_delta,
                                                 int n_layouts,
                                                 std::uint64_t seed,
                                                 const ExperimentOptions& options = {});

}  // namespace adpr
