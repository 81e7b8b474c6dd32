#include "adpr/experiments.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "adpr/errors.hpp"
#include "adpr/parallel.hpp"

namespace adpr {

std::uint64_t transition_bytes(const Placement& prev, const Placement& next) {
  std::map<int, const Assignment*> before;
  for (const Assignment& a : prev.assignments) before[a.interface_id] = &a;
  std::uint64_t bytes = 0;
  for (const Assignment& a : next.assignments) {
    auto it = before.find(a.interface_id);
    const bool unchanged = it != before.end() && it->second->afu_id == a.afu_id &&
                           it->second->footprint == a.footprint;
    if (!unchanged) bytes += a.bytes;
  }
  return bytes;
}

double transition_time(const Placement& prev, const Placement& next,
                       const OverheadModel& model) {
  return static_cast<double>(transition_bytes(prev, next)) / model.bandwidth_bytes_per_second;
}

namespace {

struct Pipeline {
  std::vector<AfuSpec> library;
  AfuCatalog catalog;
  std::vector<Layout> pool;
  std::vector<std::unique_ptr<StandardOracle>> oracles;
  std::vector<double> rates;
  int best_index = 0;
  BitstreamDb db;
  std::unique_ptr<AmorphousPacker> packer;
};

// Shared front half of both experiments: library, layout pool, per-layout
// standard oracles scored on `combos`, database over the whole pool, packer.
Pipeline build_pipeline(const Device& device, const WorkloadSpec& workload,
                        std::span<const Combination> combos, int n_layouts,
                        std::uint64_t seed, const ExperimentOptions& options) {
  Pipeline p;
  p.library = build_library(workload);
  p.catalog = AfuCatalog(p.library);

  Rng layout_rng = Rng::with_base(seed, rng_tag::layouts);
  p.pool.push_back(naive_layout(device));
  if (n_layouts > 0) {
    auto randoms = random_layouts(device, n_layouts, layout_rng, options.layout_gen);
    p.pool.insert(p.pool.end(), std::make_move_iterator(randoms.begin()),
                  std::make_move_iterator(randoms.end()));
  }

  p.oracles.resize(p.pool.size());
  for (std::size_t i = 0; i < p.pool.size(); ++i) {
    p.oracles[i] = std::make_unique<StandardOracle>(device, p.pool[i], p.catalog,
                                                    options.routability_cap,
                                                    options.size_model);
  }
  p.rates.assign(p.pool.size(), 0.0);
  parallel_for(p.pool.size(), options.threads, [&](std::size_t i) {
    std::size_t hits = 0;
    for (const Combination& combo : combos) {
      if (p.oracles[i]->pack(combo).feasible()) ++hits;
    }
    p.rates[i] = combos.empty() ? 0.0
                                : static_cast<double>(hits) / static_cast<double>(combos.size());
  });
  p.best_index = 0;
  for (std::size_t i = 1; i < p.rates.size(); ++i) {
    if (p.rates[i] > p.rates[static_cast<std::size_t>(p.best_index)]) {
      p.best_index = static_cast<int>(i);
    }
  }

  DbBuildOptions db_options;
  db_options.routability_cap = options.routability_cap;
  db_options.size_model = options.size_model;
  db_options.max_versions_per_interface = options.max_versions_per_interface;
  p.db = build_db_from_layouts(device, p.pool, p.library, db_options);
  p.packer = std::make_unique<AmorphousPacker>(device, p.db, p.catalog);
  return p;
}

}  // namespace

PlacementExperimentResult run_placement_experiment(const Device& device,
                                                   const WorkloadSpec& workload,
                                                   int n_combos, int n_layouts,
                                                   std::uint64_t seed,
                                                   const ExperimentOptions& options) {
  const int n_slots = static_cast<int>(device.interfaces().size());
  std::vector<AfuSpec> library = build_library(workload);
  Rng combo_rng = Rng::with_base(seed, rng_tag::combos);
  std::vector<Combination> combos = sample_combinations(library, n_combos, n_slots, combo_rng);

  Pipeline p = build_pipeline(device, workload, combos, n_layouts, seed, options);

  PlacementExperimentResult result;
  result.n_combos = n_combos;
  result.n_layouts = n_layouts;
  result.best_layout_index = p.best_index;
  result.naive_rate = p.rates.empty() ? 0.0 : p.rates[0];
  result.best_effort_rate = p.rates[static_cast<std::size_t>(p.best_index)];

  result.naive_verdicts.assign(combos.size(), 0);
  result.best_effort_verdicts.assign(combos.size(), 0);
  result.amorphous_verdicts.assign(combos.size(), 0);
  parallel_for(combos.size(), options.threads, [&](std::size_t i) {
    result.naive_verdicts[i] = p.oracles[0]->pack(combos[i]).feasible() ? 1 : 0;
    result.best_effort_verdicts[i] =
        p.oracles[static_cast<std::size_t>(p.best_index)]->pack(combos[i]).feasible() ? 1 : 0;
    result.amorphous_verdicts[i] = p.packer->pack(combos[i]).feasible() ? 1 : 0;
  });
  std::size_t amorph_hits = 0;
  for (std::uint8_t v : result.amorphous_verdicts) amorph_hits += v;
  result.amorphous_rate =
      combos.empty() ? 0.0 : static_cast<double>(amorph_hits) / static_cast<double>(combos.size());
  return result;
}

namespace {

std::vector<int> retained_slots(const Combination& prev, const Combination& next) {
  std::vector<int> out;
  for (std::size_t s = 0; s < next.slots.size(); ++s) {
    if (prev.slots[s] == next.slots[s]) out.push_back(static_cast<int>(s));
  }
  return out;
}

// Retain-then-repack for the fixed-partition system: unchanged slots keep
// their partitions, changed slots are matched into the free ones; on failure
// the whole combination is repacked from scratch.
Placement step_standard(const StandardOracle& oracle, const Combination& prev_combo,
                        const Combination& next_combo, const Placement& prev,
                        bool& full_repack) {
  full_repack = false;
  std::vector<int> keep = retained_slots(prev_combo, next_combo);
  std::vector<Assignment> kept;
  std::vector<int> used_partitions;
  std::map<int, int> partition_by_iface;
  for (std::size_t j = 0; j < oracle.layout().partitions.size(); ++j) {
    partition_by_iface[oracle.layout().partitions[j].interface_id] = static_cast<int>(j);
  }
  for (const Assignment& a : prev.assignments) {
    if (std::binary_search(keep.begin(), keep.end(), a.slot)) {
      kept.push_back(a);
      used_partitions.push_back(partition_by_iface.at(a.interface_id));
    }
  }
  std::vector<int> changed;
  for (std::size_t s = 0; s < next_combo.slots.size(); ++s) {
    if (!std::binary_search(keep.begin(), keep.end(), static_cast<int>(s))) {
      changed.push_back(static_cast<int>(s));
    }
  }
  std::vector<int> free_partitions;
  for (std::size_t j = 0; j < oracle.layout().partitions.size(); ++j) {
    if (!std::count(used_partitions.begin(), used_partitions.end(), static_cast<int>(j))) {
      free_partitions.push_back(static_cast<int>(j));
    }
  }
  PackResult partial = oracle.pack_partial(next_combo, changed, free_partitions);
  if (partial.feasible()) {
    Placement next;
    next.assignments = kept;
    next.assignments.insert(next.assignments.end(), partial.placement->assignments.begin(),
                            partial.placement->assignments.end());
    std::sort(next.assignments.begin(), next.assignments.end(),
              [](const Assignment& a, const Assignment& b) { return a.slot < b.slot; });
    return next;
  }
  full_repack = true;
  PackResult full = oracle.pack(next_combo);
  if (!full.feasible()) throw Error("sequence step infeasible for the fixed-partition system");
  return *full.placement;
}

Placement step_amorphous(const AmorphousPacker& packer, const Combination& prev_combo,
                         const Combination& next_combo, const Placement& prev,
                         bool& full_repack) {
  full_repack = false;
  std::vector<int> keep = retained_slots(prev_combo, next_combo);
  std::vector<Assignment> kept;
  std::vector<int> used_ifaces;
  std::vector<int> occupied;
  for (const Assignment& a : prev.assignments) {
    if (std::binary_search(keep.begin(), keep.end(), a.slot)) {
      const int fp_index = packer.db().footprint_index_of(a.footprint);
      if (fp_index < 0) throw Error("retained footprint missing from the database pool");
      kept.push_back(a);
      used_ifaces.push_back(a.interface_id);
      occupied.push_back(fp_index);
    }
  }
  std::vector<int> changed;
  for (std::size_t s = 0; s < next_combo.slots.size(); ++s) {
    if (!std::binary_search(keep.begin(), keep.end(), static_cast<int>(s))) {
      changed.push_back(static_cast<int>(s));
    }
  }
  PackResult partial = packer.pack_partial(next_combo, changed, used_ifaces, occupied);
  if (partial.feasible()) {
    Placement next;
    next.assignments = kept;
    next.assignments.insert(next.assignments.end(), partial.placement->assignments.begin(),
                            partial.placement->assignments.end());
    std::sort(next.assignments.begin(), next.assignments.end(),
              [](const Assignment& a, const Assignment& b) { return a.slot < b.slot; });
    return next;
  }
  full_repack = true;
  PackResult full = packer.pack(next_combo);
  if (!full.feasible()) throw Error("sequence step infeasible for the amorphous system");
  return *full.placement;
}

void finish_stats(TransitionStats& stats, const OverheadModel& model) {
  stats.transitions = static_cast<int>(stats.per_transition_seconds.size());
  stats.total_seconds = 0.0;
  stats.max_seconds = 0.0;
  for (double s : stats.per_transition_seconds) {
    stats.total_seconds += s;
    stats.max_seconds = std::max(stats.max_seconds, s);
  }
  stats.mean_seconds = stats.transitions == 0 ? 0.0 : stats.total_seconds / stats.transitions;
  (void)model;
}

}  // namespace

OverheadExperimentResult run_overhead_experiment(const Device& device,
                                                 const WorkloadSpec& workload,
                                                 int length, int afu_delta, int n_layouts,
                                                 std::uint64_t seed,
                                                 const ExperimentOptions& options) {
  const int n_slots = static_cast<int>(device.interfaces().size());
  OverheadExperimentResult result;
  result.afu_delta = afu_delta;

  std::vector<AfuSpec> library = build_library(workload);
  Rng combo_rng = Rng::with_base(seed, rng_tag::combos);
  std::vector<Combination> calibration =
      sample_combinations(library, options.calibration_combos, n_slots, combo_rng);

  Pipeline p = build_pipeline(device, workload, calibration, n_layouts, seed, options);
  result.best_layout_index = p.best_index;
  const StandardOracle& standard = *p.oracles[static_cast<std::size_t>(p.best_index)];
  const AmorphousPacker& packer = *p.packer;

  const std::vector<CombinationValidator> validators = {
      [&](const Combination& c) { return standard.pack(c).feasible(); },
      [&](const Combination& c) { return packer.pack(c).feasible(); },
  };

  Rng seq_rng = Rng::with_base(seed, rng_tag::sequence);
  Sequence seq;
  try {
    seq = sample_sequence(p.library, length, afu_delta, n_slots, validators, seq_rng,
                          options.sequence);
  } catch (const SequenceError& e) {
    result.completed = false;
    result.steps_built = e.built;
    return result;
  }
  result.completed = true;
  result.steps_built = static_cast<int>(seq.combos.size());
  if (seq.combos.empty()) return result;

  PackResult std_first = standard.pack(seq.combos[0]);
  PackResult am_first = packer.pack(seq.combos[0]);
  if (!std_first.feasible() || !am_first.feasible()) {
    throw Error("validated opening combination failed to pack");
  }
  Placement prev_std = *std_first.placement;
  Placement prev_am = *am_first.placement;

  for (std::size_t t = 1; t < seq.combos.size(); ++t) {
    bool std_repack = false;
    bool am_repack = false;
    Placement next_std = step_standard(standard, seq.combos[t - 1], seq.combos[t], prev_std,
                                       std_repack);
    Placement next_am =
        step_amorphous(packer, seq.combos[t - 1], seq.combos[t], prev_am, am_repack);

    result.standard_stats.per_transition_seconds.push_back(
        transition_time(prev_std, next_std, options.overhead));
    result.standard_stats.total_bytes += transition_bytes(prev_std, next_std);
    result.standard_stats.full_repacks += std_repack ? 1 : 0;

    result.amorphous_stats.per_transition_seconds.push_back(
        transition_time(prev_am, next_am, options.overhead));
    result.amorphous_stats.total_bytes += transition_bytes(prev_am, next_am);
    result.amorphous_stats.full_repacks += am_repack ? 1 : 0;

    prev_std = std::move(next_std);
    prev_am = std::move(next_am);
  }
  finish_stats(result.standard_stats, options.overhead);
  finish_stats(result.amorphous_stats, options.overhead);
  return result;
}

}  // namespace adpr
