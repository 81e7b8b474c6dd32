#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "adpr/afu.hpp"
#include "adpr/combination.hpp"
#include "adpr/errors.hpp"
#include "adpr/rng.hpp"

namespace adpr {

enum class WorkloadFamily { Bram, Dsp, Mixed };
enum class Difficulty { Easy, Hard, Harder };

std::string to_string(WorkloadFamily family);
std::string to_string(Difficulty difficulty);
WorkloadFamily workload_family_from_string(const std::string& s);
Difficulty difficulty_from_string(const std::string& s);

inline constexpr WorkloadFamily all_workload_families[] = {
    WorkloadFamily::Bram, WorkloadFamily::Dsp, WorkloadFamily::Mixed};
inline constexpr Difficulty all_difficulties[] = {
    Difficulty::Easy, Difficulty::Hard, Difficulty::Harder};

struct WorkloadSpec {
  WorkloadFamily family = WorkloadFamily::Bram;
  Difficulty difficulty = Difficulty::Easy;
  // Logic demand attached to every nonzero AFU.
  long long logic_demand = 500;
};

// Demand ceiling for the family's stressed kind(s) at this difficulty.
long long demand_ceiling(WorkloadFamily family, Difficulty difficulty);

// The AFU library for one workload: a zero-demand "idle" entry plus one AFU
// per demand step of 5 up to the ceiling (memory-kind AFUs for Bram,
// streaming for Dsp, both ladders for Mixed). Ids look like "bram05",
// "dsp35"; demand values are embedded zero-padded so ids sort numerically.
std::vector<AfuSpec> build_library(const WorkloadSpec& spec);

// `n` combinations, each slot drawn uniformly and independently from the
// library (the idle entry is one outcome like any other).
std::vector<Combination> sample_combinations(std::span<const AfuSpec> library,
                                             int n, int n_slots, Rng& rng);

struct Sequence {
  std::vector<Combination> combos;
  int afu_delta = 0;
};

using CombinationValidator = std::function<bool(const Combination&)>;

struct SequenceOptions {
  // Redraw a slot until its AFU differs from the previous step (bounded), so
  // each step changes exactly `afu_delta` slots.
  bool exact_delta = true;
  int max_redraws_per_slot = 100;
  // Fresh attempts per step before giving up.
  int max_retries_per_step = 1000;
};

// A length-`length` random walk over combinations in which consecutive steps
// differ in exactly `afu_delta` slots and every step satisfies all
// validators. Throws SequenceError (carrying the number of steps built) when
// a step cannot be constructed within the retry budget.
Sequence sample_sequence(std::span<const AfuSpec> library, int length,
                         int afu_delta, int n_slots,
                         std::span<const CombinationValidator> validators,
                         Rng& rng, const SequenceOptions& options = {});

}  // namespace adpr
