#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "adpr/combination.hpp"
#include "adpr/device.hpp"
#include "adpr/footprint.hpp"
#include "adpr/rng.hpp"

namespace adpr {

// A fixed partitioning of the uncommitted region: one partition per interface,
// indexed by interface id. Partitions tile the region (disjoint, full cover)
// and each is a valid footprint for its interface.
struct Layout {
  std::vector<Footprint> partitions;

  friend bool operator==(const Layout&, const Layout&) = default;
};

// Splits the region into vertical stripes, one per interface ordered by the
// column extent of their termination cells. Picks stripe boundaries that
// minimise the worst per-kind deviation from an equal split (ties broken
// toward the lexicographically smallest boundary vector). With a single
// interface the whole region is its partition. Throws LayoutError when no
// stripe assignment yields valid partitions.
Layout naive_layout(const Device& device);

struct LayoutGenOptions {
  // Spread of the per-interface growth weights, w = exp(spread * (2u - 1)).
  double weight_spread = 2.0;
  // Partitions must claim at least this many cells beyond their termination.
  int min_extra_cells = 1;
  // Attempt budget: n * factor + slack attempts to collect n distinct layouts.
  int max_attempt_factor = 10;
  int max_attempt_slack = 100;
};

// Draws `n` distinct random layouts by growing all partitions concurrently
// from their termination cells with per-layout random interface weights.
// Layouts that fail validity or the minimum-size rule are discarded without
// counting. Throws LayoutError (carrying the count produced) if the attempt
// budget runs out first.
std::vector<Layout> random_layouts(const Device& device, int n, Rng& rng,
                                   const LayoutGenOptions& options = {});

struct BestLayout {
  int index = -1;
  double rate = 0.0;
};

using PackOracle = std::function<bool(const Layout&, const Combination&)>;

// Scores every layout by the fraction of combinations the oracle accepts and
// returns the best one (ties resolved to the lowest index). `threads` > 1
// evaluates layouts in parallel; results are identical at any thread count.
BestLayout best_effort_layout(std::span<const Layout> layouts,
                              std::span<const Combination> combos,
                              const PackOracle& oracle, int threads = 1);

}  // namespace adpr
