#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adpr/afu.hpp"
#include "adpr/combination.hpp"
#include "adpr/device.hpp"
#include "adpr/layout.hpp"

namespace adpr {

class AfuCatalog {
 public:
  AfuCatalog() = default;
  explicit AfuCatalog(std::span<const AfuSpec> afus);

  const AfuSpec& at(const std::string& id) const;
  bool contains(const std::string& id) const;
  std::size_t size() const { return by_id_.size(); }
  const std::map<std::string, AfuSpec>& all() const { return by_id_; }

 private:
  std::map<std::string, AfuSpec> by_id_;
};

struct Assignment {
  int slot = -1;
  std::string afu_id;
  int interface_id = -1;
  Footprint footprint;
  std::uint64_t bytes = 0;
};

// A full answer for one combination: one assignment per nonzero-demand slot,
// in ascending slot order. Zero-demand slots are omitted.
struct Placement {
  std::vector<Assignment> assignments;
};

struct PackResult {
  std::optional<Placement> placement;
  // On failure, a slot that could not be served (standard packing reports the
  // first slot where matching got stuck).
  int witness_slot = -1;
  std::string witness_afu;
  std::uint64_t nodes = 0;

  bool feasible() const { return placement.has_value(); }
};

// Fixed-partition packing context: precomputes the per-(AFU, partition) fit
// table for one layout so repeated combinations are cheap.
class StandardOracle {
 public:
  StandardOracle(const Device& device, const Layout& layout,
                 const AfuCatalog& catalog, double cap,
                 const SizeModel& model = {});

  // Assigns every nonzero slot to a distinct partition whose interface kind
  // accepts the AFU and whose derated capacity covers the demand (bipartite
  // matching). Definitive: infeasible results carry an unmatched witness.
  PackResult pack(const Combination& combo) const;

  // Matching restricted to `free_partitions` for the given slots; used by the
  // retention policy to keep untouched slots in place. Assignments for the
  // retained slots are not included.
  PackResult pack_partial(const Combination& combo,
                          std::span<const int> slots,
                          std::span<const int> free_partitions) const;

  const Layout& layout() const { return *layout_; }

 private:
  const Layout* layout_;
  const AfuCatalog* catalog_;
  std::vector<ResourceVector> partition_capacity_;
  std::vector<InterfaceKind> partition_kind_;
  std::vector<std::uint64_t> partition_bytes_;
  double cap_;
  // fit_mask_[catalog index] has bit j set iff the AFU fits partition j.
  std::map<std::string, int> afu_index_;
  std::vector<std::uint32_t> fit_mask_;
};

PackResult feasible_standard(const Device& device, const Layout& layout,
                             const Combination& combo,
                             const AfuCatalog& catalog, double cap,
                             const SizeModel& model = {});

// Amorphous packing context over a bitstream database: picks one version per
// nonzero slot so interfaces are distinct and footprints pairwise disjoint.
// Complete backtracking search, so negatives are definitive.
class AmorphousPacker {
 public:
  AmorphousPacker(const Device& device, const BitstreamDb& db,
                  const AfuCatalog& catalog);

  PackResult pack(const Combination& combo) const;

  // Packs only `slots`, with `used_interfaces` and the cells of
  // `occupied_footprints` (footprint indices into the db pool) already taken.
  PackResult pack_partial(const Combination& combo, std::span<const int> slots,
                          std::span<const int> used_interfaces,
                          std::span<const int> occupied_footprints) const;

  const BitstreamDb& db() const { return *db_; }

 private:
  const Device* device_;
  const BitstreamDb* db_;
  const AfuCatalog* catalog_;
  int words_ = 0;
  int n_ifaces_ = 0;
  // conflicts_[i] is a bitset over footprint indices that overlap footprint i.
  std::vector<std::vector<std::uint64_t>> conflicts_;
  std::vector<ResourceVector> footprint_capacity_;
  std::vector<long long> footprint_cells_;
  ResourceVector region_totals_;
  long long region_cells_ = 0;

  // Search candidates per (AFU, interface): superset-dominated versions are
  // dropped (a subset can always stand in for its superset), which preserves
  // feasibility decisions exactly while shrinking the branching factor.
  struct CandidateGroup {
    std::vector<int> entries;  // db entry indices, cheapest first
    ResourceVector min_capacity;
    long long min_cells = 0;
  };
  struct AfuCandidates {
    std::vector<CandidateGroup> by_interface;
    ResourceVector min_capacity;  // least capacity any candidate occupies
    long long min_cells = 0;
    std::size_t total = 0;
  };
  std::map<std::string, AfuCandidates> candidates_;

  PackResult search(const Combination& combo, const std::vector<int>& slots,
                    std::uint32_t used_ifaces,
                    const std::vector<std::uint64_t>& base_conflict,
                    const ResourceVector& base_res, long long base_cells) const;
};

PackResult feasible_amorphous(const Device& device, const BitstreamDb& db,
                              const Combination& combo,
                              const AfuCatalog& catalog);

// Independent exhaustive oracle: enumerates every per-slot version choice in
// ascending database-entry order (last slot fastest) and returns the first
// selection with distinct interfaces and pairwise-disjoint cell sets,
// checking overlaps directly on the cell sets. Throws BoundError when the
// product of candidate counts exceeds `bound`.
PackResult brute_force_pack(const Device& device, const BitstreamDb& db,
                            const Combination& combo,
                            const AfuCatalog& catalog,
                            std::uint64_t bound = 1000000);

double placement_rate(const std::function<bool(const Combination&)>& feasible,
                      std::span<const Combination> combos);

}  // namespace adpr
