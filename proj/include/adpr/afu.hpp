#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adpr/device.hpp"
#include "adpr/footprint.hpp"
#include "adpr/layout.hpp"
#include "adpr/resources.hpp"

namespace adpr {

// An accelerator function with a resource demand. Zero-demand AFUs stand for
// "leave this slot empty" and are placeable anywhere for free.
struct AfuSpec {
  std::string id;
  ResourceVector demand;
  InterfaceKind interface_kind = InterfaceKind::Both;

  bool zero_demand() const { return demand.is_zero(); }
};

// One synthesised configuration: an AFU bound to a concrete footprint.
struct BitstreamVersion {
  std::string afu_id;
  Footprint footprint;
  std::uint64_t bytes = 0;
};

struct SynthesisResult {
  std::optional<BitstreamVersion> version;
  // First violated resource kind (logic, then BRAM, then DSP) when infeasible.
  std::optional<ResourceKind> first_violated;

  bool feasible() const { return version.has_value(); }
};

// Checks a demand against a capacity derated by `cap` (the routability
// headroom). Logic is always checked; BRAM and DSP only where demanded.
// Thresholds are evaluated in integer arithmetic so results are exact.
std::optional<ResourceKind> fit_violation(const ResourceVector& demand,
                                          const ResourceVector& capacity,
                                          double cap);

// Maps an AFU onto a footprint. The footprint must be valid and the AFU
// attachable to its interface (throws Error otherwise); feasible iff the
// demand fits the derated footprint capacity.
SynthesisResult synthesize(const Device& device, const AfuSpec& afu,
                           const Footprint& footprint, double cap,
                           const SizeModel& model = {});

// Grows up to `k` footprints for `demand` outward from the interface's
// termination cells, one per shape weighting (balanced, wide, tall, ...).
// Foreign termination cells are never consumed. Returns fewer than `k`
// entries when variants degenerate to the same growth or the demand does not
// fit even the whole reachable region (then the list is empty). Every
// returned footprint is valid and fits the demand under `cap`.
std::vector<Footprint> generate_footprints_heuristic(const Device& device,
                                                     const Interface& iface,
                                                     const ResourceVector& demand,
                                                     int k, double cap);

// The bitstream database: interned footprints plus (afu, footprint, bytes)
// entries, deduplicated by AFU and cell set.
class BitstreamDb {
 public:
  struct Entry {
    std::string afu_id;
    int footprint_index = -1;
    std::uint64_t bytes = 0;
  };

  // Returns false (and stores nothing) when an entry for the same AFU and the
  // same footprint cells already exists.
  bool insert(const BitstreamVersion& version);

  int footprint_count() const { return static_cast<int>(footprints_.size()); }
  const Footprint& footprint(int index) const { return footprints_.at(static_cast<std::size_t>(index)); }
  // Index of an interned footprint, -1 when the pool does not hold it.
  int footprint_index_of(const Footprint& fp) const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Entry indices for one AFU, sorted by (bytes, footprint index) so cheaper
  // versions come first. Empty when the AFU has no version.
  std::span<const int> candidates(const std::string& afu_id) const;

  std::vector<std::string> afu_ids() const;

 private:
  std::vector<Footprint> footprints_;
  std::unordered_map<std::string, int> footprint_index_by_key_;
  std::vector<Entry> entries_;
  mutable std::unordered_map<std::string, std::vector<int>> entries_by_afu_;
  std::set<std::pair<std::string, int>> seen_;
  mutable bool sorted_ = true;
  void sort_candidates() const;
};

struct DbBuildOptions {
  double routability_cap = 0.70;
  SizeModel size_model;
  // When set, keep only the cheapest N versions per (AFU, interface) pair.
  std::optional<int> max_versions_per_interface;
};

// Adopts every feasible (layout partition, compatible AFU) pairing into a
// database. Each layout's partitions contribute independently, so every
// placement any single layout supports remains expressible.
BitstreamDb build_db_from_layouts(const Device& device,
                                  std::span<const Layout> layouts,
                                  std::span<const AfuSpec> afus,
                                  const DbBuildOptions& options = {});

}  // namespace adpr
