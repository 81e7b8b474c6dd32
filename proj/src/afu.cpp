#include "adpr/afu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "adpr/errors.hpp"

namespace adpr {

std::optional<ResourceKind> fit_violation(const ResourceVector& demand,
                                          const ResourceVector& capacity,
                                          double cap) {
  // Parts-per-million keeps the threshold exact: demand <= cap * capacity
  // becomes demand * 1e6 <= round(cap * 1e6) * capacity in integers.
  const long long cap_ppm = std::llround(cap * 1e6);
  auto violated = [&](long long d, long long c) { return d * 1000000 > cap_ppm * c; };
  if (violated(demand.logic_cells, capacity.logic_cells)) return ResourceKind::LogicCell;
  if (demand.bram > 0 && violated(demand.bram, capacity.bram)) return ResourceKind::Bram;
  if (demand.dsp > 0 && violated(demand.dsp, capacity.dsp)) return ResourceKind::Dsp;
  return std::nullopt;
}

SynthesisResult synthesize(const Device& device, const AfuSpec& afu,
                           const Footprint& footprint, double cap,
                           const SizeModel& model) {
  auto report = validate_footprint(device, footprint);
  if (!report.valid()) {
    throw Error("synthesize: footprint is not valid for interface " +
                std::to_string(footprint.interface_id));
  }
  const Interface& iface = device.interface_by_id(footprint.interface_id);
  if (!afu_can_attach(afu.interface_kind, iface.kind)) {
    throw Error("synthesize: AFU '" + afu.id + "' cannot attach to interface " +
                std::to_string(iface.id));
  }
  const ResourceVector capacity = region_capacity(device, footprint.cells);
  if (auto kind = fit_violation(afu.demand, capacity, cap)) {
    return SynthesisResult{std::nullopt, kind};
  }
  return SynthesisResult{
      BitstreamVersion{afu.id, footprint, bitstream_bytes(device, footprint.cells, model)},
      std::nullopt};
}

std::vector<Footprint> generate_footprints_heuristic(const Device& device,
                                                     const Interface& iface,
                                                     const ResourceVector& demand,
                                                     int k, double cap) {
  std::vector<Footprint> out;
  if (k <= 0) return out;

  const CellSet& all_term = device.all_termination();
  const Cell anchor = iface.termination.cells().front();
  // Interfaces on the right half of the region consume columns from the
  // bottom row first, mirroring the left half's top-first order.
  int col_lo = std::numeric_limits<int>::max();
  int col_hi = std::numeric_limits<int>::min();
  device.region().for_each([&](Cell c) {
    col_lo = std::min(col_lo, c.col);
    col_hi = std::max(col_hi, c.col);
  });
  const bool prefer_low_rows = 2 * (anchor.col - col_lo) >= (col_hi - col_lo);

  // Shape weights: balanced, then increasingly wide / tall alternations.
  auto variant_weights = [](int v) {
    if (v == 0) return std::pair<int, int>{1, 1};
    const int step = 1 + (v + 1) / 2;
    return (v % 2 == 1) ? std::pair<int, int>{1, step} : std::pair<int, int>{step, 1};
  };

  for (int v = 0; v < k; ++v) {
    const auto [w_col, w_row] = variant_weights(v);
    CellSet cells = iface.termination;
    bool dead_end = false;
    while (!dead_end) {
      if (is_connected(cells) &&
          !fit_violation(demand, region_capacity(device, cells), cap)) {
        break;
      }
      bool found = false;
      long long best_score = 0;
      Cell best{};
      CellSet considered = device.empty_set();
      cells.for_each([&](Cell c) {
        for (Cell nb : {Cell{c.col - 1, c.row}, Cell{c.col + 1, c.row},
                        Cell{c.col, c.row - 1}, Cell{c.col, c.row + 1}}) {
          if (!cells.in_bounds(nb) || !device.in_region(nb)) continue;
          if (cells.test(nb) || considered.test(nb)) continue;
          if (all_term.test(nb) && !iface.termination.test(nb)) continue;
          considered.set(nb);
          const long long score =
              static_cast<long long>(w_col) * std::abs(nb.col - anchor.col) +
              static_cast<long long>(w_row) * std::abs(nb.row - anchor.row);
          const int row_rank = prefer_low_rows ? nb.row : -nb.row;
          const int best_row_rank = prefer_low_rows ? best.row : -best.row;
          if (!found || score < best_score ||
              (score == best_score &&
               std::tie(row_rank, nb.col) < std::tie(best_row_rank, best.col))) {
            found = true;
            best_score = score;
            best = nb;
          }
        }
      });
      if (!found) {
        dead_end = true;
      } else {
        cells.set(best);
      }
    }
    if (dead_end) continue;
    Footprint fp{iface.id, cells};
    // Different shape weights often converge on the same growth; keep one.
    const std::string key = canonical_key(fp);
    bool duplicate = false;
    for (const Footprint& prev : out) {
      if (canonical_key(prev) == key) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.push_back(std::move(fp));
  }
  return out;
}

bool BitstreamDb::insert(const BitstreamVersion& version) {
  const std::string key = canonical_key(version.footprint);
  int fp_index;
  if (auto it = footprint_index_by_key_.find(key); it != footprint_index_by_key_.end()) {
    fp_index = it->second;
  } else {
    fp_index = static_cast<int>(footprints_.size());
    footprints_.push_back(version.footprint);
    footprint_index_by_key_.emplace(key, fp_index);
  }
  if (!seen_.emplace(version.afu_id, fp_index).second) return false;
  const int entry_index = static_cast<int>(entries_.size());
  entries_.push_back(Entry{version.afu_id, fp_index, version.bytes});
  entries_by_afu_[version.afu_id].push_back(entry_index);
  sorted_ = false;
  return true;
}

void BitstreamDb::sort_candidates() const {
  for (auto& [afu, indices] : entries_by_afu_) {
    std::sort(indices.begin(), indices.end(), [&](int a, int b) {
      const Entry& ea = entries_[static_cast<std::size_t>(a)];
      const Entry& eb = entries_[static_cast<std::size_t>(b)];
      return std::tie(ea.bytes, ea.footprint_index) < std::tie(eb.bytes, eb.footprint_index);
    });
  }
  sorted_ = true;
}

int BitstreamDb::footprint_index_of(const Footprint& fp) const {
  auto it = footprint_index_by_key_.find(canonical_key(fp));
  return it == footprint_index_by_key_.end() ? -1 : it->second;
}

std::span<const int> BitstreamDb::candidates(const std::string& afu_id) const {
  if (!sorted_) sort_candidates();
  auto it = entries_by_afu_.find(afu_id);
  if (it == entries_by_afu_.end()) return {};
  return it->second;
}

std::vector<std::string> BitstreamDb::afu_ids() const {
  std::vector<std::string> ids;
  ids.reserve(entries_by_afu_.size());
  for (const auto& [afu, indices] : entries_by_afu_) ids.push_back(afu);
  std::sort(ids.begin(), ids.end());
  return ids;
}

BitstreamDb build_db_from_layouts(const Device& device,
                                  std::span<const Layout> layouts,
                                  std::span<const AfuSpec> afus,
                                  const DbBuildOptions& options) {
  BitstreamDb db;
  for (const Layout& layout : layouts) {
    for (const Footprint& fp : layout.partitions) {
      const Interface& iface = device.interface_by_id(fp.interface_id);
      for (const AfuSpec& afu : afus) {
        if (afu.zero_demand()) continue;  // empty slots need no bitstream
        if (!afu_can_attach(afu.interface_kind, iface.kind)) continue;
        SynthesisResult r =
            synthesize(device, afu, fp, options.routability_cap, options.size_model);
        if (r.feasible()) db.insert(*r.version);
      }
    }
  }
  if (!options.max_versions_per_interface) return db;

  // Keep only the cheapest N per (AFU, interface); rebuild preserving the
  // original entry order so indices stay meaningful.
  const int limit = *options.max_versions_per_interface;
  std::vector<char> keep(db.entries().size(), 0);
  for (const std::string& afu : db.afu_ids()) {
    std::map<int, int> kept_per_iface;
    for (int e : db.candidates(afu)) {
      const int iface = db.footprint(db.entries()[static_cast<std::size_t>(e)].footprint_index)
                            .interface_id;
      if (kept_per_iface[iface] < limit) {
        ++kept_per_iface[iface];
        keep[static_cast<std::size_t>(e)] = 1;
      }
    }
  }
  BitstreamDb pruned;
  for (std::size_t e = 0; e < db.entries().size(); ++e) {
    if (!keep[e]) continue;
    const BitstreamDb::Entry& entry = db.entries()[e];
    pruned.insert(BitstreamVersion{entry.afu_id, db.footprint(entry.footprint_index), entry.bytes});
  }
  return pruned;
}

}  // namespace adpr
