#include "adpr/packing.hpp"

#include <algorithm>
#include <set>

#include "adpr/errors.hpp"

namespace adpr {

AfuCatalog::AfuCatalog(std::span<const AfuSpec> afus) {
  for (const AfuSpec& afu : afus) {
    if (!by_id_.emplace(afu.id, afu).second) {
      throw Error("duplicate AFU id '" + afu.id + "'");
    }
  }
}

const AfuSpec& AfuCatalog::at(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error("unknown AFU id '" + id + "'");
  return it->second;
}

bool AfuCatalog::contains(const std::string& id) const { return by_id_.count(id) != 0; }

StandardOracle::StandardOracle(const Device& device, const Layout& layout,
                               const AfuCatalog& catalog, double cap,
                               const SizeModel& model)
    : layout_(&layout), catalog_(&catalog), cap_(cap) {
  for (const Footprint& fp : layout.partitions) {
    partition_capacity_.push_back(region_capacity(device, fp.cells));
    partition_kind_.push_back(device.interface_by_id(fp.interface_id).kind);
    partition_bytes_.push_back(bitstream_bytes(device, fp.cells, model));
  }
  if (layout.partitions.size() > 32) throw Error("more partitions than the fit mask supports");
  int index = 0;
  for (const auto& [id, afu] : catalog.all()) {
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j < layout.partitions.size(); ++j) {
      if (afu_can_attach(afu.interface_kind, partition_kind_[j]) &&
          !fit_violation(afu.demand, partition_capacity_[j], cap_)) {
        mask |= (1u << j);
      }
    }
    afu_index_.emplace(id, index++);
    fit_mask_.push_back(mask);
  }
}

namespace {

// Kuhn augmenting path: slot -> partition, processing slots in order. If a
// slot cannot be augmented it stays unmatched in every maximum matching, so
// it is a sound infeasibility witness.
struct Matcher {
  const std::vector<std::uint32_t>& adjacency;  // per slot, bit j = partition j usable
  int n_right;
  std::vector<int> match_right;  // partition -> slot position, -1 free
  std::uint64_t nodes = 0;

  Matcher(const std::vector<std::uint32_t>& adj, int right)
      : adjacency(adj), n_right(right), match_right(static_cast<std::size_t>(right), -1) {}

  bool augment(int slot_pos, std::uint32_t& visited) {
    ++nodes;
    std::uint32_t options = adjacency[static_cast<std::size_t>(slot_pos)] & ~visited;
    while (options != 0) {
      const int j = __builtin_ctz(options);
      options &= options - 1;
      visited |= (1u << j);
      if (match_right[static_cast<std::size_t>(j)] == -1 ||
          augment(match_right[static_cast<std::size_t>(j)], visited)) {
        match_right[static_cast<std::size_t>(j)] = slot_pos;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

PackResult StandardOracle::pack(const Combination& combo) const {
  std::vector<int> slots;
  for (std::size_t s = 0; s < combo.slots.size(); ++s) {
    if (!catalog_->at(combo.slots[s]).zero_demand()) slots.push_back(static_cast<int>(s));
  }
  std::vector<int> all_partitions(layout_->partitions.size());
  for (std::size_t j = 0; j < all_partitions.size(); ++j) all_partitions[j] = static_cast<int>(j);
  return pack_partial(combo, slots, all_partitions);
}

PackResult StandardOracle::pack_partial(const Combination& combo,
                                        std::span<const int> raw_slots,
                                        std::span<const int> free_partitions) const {
  PackResult result;
  std::uint32_t free_mask = 0;
  for (int j : free_partitions) free_mask |= (1u << j);

  // Zero-demand slots need no partition.
  std::vector<int> slots;
  for (int s : raw_slots) {
    if (!catalog_->at(combo.slots[static_cast<std::size_t>(s)]).zero_demand()) slots.push_back(s);
  }

  std::vector<std::uint32_t> adjacency;
  adjacency.reserve(slots.size());
  for (int s : slots) {
    const auto it = afu_index_.find(combo.slots[static_cast<std::size_t>(s)]);
    if (it == afu_index_.end()) throw Error("unknown AFU id '" + combo.slots[static_cast<std::size_t>(s)] + "'");
    adjacency.push_back(fit_mask_[static_cast<std::size_t>(it->second)] & free_mask);
  }

  Matcher matcher(adjacency, static_cast<int>(layout_->partitions.size()));
  for (std::size_t pos = 0; pos < slots.size(); ++pos) {
    std::uint32_t visited = 0;
    if (!matcher.augment(static_cast<int>(pos), visited)) {
      result.witness_slot = slots[pos];
      result.witness_afu = combo.slots[static_cast<std::size_t>(slots[pos])];
      result.nodes = matcher.nodes;
      return result;
    }
  }

  Placement placement;
  for (int j = 0; j < static_cast<int>(layout_->partitions.size()); ++j) {
    const int pos = matcher.match_right[static_cast<std::size_t>(j)];
    if (pos == -1) continue;
    const int slot = slots[static_cast<std::size_t>(pos)];
    const Footprint& fp = layout_->partitions[static_cast<std::size_t>(j)];
    placement.assignments.push_back(Assignment{slot, combo.slots[static_cast<std::size_t>(slot)],
                                               fp.interface_id, fp,
                                               partition_bytes_[static_cast<std::size_t>(j)]});
  }
  std::sort(placement.assignments.begin(), placement.assignments.end(),
            [](const Assignment& a, const Assignment& b) { return a.slot < b.slot; });
  result.placement = std::move(placement);
  result.nodes = matcher.nodes;
  return result;
}

PackResult feasible_standard(const Device& device, const Layout& layout,
                             const Combination& combo, const AfuCatalog& catalog,
                             double cap, const SizeModel& model) {
  return StandardOracle(device, layout, catalog, cap, model).pack(combo);
}

AmorphousPacker::AmorphousPacker(const Device& device, const BitstreamDb& db,
                                 const AfuCatalog& catalog)
    : device_(&device), db_(&db), catalog_(&catalog) {
  const int n_fp = db.footprint_count();
  n_ifaces_ = static_cast<int>(device.interfaces().size());
  words_ = (n_fp + 63) / 64;
  conflicts_.assign(static_cast<std::size_t>(n_fp),
                    std::vector<std::uint64_t>(static_cast<std::size_t>(words_), 0));
  for (int i = 0; i < n_fp; ++i) {
    for (int j = i; j < n_fp; ++j) {
      if (db.footprint(i).cells.intersects(db.footprint(j).cells)) {
        conflicts_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) / 64] |=
            (1ull << (j % 64));
        conflicts_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i) / 64] |=
            (1ull << (i % 64));
      }
    }
  }
  footprint_capacity_.reserve(static_cast<std::size_t>(n_fp));
  footprint_cells_.reserve(static_cast<std::size_t>(n_fp));
  for (int i = 0; i < n_fp; ++i) {
    footprint_capacity_.push_back(region_capacity(device, db.footprint(i).cells));
    footprint_cells_.push_back(static_cast<long long>(db.footprint(i).cells.count()));
  }
  region_totals_ = device.region_totals();
  region_cells_ = static_cast<long long>(device.region().count());

  for (const auto& [afu_id, afu] : catalog.all()) {
    if (afu.zero_demand()) continue;
    AfuCandidates ac;
    ac.by_interface.assign(static_cast<std::size_t>(n_ifaces_), CandidateGroup{});
    for (int e : db.candidates(afu_id)) {
      const int fp = db.entries()[static_cast<std::size_t>(e)].footprint_index;
      ac.by_interface[static_cast<std::size_t>(db.footprint(fp).interface_id)].entries.push_back(e);
    }
    for (CandidateGroup& group : ac.by_interface) {
      // Drop any version whose footprint strictly contains another version's
      // footprint in the same group; smallest-first scan keeps the minimal
      // antichain.
      std::vector<int> by_size = group.entries;
      std::sort(by_size.begin(), by_size.end(), [&](int a, int b) {
        const int fa = db.entries()[static_cast<std::size_t>(a)].footprint_index;
        const int fb = db.entries()[static_cast<std::size_t>(b)].footprint_index;
        if (footprint_cells_[static_cast<std::size_t>(fa)] !=
            footprint_cells_[static_cast<std::size_t>(fb)]) {
          return footprint_cells_[static_cast<std::size_t>(fa)] <
                 footprint_cells_[static_cast<std::size_t>(fb)];
        }
        return fa < fb;
      });
      std::vector<int> kept;
      for (int e : by_size) {
        const int fp = db.entries()[static_cast<std::size_t>(e)].footprint_index;
        bool dominated = false;
        for (int k : kept) {
          const int kfp = db.entries()[static_cast<std::size_t>(k)].footprint_index;
          if (db.footprint(kfp).cells.is_subset_of(db.footprint(fp).cells)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) kept.push_back(e);
      }
      std::sort(kept.begin(), kept.end(), [&](int a, int b) {
        const BitstreamDb::Entry& ea = db.entries()[static_cast<std::size_t>(a)];
        const BitstreamDb::Entry& eb = db.entries()[static_cast<std::size_t>(b)];
        if (ea.bytes != eb.bytes) return ea.bytes < eb.bytes;
        return ea.footprint_index < eb.footprint_index;
      });
      group.entries = std::move(kept);
      bool first = true;
      for (int e : group.entries) {
        const int fp = db.entries()[static_cast<std::size_t>(e)].footprint_index;
        const ResourceVector& cap = footprint_capacity_[static_cast<std::size_t>(fp)];
        if (first) {
          group.min_capacity = cap;
          group.min_cells = footprint_cells_[static_cast<std::size_t>(fp)];
          first = false;
        } else {
          for (ResourceKind k : all_resource_kinds) {
            group.min_capacity[k] = std::min(group.min_capacity[k], cap[k]);
          }
          group.min_cells =
              std::min(group.min_cells, footprint_cells_[static_cast<std::size_t>(fp)]);
        }
      }
    }
    bool first = true;
    for (const CandidateGroup& group : ac.by_interface) {
      if (group.entries.empty()) continue;
      ac.total += group.entries.size();
      if (first) {
        ac.min_capacity = group.min_capacity;
        ac.min_cells = group.min_cells;
        first = false;
      } else {
        for (ResourceKind k : all_resource_kinds) {
          ac.min_capacity[k] = std::min(ac.min_capacity[k], group.min_capacity[k]);
        }
        ac.min_cells = std::min(ac.min_cells, group.min_cells);
      }
    }
    candidates_.emplace(afu_id, std::move(ac));
  }
}

PackResult AmorphousPacker::pack(const Combination& combo) const {
  std::vector<int> slots;
  for (std::size_t s = 0; s < combo.slots.size(); ++s) {
    if (!catalog_->at(combo.slots[s]).zero_demand()) slots.push_back(static_cast<int>(s));
  }
  std::vector<std::uint64_t> no_conflicts(static_cast<std::size_t>(words_), 0);
  return search(combo, slots, 0, no_conflicts, ResourceVector{}, 0);
}

PackResult AmorphousPacker::pack_partial(const Combination& combo,
                                         std::span<const int> raw_slots,
                                         std::span<const int> used_interfaces,
                                         std::span<const int> occupied_footprints) const {
  std::uint32_t used = 0;
  for (int iface : used_interfaces) used |= (1u << iface);
  std::vector<std::uint64_t> conflict(static_cast<std::uint64_t>(words_), 0);
  ResourceVector base_res{};
  long long base_cells = 0;
  for (int fp : occupied_footprints) {
    const auto& mask = conflicts_[static_cast<std::size_t>(fp)];
    for (int w = 0; w < words_; ++w) conflict[static_cast<std::size_t>(w)] |= mask[static_cast<std::size_t>(w)];
    base_res += footprint_capacity_[static_cast<std::size_t>(fp)];
    base_cells += footprint_cells_[static_cast<std::size_t>(fp)];
  }
  std::vector<int> slots;
  for (int s : raw_slots) {
    if (!catalog_->at(combo.slots[static_cast<std::size_t>(s)]).zero_demand()) slots.push_back(s);
  }
  return search(combo, slots, used, conflict, base_res, base_cells);
}

PackResult AmorphousPacker::search(const Combination& combo, const std::vector<int>& slots,
                                   std::uint32_t used_ifaces,
                                   const std::vector<std::uint64_t>& base_conflict,
                                   const ResourceVector& base_res, long long base_cells) const {
  PackResult result;
  const std::size_t m = slots.size();
  if (m == 0) {
    result.placement = Placement{};
    return result;
  }

  std::vector<const AfuCandidates*> cand(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto it = candidates_.find(combo.slots[static_cast<std::size_t>(slots[i])]);
    if (it == candidates_.end() || it->second.total == 0) {
      result.witness_slot = slots[i];
      result.witness_afu = combo.slots[static_cast<std::size_t>(slots[i])];
      return result;
    }
    cand[i] = &it->second;
  }

  // Fewest candidates first keeps the branching factor low near the root.
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cand[a]->total != cand[b]->total) return cand[a]->total < cand[b]->total;
    return slots[a] < slots[b];
  });

  // Suffix-minimal capacity any candidate of each remaining slot must occupy;
  // a partial selection that cannot stay within the region totals is pruned.
  std::vector<ResourceVector> suffix_min(m + 1, ResourceVector{});
  std::vector<long long> suffix_cells(m + 1, 0);
  for (std::size_t d = m; d-- > 0;) {
    suffix_min[d] = suffix_min[d + 1] + cand[order[d]]->min_capacity;
    suffix_cells[d] = suffix_cells[d + 1] + cand[order[d]]->min_cells;
  }

  std::vector<std::vector<std::uint64_t>> conflict_stack(
      m + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(words_), 0));
  conflict_stack[0] = base_conflict;
  std::vector<ResourceVector> res_stack(m + 1);
  res_stack[0] = base_res;
  std::vector<long long> cells_stack(m + 1, 0);
  cells_stack[0] = base_cells;
  // Per depth: current interface group and position inside it.
  std::vector<int> group_cursor(m, 0);
  std::vector<std::size_t> entry_cursor(m, 0);
  std::vector<int> chosen(m, -1);
  std::vector<std::uint32_t> iface_stack(m + 1, 0);
  iface_stack[0] = used_ifaces;

  std::size_t depth = 0;
  std::uint64_t nodes = 0;
  while (true) {
    if (depth == m) {
      Placement placement;
      for (std::size_t d = 0; d < m; ++d) {
        const BitstreamDb::Entry& entry = db_->entries()[static_cast<std::size_t>(chosen[d])];
        const Footprint& fp = db_->footprint(entry.footprint_index);
        placement.assignments.push_back(Assignment{slots[order[d]], entry.afu_id,
                                                   fp.interface_id, fp, entry.bytes});
      }
      std::sort(placement.assignments.begin(), placement.assignments.end(),
                [](const Assignment& a, const Assignment& b) { return a.slot < b.slot; });
      result.placement = std::move(placement);
      result.nodes = nodes;
      return result;
    }
    const AfuCandidates& ac = *cand[order[depth]];
    bool advanced = false;
    while (group_cursor[depth] < n_ifaces_ && !advanced) {
      const int iface = group_cursor[depth];
      const CandidateGroup& group = ac.by_interface[static_cast<std::size_t>(iface)];
      if (group.entries.empty() || (iface_stack[depth] & (1u << iface))) {
        ++group_cursor[depth];
        entry_cursor[depth] = 0;
        continue;
      }
      if (entry_cursor[depth] == 0) {
        // Even this group's smallest member cannot leave room for the rest.
        bool group_over = false;
        for (ResourceKind k : all_resource_kinds) {
          if (res_stack[depth][k] + group.min_capacity[k] + suffix_min[depth + 1][k] >
              region_totals_[k]) {
            group_over = true;
            break;
          }
        }
        if (!group_over &&
            cells_stack[depth] + group.min_cells + suffix_cells[depth + 1] > region_cells_) {
          group_over = true;
        }
        if (group_over) {
          ++nodes;
          ++group_cursor[depth];
          continue;
        }
      }
      while (entry_cursor[depth] < group.entries.size()) {
        const int e = group.entries[entry_cursor[depth]++];
        ++nodes;
        const BitstreamDb::Entry& entry = db_->entries()[static_cast<std::size_t>(e)];
        const int fp = entry.footprint_index;
        if (conflict_stack[depth][static_cast<std::size_t>(fp) / 64] & (1ull << (fp % 64))) {
          continue;
        }
        bool over = false;
        const ResourceVector& cap = footprint_capacity_[static_cast<std::size_t>(fp)];
        for (ResourceKind k : all_resource_kinds) {
          if (res_stack[depth][k] + cap[k] + suffix_min[depth + 1][k] > region_totals_[k]) {
            over = true;
            break;
          }
        }
        if (!over && cells_stack[depth] + footprint_cells_[static_cast<std::size_t>(fp)] +
                             suffix_cells[depth + 1] >
                         region_cells_) {
          over = true;
        }
        if (over) continue;
        chosen[depth] = e;
        iface_stack[depth + 1] = iface_stack[depth] | (1u << iface);
        for (int w = 0; w < words_; ++w) {
          conflict_stack[depth + 1][static_cast<std::size_t>(w)] =
              conflict_stack[depth][static_cast<std::size_t>(w)] |
              conflicts_[static_cast<std::size_t>(fp)][static_cast<std::size_t>(w)];
        }
        res_stack[depth + 1] = res_stack[depth] + cap;
        cells_stack[depth + 1] =
            cells_stack[depth] + footprint_cells_[static_cast<std::size_t>(fp)];
        ++depth;
        advanced = true;
        break;
      }
      if (!advanced) {
        ++group_cursor[depth];
        entry_cursor[depth] = 0;
      }
    }
    if (advanced) continue;
    if (depth == 0) {
      result.witness_slot = slots[order[0]];
      result.witness_afu = combo.slots[static_cast<std::size_t>(slots[order[0]])];
      result.nodes = nodes;
      return result;
    }
    group_cursor[depth] = 0;
    entry_cursor[depth] = 0;
    --depth;
  }
}

PackResult feasible_amorphous(const Device& device, const BitstreamDb& db,
                              const Combination& combo, const AfuCatalog& catalog) {
  return AmorphousPacker(device, db, catalog).pack(combo);
}

PackResult brute_force_pack(const Device& device, const BitstreamDb& db,
                            const Combination& combo, const AfuCatalog& catalog,
                            std::uint64_t bound) {
  (void)device;
  PackResult result;
  std::vector<int> slots;
  for (std::size_t s = 0; s < combo.slots.size(); ++s) {
    if (!catalog.at(combo.slots[s]).zero_demand()) slots.push_back(static_cast<int>(s));
  }
  if (slots.empty()) {
    result.placement = Placement{};
    return result;
  }

  // Candidates in ascending database-entry order, independent of the tuned
  // packer's cheapest-first ordering.
  std::vector<std::vector<int>> cand(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::string& afu = combo.slots[static_cast<std::size_t>(slots[i])];
    for (std::size_t e = 0; e < db.entries().size(); ++e) {
      if (db.entries()[e].afu_id == afu) cand[i].push_back(static_cast<int>(e));
    }
    if (cand[i].empty()) {
      result.witness_slot = slots[i];
      result.witness_afu = afu;
      return result;
    }
  }

  std::uint64_t product = 1;
  for (const auto& c : cand) {
    if (product > bound / c.size()) throw BoundError("brute_force_pack exceeds bound");
    product *= c.size();
  }

  std::vector<std::size_t> idx(slots.size(), 0);
  std::uint64_t nodes = 0;
  while (true) {
    ++nodes;
    bool ok = true;
    for (std::size_t a = 0; a < slots.size() && ok; ++a) {
      const BitstreamDb::Entry& ea = db.entries()[static_cast<std::size_t>(cand[a][idx[a]])];
      const Footprint& fa = db.footprint(ea.footprint_index);
      for (std::size_t b = a + 1; b < slots.size() && ok; ++b) {
        const BitstreamDb::Entry& eb = db.entries()[static_cast<std::size_t>(cand[b][idx[b]])];
        const Footprint& fb = db.footprint(eb.footprint_index);
        if (fa.interface_id == fb.interface_id || fa.cells.intersects(fb.cells)) ok = false;
      }
    }
    if (ok) {
      Placement placement;
      for (std::size_t a = 0; a < slots.size(); ++a) {
        const BitstreamDb::Entry& entry = db.entries()[static_cast<std::size_t>(cand[a][idx[a]])];
        const Footprint& fp = db.footprint(entry.footprint_index);
        placement.assignments.push_back(
            Assignment{slots[a], entry.afu_id, fp.interface_id, fp, entry.bytes});
      }
      result.placement = std::move(placement);
      result.nodes = nodes;
      return result;
    }
    // Odometer increment, last slot fastest.
    std::size_t pos = slots.size();
    while (pos-- > 0) {
      if (++idx[pos] < cand[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) {
        result.witness_slot = slots[0];
        result.witness_afu = combo.slots[static_cast<std::size_t>(slots[0])];
        result.nodes = nodes;
        return result;
      }
    }
  }
}

double placement_rate(const std::function<bool(const Combination&)>& feasible,
                      std::span<const Combination> combos) {
  if (combos.empty()) return 0.0;
  std::size_t hits = 0;
  for (const Combination& combo : combos) {
    if (feasible(combo)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(combos.size());
}

}  // namespace adpr
