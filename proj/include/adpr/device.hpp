#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adpr/grid.hpp"
#include "adpr/resources.hpp"

namespace adpr {

enum class InterfaceKind { Memory, Streaming, Both };

const char* to_string(InterfaceKind k);
InterfaceKind interface_kind_from_string(const std::string& s);

// A module demanding memory attaches to memory or both; same for streaming.
// A module needing both services attaches only to a both-kind interface.
bool afu_can_attach(InterfaceKind afu_kind, InterfaceKind iface_kind);

struct ColumnSpec {
  ResourceKind kind = ResourceKind::LogicCell;
  long long per_cell_capacity = 0;  // 0 = use the kind's default density
};

struct RectSpec {
  int col_lo = 0, row_lo = 0, col_hi = 0, row_hi = 0;  // inclusive
};

struct InterfaceSpec {
  int id = 0;
  InterfaceKind kind = InterfaceKind::Both;
  std::vector<Cell> termination;  // at least one cell
};

// Default 7-series-like densities, applied when a column spec leaves
// per_cell_capacity at 0.
ResourceVector default_densities();

struct DeviceConfig {
  std::string name;
  int rows = 0;
  std::vector<ColumnSpec> columns;  // one entry per column, left to right
  std::vector<RectSpec> static_rects;
  std::vector<InterfaceSpec> interfaces;
  std::optional<ResourceVector> declared_budgets;
};

struct Interface {
  int id = 0;
  InterfaceKind kind = InterfaceKind::Both;
  CellSet termination;  // proxy-logic cells; part of every footprint of this interface
  CellSet net_cells;    // cells touched by interface nets; recorded, never a constraint
};

// Immutable fabric model: column map, static mask, the uncommitted
// reconfiguration region and its external interfaces.
class Device {
public:
  const std::string& name() const { return name_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }

  ResourceKind column_kind(int col) const { return kinds_[col]; }
  long long cell_capacity(int col) const { return capacity_[col]; }

  const CellSet& static_mask() const { return static_mask_; }
  const CellSet& region() const { return region_; }
  bool in_region(Cell c) const { return region_.test(c); }

  const std::vector<Interface>& interfaces() const { return interfaces_; }
  const Interface& interface_by_id(int id) const;

  // Union of every interface's termination cells.
  const CellSet& all_termination() const { return all_termination_; }

  // Totals over the whole uncommitted region.
  const ResourceVector& region_totals() const { return region_totals_; }

  CellSet empty_set() const { return CellSet(cols_, rows_); }

  // Same fabric with a different interface list (re-validated).
  Device with_interfaces(std::vector<InterfaceSpec> specs) const;

private:
  friend Device build_device(const DeviceConfig&);

  std::string name_;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<ResourceKind> kinds_;
  std::vector<long long> capacity_;
  CellSet static_mask_;
  CellSet region_;
  std::vector<Interface> interfaces_;
  CellSet all_termination_;
  ResourceVector region_totals_;
  DeviceConfig config_;
};

// Validates the config and assembles the device. Throws ConfigError on
// overlapping interface terminations, termination cells outside the
// uncommitted region, or declared budgets that disagree with the column map.
Device build_device(const DeviceConfig& config);

// Boundary cells of the uncommitted region in deterministic walk order
// (outer boundary, traced with a wall follower from the smallest cell).
std::vector<Cell> perimeter_walk(const Device& device);

// Places n single-cell interfaces evenly along the region periphery.
// Throws ConfigError when n exceeds the number of periphery sites.
std::vector<InterfaceSpec> place_interfaces_peripheral(const Device& device, int n,
                                                       InterfaceKind kind = InterfaceKind::Both);

// Sums per-cell capacities by kind. Throws if any cell is outside the
// uncommitted region.
ResourceVector region_capacity(const Device& device, const CellSet& cells);

}  // namespace adpr
