#include "adpr/device.hpp"

#include <algorithm>
#include <map>

#include "adpr/errors.hpp"

namespace adpr {

const char* to_string(ResourceKind k) {
  switch (k) {
    case ResourceKind::LogicCell: return "logic";
    case ResourceKind::Bram: return "bram";
    case ResourceKind::Dsp: return "dsp";
  }
  return "?";
}

ResourceKind resource_kind_from_string(const std::string& s) {
  if (s == "logic") return ResourceKind::LogicCell;
  if (s == "bram") return ResourceKind::Bram;
  if (s == "dsp") return ResourceKind::Dsp;
  throw ConfigError("unknown resource kind: " + s);
}

const char* to_string(InterfaceKind k) {
  switch (k) {
    case InterfaceKind::Memory: return "memory";
    case InterfaceKind::Streaming: return "streaming";
    case InterfaceKind::Both: return "both";
  }
  return "?";
}

InterfaceKind interface_kind_from_string(const std::string& s) {
  if (s == "memory") return InterfaceKind::Memory;
  if (s == "streaming") return InterfaceKind::Streaming;
  if (s == "both") return InterfaceKind::Both;
  throw ConfigError("unknown interface kind: " + s);
}

bool afu_can_attach(InterfaceKind afu_kind, InterfaceKind iface_kind) {
  if (iface_kind == InterfaceKind::Both) return true;
  return afu_kind == iface_kind;
}

ResourceVector default_densities() {
  return ResourceVector{400, 10, 20};
}

const Interface& Device::interface_by_id(int id) const {
  for (const Interface& itf : interfaces_)
    if (itf.id == id) return itf;
  throw Error("no interface with id " + std::to_string(id));
}

Device Device::with_interfaces(std::vector<InterfaceSpec> specs) const {
  DeviceConfig cfg = config_;
  cfg.interfaces = std::move(specs);
  return build_device(cfg);
}

Device build_device(const DeviceConfig& config) {
  if (config.rows <= 0) throw ConfigError("device needs at least one row");
  if (config.columns.empty()) throw ConfigError("device needs at least one column");

  Device d;
  d.name_ = config.name;
  d.config_ = config;
  d.rows_ = config.rows;
  d.cols_ = static_cast<int>(config.columns.size());
  d.kinds_.reserve(d.cols_);
  d.capacity_.reserve(d.cols_);
  for (const ColumnSpec& c : config.columns) {
    d.kinds_.push_back(c.kind);
    long long cap = c.per_cell_capacity;
    if (cap == 0) cap = default_densities()[c.kind];
    if (cap < 0) throw ConfigError("negative per-cell capacity");
    d.capacity_.push_back(cap);
  }

  d.static_mask_ = CellSet(d.cols_, d.rows_);
  for (const RectSpec& r : config.static_rects) {
    if (r.col_lo > r.col_hi || r.row_lo > r.row_hi)
      throw ConfigError("degenerate static rect");
    for (int c = r.col_lo; c <= r.col_hi; ++c)
      for (int w = r.row_lo; w <= r.row_hi; ++w)
        d.static_mask_.set(Cell{c, w});  // throws when outside the grid
  }

  // Every cell is static or uncommitted, never both.
  d.region_ = CellSet(d.cols_, d.rows_);
  for (int c = 0; c < d.cols_; ++c)
    for (int w = 0; w < d.rows_; ++w)
      if (!d.static_mask_.test(Cell{c, w})) d.region_.set(Cell{c, w});
  if (d.region_.empty()) throw ConfigError("static mask covers the whole grid");

  d.region_totals_ = ResourceVector{};
  d.region_.for_each([&](Cell c) { d.region_totals_[d.kinds_[c.col]] += d.capacity_[c.col]; });

  if (config.declared_budgets &&
      !(d.region_totals_ == *config.declared_budgets)) {
    throw ConfigError("declared budgets disagree with the column map: region holds " +
                      std::to_string(d.region_totals_.logic_cells) + "/" +
                      std::to_string(d.region_totals_.bram) + "/" +
                      std::to_string(d.region_totals_.dsp));
  }

  // Interfaces: contiguous ids, termination inside the region, pairwise disjoint.
  std::vector<InterfaceSpec> specs = config.interfaces;
  std::sort(specs.begin(), specs.end(),
            [](const InterfaceSpec& a, const InterfaceSpec& b) { return a.id < b.id; });
  d.all_termination_ = CellSet(d.cols_, d.rows_);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const InterfaceSpec& s = specs[i];
    if (s.id != static_cast<int>(i))
      throw ConfigError("interface ids must be 0..n-1 without gaps");
    if (s.termination.empty())
      throw ConfigError("interface " + std::to_string(s.id) + " has no termination cells");
    Interface itf;
    itf.id = s.id;
    itf.kind = s.kind;
    itf.termination = CellSet(d.cols_, d.rows_);
    for (Cell c : s.termination) {
      if (!d.region_.test(c))
        throw ConfigError("termination cell of interface " + std::to_string(s.id) +
                          " lies outside the uncommitted region");
      if (d.all_termination_.test(c))
        throw ConfigError("termination cells of two interfaces overlap");
      itf.termination.set(c);
      d.all_termination_.set(c);
    }
    itf.net_cells = CellSet(d.cols_, d.rows_);
    d.interfaces_.push_back(std::move(itf));
  }

  // Interface nets fan out of the termination cells; the adjacent region
  // cells are recorded for reporting but impose no footprint restriction.
  for (Interface& itf : d.interfaces_) {
    itf.termination.for_each([&](Cell c) {
      const Cell nbrs[4] = {{c.col - 1, c.row}, {c.col + 1, c.row},
                            {c.col, c.row - 1}, {c.col, c.row + 1}};
      for (Cell n : nbrs)
        if (d.region_.test(n) && !d.all_termination_.test(n)) itf.net_cells.set(n);
    });
  }

  return d;
}

namespace {

enum Dir { East = 0, North = 1, West = 2, South = 3 };

struct Corner {
  int x, y;
  bool operator==(const Corner&) const = default;
};

Corner step(Corner p, Dir d) {
  switch (d) {
    case East: return {p.x + 1, p.y};
    case North: return {p.x, p.y + 1};
    case West: return {p.x - 1, p.y};
    case South: return {p.x, p.y - 1};
  }
  return p;
}

Dir turn_left(Dir d) { return static_cast<Dir>((d + 1) & 3); }
Dir turn_right(Dir d) { return static_cast<Dir>((d + 3) & 3); }

// Cell on the left / right of the edge leaving corner p in direction d.
Cell left_cell(Corner p, Dir d) {
  switch (d) {
    case East: return {p.x, p.y};
    case North: return {p.x - 1, p.y};
    case West: return {p.x - 1, p.y - 1};
    case South: return {p.x, p.y - 1};
  }
  return {};
}

Cell right_cell(Corner p, Dir d) {
  switch (d) {
    case East: return {p.x, p.y - 1};
    case North: return {p.x, p.y};
    case West: return {p.x - 1, p.y};
    case South: return {p.x - 1, p.y - 1};
  }
  return {};
}

}  // namespace

std::vector<Cell> perimeter_walk(const Device& device) {
  const CellSet& region = device.region();
  const std::vector<Cell> cells = region.cells();
  if (cells.empty()) return {};

  // Trace the outer contour counterclockwise, region kept on the left.
  // The first cell in canonical order has a boundary edge below it.
  const Cell start = cells.front();
  const Corner start_corner{start.col, start.row};
  const Dir start_dir = East;

  std::vector<Cell> walk;
  CellSet seen = device.empty_set();
  Corner p = start_corner;
  Dir d = start_dir;
  do {
    const Cell inside = left_cell(p, d);
    if (!seen.test(inside)) {
      seen.set(inside);
      walk.push_back(inside);
    }
    p = step(p, d);
    const Dir candidates[3] = {turn_left(d), d, turn_right(d)};
    Dir next = turn_right(turn_right(d));  // fall back: reverse along a spur
    for (Dir cand : candidates) {
      if (region.test(left_cell(p, cand)) && !region.test(right_cell(p, cand))) {
        next = cand;
        break;
      }
    }
    d = next;
  } while (!(p == start_corner && d == start_dir));

  return walk;
}

std::vector<InterfaceSpec> place_interfaces_peripheral(const Device& device, int n,
                                                       InterfaceKind kind) {
  if (n <= 0) throw ConfigError("interface count must be positive");
  const std::vector<Cell> walk = perimeter_walk(device);
  const int perimeter = static_cast<int>(walk.size());
  if (n > perimeter)
    throw ConfigError("requested " + std::to_string(n) + " interfaces but the periphery has only " +
                      std::to_string(perimeter) + " sites");

  std::vector<InterfaceSpec> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int at = static_cast<int>(static_cast<long long>(i) * perimeter / n);
    out.push_back(InterfaceSpec{i, kind, {walk[at]}});
  }
  return out;
}

ResourceVector region_capacity(const Device& device, const CellSet& cells) {
  if (!cells.same_universe(device.region()))
    throw Error("cell set universe does not match the device grid");
  if (!cells.is_subset_of(device.region()))
    throw Error("capacity query includes cells outside the uncommitted region");
  ResourceVector total;
  cells.for_each(
      [&](Cell c) { total[device.column_kind(c.col)] += device.cell_capacity(c.col); });
  return total;
}

}  // namespace adpr
