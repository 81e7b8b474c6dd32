#pragma once

#include <string>
#include <vector>

#include "adpr/afu.hpp"
#include "adpr/device.hpp"
#include "adpr/errors.hpp"
#include "adpr/layout.hpp"
#include "adpr/rng.hpp"

namespace adpr::testutil {

#ifndef ADPR_CONFIG_DIR
#define ADPR_CONFIG_DIR "configs"
#endif

inline std::string config_path(const std::string& name) {
  return std::string(ADPR_CONFIG_DIR) + "/" + name;
}

// 12x2 grid, columns cycling logic/logic/bram/logic/dsp/logic at default
// densities, no static cells, two interfaces at opposite corners.
inline Device tiny_device(int n_interfaces = 2) {
  DeviceConfig config;
  config.name = "tiny";
  config.rows = 2;
  const ResourceKind pattern[6] = {ResourceKind::LogicCell, ResourceKind::LogicCell,
                                   ResourceKind::Bram,      ResourceKind::LogicCell,
                                   ResourceKind::Dsp,       ResourceKind::LogicCell};
  for (int c = 0; c < 12; ++c) config.columns.push_back(ColumnSpec{pattern[c % 6], 0});
  const Cell anchors[4] = {{0, 0}, {11, 1}, {5, 0}, {8, 1}};
  for (int i = 0; i < n_interfaces; ++i) {
    config.interfaces.push_back(InterfaceSpec{i, InterfaceKind::Both, {anchors[i]}});
  }
  return build_device(config);
}

// Random small device for property tests: 4..14 columns, 1..3 rows, random
// column kinds, an optional static rect, 1..3 interfaces on distinct region
// cells. Always satisfies the construction invariants.
inline Device random_device(Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    DeviceConfig config;
    config.name = "random";
    config.rows = 1 + static_cast<int>(rng.below(3));
    const int cols = 4 + static_cast<int>(rng.below(11));
    for (int c = 0; c < cols; ++c) {
      const std::uint64_t k = rng.below(3);
      config.columns.push_back(ColumnSpec{static_cast<ResourceKind>(k), 0});
    }
    if (rng.below(2) == 0) {
      const int c0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(cols)));
      const int r0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.rows)));
      config.static_rects.push_back(RectSpec{c0, r0, c0, r0});
    }
    // Enumerate region cells to anchor interfaces on.
    std::vector<Cell> region;
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < config.rows; ++r) {
        bool inside_static = false;
        for (const RectSpec& rect : config.static_rects) {
          if (c >= rect.col_lo && c <= rect.col_hi && r >= rect.row_lo && r <= rect.row_hi) {
            inside_static = true;
          }
        }
        if (!inside_static) region.push_back(Cell{c, r});
      }
    }
    const int n_ifaces = 1 + static_cast<int>(rng.below(3));
    if (static_cast<int>(region.size()) < n_ifaces + 1) continue;
    std::vector<Cell> picks;
    for (int i = 0; i < n_ifaces; ++i) {
      const std::size_t at = static_cast<std::size_t>(rng.below(region.size()));
      picks.push_back(region[at]);
      region.erase(region.begin() + static_cast<std::ptrdiff_t>(at));
    }
    for (int i = 0; i < n_ifaces; ++i) {
      config.interfaces.push_back(InterfaceSpec{i, InterfaceKind::Both, {picks[static_cast<std::size_t>(i)]}});
    }
    return build_device(config);
  }
  throw Error("random_device failed to produce a buildable config");
}

// Random connected footprint grown from the interface's termination.
inline Footprint random_footprint(const Device& device, const Interface& iface, Rng& rng) {
  CellSet cells = iface.termination;
  const int extra = static_cast<int>(rng.below(6));
  for (int step = 0; step < extra; ++step) {
    std::vector<Cell> frontier;
    cells.for_each([&](Cell c) {
      for (Cell nb : {Cell{c.col - 1, c.row}, Cell{c.col + 1, c.row}, Cell{c.col, c.row - 1},
                      Cell{c.col, c.row + 1}}) {
        if (cells.in_bounds(nb) && device.in_region(nb) && !cells.test(nb) &&
            !device.all_termination().test(nb)) {
          frontier.push_back(nb);
        }
      }
    });
    if (frontier.empty()) break;
    cells.set(frontier[static_cast<std::size_t>(rng.below(frontier.size()))]);
  }
  return Footprint{iface.id, cells};
}

}  // namespace adpr::testutil
