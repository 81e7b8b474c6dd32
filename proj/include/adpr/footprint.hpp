#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "adpr/device.hpp"
#include "adpr/grid.hpp"

namespace adpr {

// A flexible reconfiguration footprint: an edge-connected set of allocation
// cells bound to one external interface. Standard DPR partitions are the
// special case whose cell set never changes between loads.
struct Footprint {
  int interface_id = -1;
  CellSet cells;

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

// First violated rule, checked in this order.
enum class FootprintRule {
  Valid,
  Disconnected,
  MissingOwnTermination,
  EnclosesForeignTermination,
  EscapesRegion,
};

const char* to_string(FootprintRule r);

struct ValidityReport {
  FootprintRule rule = FootprintRule::Valid;
  std::optional<Cell> witness;  // offending cell where one exists

  bool valid() const { return rule == FootprintRule::Valid; }
};

// A footprint must be connected, cover its own interface's termination
// cells, avoid every other interface's termination cells, and stay inside
// the uncommitted region. Foreign net cells are explicitly allowed.
// An invalid footprint is a report, not an error.
ValidityReport validate_footprint(const Device& device, const Footprint& fp);

// Throws on mismatched grids; a footprint always overlaps itself.
bool overlaps(const Footprint& a, const Footprint& b);

// Linear partial-bitstream size model: a fixed header plus a per-cell cost
// by column kind. Defaults model a 7-series-like frame layout (a logic
// column cell is 36 frames of 101 32-bit words); absolute numbers are
// calibration constants, ratios between systems are what matters.
struct SizeModel {
  std::uint64_t bytes_per_cell[3] = {14544, 11312, 11312};  // logic, bram, dsp
  std::uint64_t header_bytes = 2048;
};

std::uint64_t bitstream_bytes(const Device& device, const CellSet& cells,
                              const SizeModel& model = {});

// Canonical text form (cells ascending by column, then row); equal
// footprints serialize identically, which makes dedup and diffing trivial.
std::string canonical_key(const Footprint& fp);

}  // namespace adpr
