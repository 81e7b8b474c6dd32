#include "adpr/footprint.hpp"

#include "adpr/errors.hpp"

namespace adpr {

const char* to_string(FootprintRule r) {
  switch (r) {
    case FootprintRule::Valid: return "valid";
    case FootprintRule::Disconnected: return "disconnected";
    case FootprintRule::MissingOwnTermination: return "missing-own-termination";
    case FootprintRule::EnclosesForeignTermination: return "encloses-foreign-termination";
    case FootprintRule::EscapesRegion: return "escapes-region";
  }
  return "?";
}

ValidityReport validate_footprint(const Device& device, const Footprint& fp) {
  const Interface& own = device.interface_by_id(fp.interface_id);  // throws on bad id
  if (!fp.cells.same_universe(device.region()))
    throw Error("footprint universe does not match the device grid");

  if (!is_connected(fp.cells)) return {FootprintRule::Disconnected, {}};

  if (!own.termination.is_subset_of(fp.cells)) {
    std::optional<Cell> missing;
    own.termination.for_each([&](Cell c) {
      if (!missing && !fp.cells.test(c)) missing = c;
    });
    return {FootprintRule::MissingOwnTermination, missing};
  }

  CellSet foreign = device.all_termination();
  foreign.subtract(own.termination);
  if (fp.cells.intersects(foreign)) {
    foreign &= fp.cells;
    return {FootprintRule::EnclosesForeignTermination, foreign.cells().front()};
  }

  if (!fp.cells.is_subset_of(device.region())) {
    CellSet outside = fp.cells;
    outside.subtract(device.region());
    return {FootprintRule::EscapesRegion, outside.cells().front()};
  }

  return {FootprintRule::Valid, {}};
}

bool overlaps(const Footprint& a, const Footprint& b) {
  return a.cells.intersects(b.cells);  // throws on universe mismatch
}

std::uint64_t bitstream_bytes(const Device& device, const CellSet& cells,
                              const SizeModel& model) {
  if (!cells.same_universe(device.region()))
    throw Error("cell set universe does not match the device grid");
  std::uint64_t total = model.header_bytes;
  cells.for_each([&](Cell c) {
    total += model.bytes_per_cell[static_cast<int>(device.column_kind(c.col))];
  });
  return total;
}

std::string canonical_key(const Footprint& fp) {
  std::string key = "i" + std::to_string(fp.interface_id) + ":";
  for (Cell c : fp.cells.cells()) {
    key += std::to_string(c.col);
    key += ',';
    key += std::to_string(c.row);
    key += ';';
  }
  return key;
}

}  // namespace adpr
