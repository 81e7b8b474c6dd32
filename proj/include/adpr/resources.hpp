#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace adpr {

enum class ResourceKind { LogicCell = 0, Bram = 1, Dsp = 2 };

inline constexpr std::array<ResourceKind, 3> all_resource_kinds = {
    ResourceKind::LogicCell, ResourceKind::Bram, ResourceKind::Dsp};

const char* to_string(ResourceKind k);
ResourceKind resource_kind_from_string(const std::string& s);

// Counts of logic cells, BRAM blocks and DSP blocks. Value type; negative
// components are legal only as intermediate differences.
struct ResourceVector {
  long long logic_cells = 0;
  long long bram = 0;
  long long dsp = 0;

  long long operator[](ResourceKind k) const {
    switch (k) {
      case ResourceKind::LogicCell: return logic_cells;
      case ResourceKind::Bram: return bram;
      case ResourceKind::Dsp: return dsp;
    }
    throw std::logic_error("bad ResourceKind");
  }

  long long& operator[](ResourceKind k) {
    switch (k) {
      case ResourceKind::LogicCell: return logic_cells;
      case ResourceKind::Bram: return bram;
      case ResourceKind::Dsp: return dsp;
    }
    throw std::logic_error("bad ResourceKind");
  }

  ResourceVector& operator+=(const ResourceVector& o) {
    logic_cells += o.logic_cells;
    bram += o.bram;
    dsp += o.dsp;
    return *this;
  }

  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) {
    a += b;
    return a;
  }

  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

  bool is_zero() const { return logic_cells == 0 && bram == 0 && dsp == 0; }

  // Componentwise <=.
  bool fits_within(const ResourceVector& cap) const {
    return logic_cells <= cap.logic_cells && bram <= cap.bram && dsp <= cap.dsp;
  }
};

}  // namespace adpr
