#pragma once

#include <string>
#include <vector>

namespace adpr {

// One demanded AFU per interface slot. Zero-demand entries are the explicit
// "absent" placeholder, so every combination has exactly n_interfaces slots.
struct Combination {
  std::vector<std::string> slots;

  friend bool operator==(const Combination&, const Combination&) = default;
};

}  // namespace adpr
