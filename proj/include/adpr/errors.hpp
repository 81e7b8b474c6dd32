#pragma once

#include <stdexcept>
#include <string>

namespace adpr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration input.
struct ConfigError : Error {
  using Error::Error;
};

// Layout generation could not produce what was asked for.
struct LayoutError : Error {
  LayoutError(const std::string& msg, int generated_count)
      : Error(msg), generated(generated_count) {}
  int generated = 0;
};

// Sequence sampling ran out of retries.
struct SequenceError : Error {
  SequenceError(const std::string& msg, int built_count)
      : Error(msg), built(built_count) {}
  int built = 0;
};

// Exhaustive search would exceed its configured bound.
struct BoundError : Error {
  using Error::Error;
};

}  // namespace adpr
