#pragma once

#include <cstdint>
#include <random>

namespace adpr {

// Seeded RNG used everywhere randomness is needed. Wraps mt19937_64 (whose
// output sequence is pinned by the standard) and implements the bounded and
// unit draws by hand, because std::uniform_int_distribution is
// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Unbiased draw in [0, n) via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Independent child stream; tag distinguishes the consumers of one seed.
  Rng stream(std::uint64_t tag) const {
    return Rng(mix(seed_tag_base_ ^ tag));
  }

  static Rng with_base(std::uint64_t seed, std::uint64_t tag) {
    Rng r(mix(seed ^ mix(tag)));
    r.seed_tag_base_ = seed ^ mix(tag);
    return r;
  }

private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 eng_;
  std::uint64_t seed_tag_base_ = 0;
};

// Derives the rng for one named stage of a seeded run.
inline Rng stage_rng(std::uint64_t seed, std::uint64_t stage_tag) {
  return Rng::with_base(seed, stage_tag);
}

namespace rng_tag {
inline constexpr std::uint64_t layouts = 0x4c41594f55545321ULL;
inline constexpr std::uint64_t combos = 0x434f4d424f532121ULL;
inline constexpr std::uint64_t sequence = 0x53455155454e4345ULL;
}  // namespace rng_tag

}  // namespace adpr
