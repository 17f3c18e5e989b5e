#pragma once

#include <cmath>
#include <cstdint>

#include "spinsim/types.hpp"

namespace spinsim {

// splitmix64: tiny, seed-stable across platforms. Used for all Monte-Carlo
// draws so output files are bit-reproducible for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in (0,1]
  double next_unit() {
    return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-53;
  }

  // Box-Muller, one value per call (spare cached)
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // derived stream for sweep point i (seed = base ^ mix(index))
  static std::uint64_t substream(std::uint64_t base, std::uint64_t index) {
    return base ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spinsim
