#pragma once

#include <cstdint>
#include <random>

namespace vcb {

// 64-bit Mersenne Twister; uniform reals use the top 53 bits so streams are
// reproducible across standard libraries.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11U) * (1.0 / 9007199254740992.0);
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace vcb
