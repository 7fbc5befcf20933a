#pragma once

#include <cstdint>
#include <random>

namespace ltlmcts {

using Rng = std::mt19937_64;

// Uniform on [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace ltlmcts
