#pragma once

namespace spinsim {
inline constexpr const char* kVersion = "1.0.0";
// fixed default seed: outputs are reproducible unless the caller picks another
inline constexpr unsigned long long kDefaultSeed = 0x13C05EEDULL;
}  // namespace spinsim
