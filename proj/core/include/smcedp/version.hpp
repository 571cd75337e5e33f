#pragma once

namespace smcedp {

/* Library/tool version, embedded in every run manifest and record. */
inline constexpr const char* kVersion = "0.1.0";

/* Bumped whenever a change may alter the bit-for-bit content of emitted
 * records (sampling order, serialization layout, defaults). */
inline constexpr const char* kAlgorithmVersion = "1";

}  // namespace smcedp
