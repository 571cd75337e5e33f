#pragma once

#include <filesystem>

#include "smcedp/signal.hpp"

namespace smcedp {

/* Load a sampled signal from CSV.
 *
 * Expected layout: a header row 't,<ch0>,<ch1>,...' followed by one row per
 * sample with strictly increasing, uniformly spaced time stamps starting at
 * 0. Channel names come from the header. Ragged rows, a non-uniform grid or
 * an unparsable number raise SourceError. */
Signal read_signal_csv(const std::filesystem::path& path);

/* Inverse of read_signal_csv; numbers are written in shortest round-trip
 * form so a write/read cycle reproduces the signal exactly. */
void write_signal_csv(const std::filesystem::path& path, const Signal& signal);

}  // namespace smcedp
