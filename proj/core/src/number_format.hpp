#pragma once

#include <charconv>
#include <string>

namespace smcedp::detail {

/* Shortest decimal string that round-trips to the same double. Keeps every
 * emitted artifact (formula text, CSV, JSON) byte-stable across runs. */
inline std::string format_double(double value) {
  char buffer[32];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace smcedp::detail
