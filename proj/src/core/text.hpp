#pragma once

#include <charconv>
#include <string>

namespace dimapg {

// Shortest decimal form that round-trips the exact double; keeps configs,
// metrics and eval summaries byte-stable across runs.
inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace dimapg
