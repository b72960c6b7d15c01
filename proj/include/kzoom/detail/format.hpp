#pragma once

#include <charconv>
#include <string>

namespace kzoom::detail {

/// Shortest round-trip rendering; identical on every conforming platform.
inline std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace kzoom::detail
