#pragma once

#include <charconv>
#include <string>

namespace burstopt::detail {

/// Shortest round-trip decimal form (std::to_chars), identical on every
/// conforming platform; all emitted report and LP numbers go through this.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace burstopt::detail
