#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace compeval::detail {

// Locale-independent shortest round-trip form of a double; the reason the
// tool's outputs are byte-stable across machines.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Fixed decimals, for chart coordinates where shortest-form jitter would
// just add noise. Locale-independent like the above.
inline std::string format_fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // normalize -0 so charts never print it
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

}  // namespace compeval::detail
