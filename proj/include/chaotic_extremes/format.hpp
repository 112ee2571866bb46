#ifndef CHAOTIC_EXTREMES_FORMAT_HPP
#define CHAOTIC_EXTREMES_FORMAT_HPP

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "errors.hpp"

namespace chaotic_extremes {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw argument_error("not a real number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_FORMAT_HPP
