#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace smartskin {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

/// Strict parse of a whole token as a double; false on trailing garbage or empty input.
inline bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  const char* first = token.data();
  if (*first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, token.data() + token.size(), out);
  return ec == std::errc{} && end == token.data() + token.size();
}

}  // namespace smartskin
