#pragma once

// Shared helpers for the line-oriented text formats.

#include <charconv>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jlopt/error.hpp"

namespace jlopt::detail {

// %.17g: round-trips every finite double.
inline std::string format_real(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty()) {
    throw ParseError("malformed number '" + std::string(token) + "'", line);
  }
  return value;
}

inline std::size_t parse_count(std::string_view token, std::size_t line) {
  token = trim(token);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("malformed integer '" + std::string(token) + "'", line);
  }
  return value;
}

// Parses `magic version key=value ...`. Returns the key/value map.
inline std::map<std::string, std::string> parse_header(std::string_view line,
                                                       std::string_view magic,
                                                       std::string_view version) {
  std::vector<std::string_view> tokens;
  for (auto tok : split(trim(line), ' ')) {
    if (!tok.empty()) tokens.push_back(tok);
  }
  if (tokens.size() < 2 || tokens[0] != magic || tokens[1] != version) {
    throw ParseError("expected header '" + std::string(magic) + " " + std::string(version) + " ...'", 1);
  }
  std::map<std::string, std::string> fields;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("malformed header field '" + std::string(tokens[i]) + "'", 1);
    }
    fields.emplace(std::string(tokens[i].substr(0, eq)), std::string(tokens[i].substr(eq + 1)));
  }
  return fields;
}

}  // namespace jlopt::detail
