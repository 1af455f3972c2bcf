#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subdiv::text {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

/// Splits on `sep`, keeping empty fields.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Splits on runs of whitespace, dropping empty fields.
std::vector<std::string_view> tokens(std::string_view s);

/// Splits into lines, dropping a trailing '\r' on each.
std::vector<std::string_view> lines(std::string_view s);

std::optional<int> to_int(std::string_view s);
std::optional<double> to_double(std::string_view s);

/// Whole file contents. Throws InputError if it cannot be read.
std::string read_file(const std::string& path);

}  // namespace subdiv::text
