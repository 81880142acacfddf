#ifndef FLOWDEP_TEXT_HPP
#define FLOWDEP_TEXT_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "flowdep/error.hpp"

namespace flowdep {

// Shortest decimal form that parses back to the same double; keeps emitted
// CSV round-trippable byte for byte.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return std::string(buf);
}

// For axis labels and threshold metadata: plain decimal where %g allows it
// (shortest-round-trip form flips 100000 to 1e+05, which reads poorly in
// table headers).
inline std::string format_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::string(buf);
}

// Splits one CSV line on commas. No quoting: the flow formats are plain.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

// Full-field numeric parses; anything short of consuming the whole field is
// treated as malformed so "12x" or "" never half-parses.
inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline bool parse_f64(std::string_view s, double& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool is_skippable_line(std::string_view line) {
  return line.empty() || line.front() == '#';
}

}  // namespace flowdep

#endif
