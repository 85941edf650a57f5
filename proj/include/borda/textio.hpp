#pragma once

// Tiny text helpers shared by the file formats and CSV writers.

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace borda::detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline long long parse_int(const std::string& raw, const std::string& what = "value") {
  const std::string s = trim(raw);
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::runtime_error("expected integer for " + what + ", got '" + raw + "'");
  return v;
}

inline double parse_double(const std::string& raw, const std::string& what = "value") {
  const std::string s = trim(raw);
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw std::runtime_error("expected number for " + what + ", got '" + raw + "'");
  }
}

// Round-trip exact formatting for files that are read back.
inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Compact formatting for CSV output.
inline std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace borda::detail
