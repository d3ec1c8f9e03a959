#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "verdictforge/errors.hpp"

namespace verdictforge {

/// Formats a real with exactly six decimal places, rounding the scaled
/// value half-to-even. All serialized reals in CSV outputs go through
/// this so reports are bit-stable across runs and platforms.
inline std::string format_fixed6(double value) {
  if (!std::isfinite(value)) return "nan";
  // nearbyint under the default FE_TONEAREST mode rounds ties to even.
  const double scaled = std::nearbyint(value * 1e6);
  long long n = static_cast<long long>(scaled);
  std::string sign;
  if (n < 0) {
    sign = "-";
    n = -n;
  }
  const long long whole = n / 1000000;
  const long long frac = n % 1000000;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%06lld", sign.c_str(), whole, frac);
  return buf;
}

/// Quotes a field per RFC 4180: wrap in double quotes when it contains a
/// comma, quote, CR, or LF; embedded quotes are doubled.
inline std::string csv_quote(std::string_view field) {
  const bool needs_quoting =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quoting) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Writes UTF-8, comma-separated, LF-terminated rows.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open for writing: " + path);
    path_ = path;
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << csv_quote(fields[i]);
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

/// Splits one CSV record into fields, honoring RFC 4180 quoting.
/// The input line must not contain the record terminator.
inline std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace verdictforge
