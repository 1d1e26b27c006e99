// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cohtest/errors.hpp"

namespace cohtest {

// Shortest round-trip decimal form of a double. Deterministic across runs
// and thread counts, which keeps CSV output byte-identical.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DriverLoadError(std::string(what) + ": bad numeric field '" + std::string(s) + "'");
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name, const char* what) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw DriverLoadError(std::string(what) + ": missing column '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

// Read a comma-separated file with one header line. Ragged rows are errors.
inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DriverLoadError("cannot open '" + path + "'");
  CsvTable tab;
  std::string line;
  if (!std::getline(in, line)) throw DriverLoadError("'" + path + "' is empty");
  tab.header = split_csv_line(strip_cr(line));
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != tab.header.size())
      throw DriverLoadError("'" + path + "': row has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(tab.header.size()));
    tab.rows.push_back(std::move(fields));
  }
  return tab;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<std::string>& fields) {
    if (fields.size() != header_.size()) throw ShapeMismatch("csv row width differs from header");
    rows_.push_back(fields);
  }

  std::string str() const {
    std::ostringstream out;
    write_line(out, header_);
    for (const auto& r : rows_) write_line(out, r);
    return out.str();
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);  // binary: no newline translation
    if (!out) throw Error("cannot write '" + path + "'");
    out << str();
  }

 private:
  static void write_line(std::ostringstream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cohtest
