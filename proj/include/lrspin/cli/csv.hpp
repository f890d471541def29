#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "lrspin/errors.hpp"

namespace lrspin::cli {

// 15 significant digits, shortest form, no negative zero.
inline std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// Column label for a magnetic quantum number: 0.5, -0.5, 1, 0, -1, ...
inline std::string format_m(double m) {
  if (m == 0.0) return "0";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%g", m);
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<double> row) {
    if (row.size() != header_.size()) {
      throw InvalidArgument("csv row has " + std::to_string(row.size()) + " cells, header has " +
                            std::to_string(header_.size()));
    }
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

  void write(std::ostream& os) const {
    write_line(os, header_);
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << format_number(row[i]);
      }
      os << '\n';
    }
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace lrspin::cli
