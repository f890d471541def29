#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "lrspin/drive_protocols.hpp"
#include "lrspin/errors.hpp"

namespace lrspin::cli {

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_cell(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw MalformedSamples("cannot parse '" + std::string(cell) + "' as a number", line);
  }
  return value;
}

}  // namespace detail

// Reads `t,theta,phi` rows. Columns after the third are ignored so that the
// output of the `track` command can be fed back in directly.
inline TrackSamples parse_track_stream(std::istream& in) {
  TrackSamples samples;
  std::string line;
  std::size_t number = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view view = detail::trim(line);
    if (!seen_header) {
      const auto cells = detail::split_commas(view);
      if (cells.size() < 3 || detail::trim(cells[0]) != "t" || detail::trim(cells[1]) != "theta" ||
          detail::trim(cells[2]) != "phi") {
        throw MalformedSamples("expected header 't,theta,phi'", number);
      }
      seen_header = true;
      continue;
    }
    if (view.empty()) continue;
    const auto cells = detail::split_commas(view);
    if (cells.size() < 3) throw MalformedSamples("expected 3 columns", number);
    const double t = detail::parse_cell(cells[0], number);
    const double theta = detail::parse_cell(cells[1], number);
    const double phi = detail::parse_cell(cells[2], number);
    if (!std::isfinite(t) || !std::isfinite(theta) || !std::isfinite(phi)) {
      throw MalformedSamples("non-finite value", number);
    }
    if (theta < -1e-12 || theta > kPi + 1e-12) {
      throw MalformedSamples("theta outside [0, pi]", number);
    }
    if (samples.size() > 0 && !(t > samples.t.back())) throw NonMonotonicSamples(number);
    samples.push_back(t, theta, phi);
  }
  if (!seen_header) throw MalformedSamples("empty track file", 1);
  if (samples.size() < 5) {
    throw MalformedSamples("need at least 5 rows, got " + std::to_string(samples.size()), number);
  }
  return samples;
}

inline TrackSamples parse_track_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedSamples("cannot open track file '" + path + "'", 0);
  return parse_track_stream(in);
}

}  // namespace lrspin::cli
