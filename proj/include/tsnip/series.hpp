// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tsnip/error.hpp>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace tsnip {

/// One coordinate of a (possibly multi-column) time series.
///
/// Holds at least two finite samples. Immutable after construction, so one
/// instance can be shared by any number of worker threads.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, int coordinate_id = 0)
      : values_(std::move(values)), coordinate_id_(coordinate_id) {
    if (values_.size() < 2)
      throw invalid_argument("time series needs at least 2 samples, got " +
                             std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw invalid_argument("non-finite sample at position " + std::to_string(i));
  }

  std::size_t size() const noexcept { return values_.size(); }
  int coordinate_id() const noexcept { return coordinate_id_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Samples [start, start + len).
  std::span<const double> window(std::size_t start, std::size_t len) const {
    detail::require(start + len <= values_.size(), "window exceeds series bounds");
    return std::span<const double>(values_).subspan(start, len);
  }

 private:
  std::vector<double> values_;
  int coordinate_id_;
};

/// Per-start mean and population standard deviation of every length-`window_len`
/// window. A std of exactly 0 marks a constant window.
struct SlidingStats {
  std::size_t window_len = 0;
  std::vector<double> means;
  std::vector<double> stds;

  std::size_t count() const noexcept { return means.size(); }
};

inline SlidingStats compute_sliding_stats(const TimeSeries& series, std::size_t window_len) {
  const std::size_t n = series.size();
  if (window_len < 1 || window_len > n)
    throw invalid_argument("window length " + std::to_string(window_len) +
                           " outside [1, " + std::to_string(n) + "]");
  const auto x = series.values();
  const std::size_t count = n - window_len + 1;

  // Extended precision keeps the prefix-difference cancellation below 1e-16
  // relative for any realistic n.
  std::vector<long double> sum(n + 1, 0.0L), sum_sq(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i + 1] = sum[i] + x[i];
    sum_sq[i + 1] = sum_sq[i] + static_cast<long double>(x[i]) * x[i];
  }

  // run[i]: length of the run of equal samples ending at i.
  std::vector<std::size_t> run(n, 1);
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] == x[i - 1]) run[i] = run[i - 1] + 1;

  SlidingStats stats;
  stats.window_len = window_len;
  stats.means.resize(count);
  stats.stds.resize(count);
  const long double len = static_cast<long double>(window_len);
  for (std::size_t i = 0; i < count; ++i) {
    const long double mean = (sum[i + window_len] - sum[i]) / len;
    long double var = (sum_sq[i + window_len] - sum_sq[i]) / len - mean * mean;
    if (var < 0.0L || run[i + window_len - 1] >= window_len) var = 0.0L;
    stats.means[i] = static_cast<double>(mean);
    stats.stds[i] = static_cast<double>(std::sqrt(var));
  }
  return stats;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(line.substr(pos, comma == std::string_view::npos ? line.size() - pos
                                                                     : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

}  // namespace detail

/// Parses comma-separated numeric columns. A first line that does not parse
/// as numbers is taken as a header and skipped. Blank lines are ignored.
/// Row numbers in error messages are 1-based file line numbers.
inline std::vector<std::vector<double>> parse_csv_columns(std::istream& in) {
  std::vector<std::vector<double>> columns;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_cells(line);
    std::vector<double> row(cells.size());
    std::size_t bad = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!detail::parse_double(cells[c], row[c])) {
        bad = c;
        break;
      }
    if (bad != cells.size()) {
      if (first_content) {
        first_content = false;
        continue;
      }
      throw input_error("non-numeric cell '" + std::string(detail::trim(cells[bad])) +
                        "' at row " + std::to_string(line_no) + ", column " +
                        std::to_string(bad));
    }
    if (columns.empty()) columns.resize(row.size());
    first_content = false;
    if (row.size() != columns.size())
      throw input_error("row " + std::to_string(line_no) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(columns.size()));
    for (std::size_t c = 0; c < row.size(); ++c) columns[c].push_back(row[c]);
  }
  return columns;
}

inline std::vector<std::vector<double>> read_csv_columns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  return parse_csv_columns(in);
}

/// Loads zero-based column `column` of a CSV file.
inline TimeSeries load_series(const std::string& path, std::size_t column = 0) {
  auto columns = read_csv_columns(path);
  if (column >= columns.size())
    throw input_error("column " + std::to_string(column) + " out of range: '" + path +
                      "' has " + std::to_string(columns.size()) + " column(s)");
  if (columns[column].size() < 2)
    throw input_error("'" + path + "' has " + std::to_string(columns[column].size()) +
                      " row(s); at least 2 are required");
  return TimeSeries(std::move(columns[column]), static_cast<int>(column));
}

/// Every coordinate of a multi-column file, each as an independent series.
inline std::vector<TimeSeries> load_all_columns(const std::string& path) {
  auto columns = read_csv_columns(path);
  if (columns.empty()) throw input_error("'" + path + "' contains no data");
  std::vector<TimeSeries> out;
  out.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() < 2)
      throw input_error("'" + path + "' has fewer than 2 rows");
    out.emplace_back(std::move(columns[c]), static_cast<int>(c));
  }
  return out;
}

/// One value per line, 17 significant digits (round-trips exactly).
inline void write_values_csv(std::ostream& out, std::span<const double> values) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  for (double v : values) buf << v << '\n';
  out << buf.str();
}

}  // namespace tsnip
