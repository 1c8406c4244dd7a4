// SPDX-License-Identifier: Apache-2.0
#pragma once

// Rows of the z-normalized Euclidean distance matrix between the ℓ-subsequences
// of one segment and every ℓ-subsequence of the series.
//
// The streaming kernel keeps the centered cross products cov(p, q) of window
// pairs and walks them along matrix diagonals:
//
//   cov(p+1, q+1) = cov(p, q) + df[p]·dg[q] + df[q]·dg[p]
//   df[p] = (t[p+ℓ] - t[p]) / 2
//   dg[p] = (t[p+ℓ] - mean[p+1]) + (t[p] - mean[p])
//
// so every row after the first costs O(1) per column plus an O(ℓ) start for
// column 0. Distances follow from the Pearson correlation as sqrt(2ℓ(1 - ρ)).

#include <tsnip/error.hpp>
#include <tsnip/series.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace tsnip {

enum class DistanceKernel {
  streaming,  ///< incremental centered dot products (default)
  direct,     ///< z-normalize both windows, then Euclid; O(ℓ) per entry
};

/// Euclidean distance between population-z-normalized copies of `a` and `b`.
/// A constant window normalizes to the all-zero vector.
inline double znorm_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw invalid_argument("znorm_distance: length mismatch (" + std::to_string(a.size()) +
                           " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw invalid_argument("znorm_distance: empty windows");
  const auto normalize = [](std::span<const double> w) {
    const double len = static_cast<double>(w.size());
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= len;
    double ss = 0.0;
    for (double v : w) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / len);
    std::vector<double> z(w.size(), 0.0);
    const bool constant = std::all_of(w.begin(), w.end(), [&](double v) { return v == w[0]; });
    if (!constant && sd > 0.0)
      for (std::size_t k = 0; k < w.size(); ++k) z[k] = (w[k] - mean) / sd;
    return z;
  };
  const auto za = normalize(a);
  const auto zb = normalize(b);
  double acc = 0.0;
  for (std::size_t k = 0; k < za.size(); ++k) acc += (za[k] - zb[k]) * (za[k] - zb[k]);
  return std::sqrt(acc);
}

/// One row of the distance matrix: distances from the query window at
/// segment offset `row_index` to every ℓ-window of the series.
struct DistanceRow {
  std::size_t row_index = 0;
  std::vector<double> entries;
};

/// Per-(series, ℓ) tables shared by every segment's rows. Immutable once built.
class DistanceContext {
  static constexpr long double near_match_sq = 1e-6L;

 public:
  DistanceContext(const TimeSeries& series, const SlidingStats& stats)
      : series_(&series), len_(stats.window_len) {
    const std::size_t n = series.size();
    if (len_ < 1 || len_ > n || stats.count() != n - len_ + 1)
      throw invalid_argument("sliding stats do not match the series");
    const auto x = series.values();
    const std::size_t count = stats.count();
    means_.assign(stats.means.begin(), stats.means.end());
    constant_.resize(count);
    inv_norm_.resize(count);
    for (std::size_t p = 0; p < count; ++p) {
      long double ss = 0.0L;
      if (stats.stds[p] > 0.0)
        for (std::size_t k = 0; k < len_; ++k) {
          const long double d = static_cast<long double>(x[p + k]) - means_[p];
          ss += d * d;
        }
      constant_[p] = !(ss > 0.0L);
      inv_norm_[p] = constant_[p] ? 0.0L : 1.0L / std::sqrt(ss);
    }
    df_.resize(count > 0 ? count - 1 : 0);
    dg_.resize(df_.size());
    for (std::size_t p = 0; p + 1 < count; ++p) {
      const long double head = x[p], tail = x[p + len_];
      df_[p] = (tail - head) / 2.0L;
      dg_[p] = (tail - static_cast<long double>(means_[p + 1])) +
               (head - static_cast<long double>(means_[p]));
    }
  }

  const TimeSeries& series() const noexcept { return *series_; }
  std::size_t window_len() const noexcept { return len_; }
  std::size_t columns() const noexcept { return means_.size(); }

  /// Centered cross product of windows p and q, computed in O(ℓ).
  long double cov_direct(std::size_t p, std::size_t q) const noexcept {
    const auto x = series_->values();
    long double acc = 0.0L;
    const long double mp = means_[p], mq = means_[q];
    for (std::size_t k = 0; k < len_; ++k)
      acc += (static_cast<long double>(x[p + k]) - mp) * (static_cast<long double>(x[q + k]) - mq);
    return acc;
  }

  long double step(std::size_t p, std::size_t q) const noexcept {
    return df_[p] * dg_[q] + df_[q] * dg_[p];
  }

  double distance_from_cov(std::size_t p, std::size_t q, long double cov) const noexcept {
    const bool cp = constant_[p], cq = constant_[q];
    if (p == q || (cp && cq)) return 0.0;
    if (cp || cq) return std::sqrt(static_cast<double>(len_));
    long double rho = cov * inv_norm_[p] * inv_norm_[q];
    rho = std::clamp(rho, -1.0L, 1.0L);
    const long double sq = 2.0L * static_cast<long double>(len_) * (1.0L - rho);
    // Near-matches lose most of their digits in 1 - ρ; redo those directly.
    if (sq < near_match_sq) return static_cast<double>(std::sqrt(direct_sq(p, q)));
    return static_cast<double>(std::sqrt(sq));
  }

  /// Squared distance between the z-normalized windows, summed term by term.
  long double direct_sq(std::size_t p, std::size_t q) const noexcept {
    const auto x = series_->values();
    const long double mp = means_[p], mq = means_[q];
    long double acc = 0.0L;
    for (std::size_t k = 0; k < len_; ++k) {
      const long double d = (x[p + k] - mp) * inv_norm_[p] - (x[q + k] - mq) * inv_norm_[q];
      acc += d * d;
    }
    // inv_norm is 1/sqrt(Σ(x-μ)²), i.e. unit-norm windows; z-normalized ones have norm √ℓ.
    return acc * static_cast<long double>(len_);
  }

 private:
  const TimeSeries* series_;
  std::size_t len_;
  std::vector<double> means_;
  std::vector<bool> constant_;
  std::vector<long double> inv_norm_;
  std::vector<long double> df_, dg_;
};

/// Produces the rows of one segment in order, each from its predecessor.
class SegmentRowGenerator {
 public:
  SegmentRowGenerator(const DistanceContext& ctx, std::size_t seg_start,
                      DistanceKernel kernel = DistanceKernel::streaming)
      : ctx_(&ctx), seg_start_(seg_start), kernel_(kernel) {
    detail::require(seg_start < ctx.columns(), "segment start out of range");
  }

  /// Offset (within the segment) of the row the next call to `next` emits.
  std::size_t position() const noexcept { return next_row_; }

  /// Writes the next row's n - ℓ + 1 distances into `out`.
  void next(std::span<double> out) {
    const std::size_t cols = ctx_->columns();
    const std::size_t p = seg_start_ + next_row_;
    detail::require(p < cols, "row offset runs past the last window");
    detail::require(out.size() == cols, "row buffer has wrong length");
    if (kernel_ == DistanceKernel::direct) {
      fill_direct(p, out);
    } else {
      if (next_row_ == 0) {
        cov_.resize(cols);
        for (std::size_t q = 0; q < cols; ++q) cov_[q] = ctx_->cov_direct(p, q);
      } else {
        for (std::size_t q = cols - 1; q > 0; --q) cov_[q] = cov_[q - 1] + ctx_->step(p - 1, q - 1);
        cov_[0] = ctx_->cov_direct(p, 0);
      }
      for (std::size_t q = 0; q < cols; ++q) out[q] = ctx_->distance_from_cov(p, q, cov_[q]);
    }
    ++next_row_;
  }

 private:
  void fill_direct(std::size_t p, std::span<double> out) const {
    const auto& series = ctx_->series();
    const std::size_t len = ctx_->window_len();
    const auto query = series.window(p, len);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] = znorm_distance(query, series.window(q, len));
  }

  const DistanceContext* ctx_;
  std::size_t seg_start_;
  DistanceKernel kernel_;
  std::size_t next_row_ = 0;
  std::vector<long double> cov_;
};

/// Row `row` of the matrix for the segment starting at `seg_start`.
///
/// Standalone convenience; the streaming kernel rolls forward from the
/// segment's first row, so callers needing every row should use
/// SegmentRowGenerator directly.
inline DistanceRow distance_row(const TimeSeries& series, const SlidingStats& stats,
                                std::size_t seg_start, std::size_t row, std::size_t window_len,
                                DistanceKernel kernel = DistanceKernel::streaming) {
  if (stats.window_len != window_len)
    throw invalid_argument("window length " + std::to_string(window_len) +
                           " does not match stats built for " + std::to_string(stats.window_len));
  if (seg_start + row + window_len > series.size())
    throw invalid_argument("row " + std::to_string(row) + " of segment at " +
                           std::to_string(seg_start) + " runs past the series end");
  const DistanceContext ctx(series, stats);
  SegmentRowGenerator gen(ctx, seg_start, kernel);
  DistanceRow result{row, std::vector<double>(ctx.columns())};
  if (kernel == DistanceKernel::direct) {
    gen = SegmentRowGenerator(ctx, seg_start + row, kernel);
    gen.next(result.entries);
    return result;
  }
  for (std::size_t i = 0; i <= row; ++i) gen.next(result.entries);
  return result;
}

}  // namespace tsnip
