// SPDX-License-Identifier: Apache-2.0
#pragma once

// MPdist between a length-m query and every length-m window of a series.
//
// For a query A and window B, P_ABBA concatenates
//   * AB: for each ℓ-subsequence of A, its nearest ℓ-subsequence inside B
//   * BA: for each ℓ-subsequence of B, its nearest ℓ-subsequence inside A
// and MPdist is its k-th smallest element (its maximum when 2(m-ℓ+1) <= k).
// Both halves come from the (m-ℓ+1) x (n-ℓ+1) distance matrix of the query:
// BA is the column minimum, AB a sliding minimum of width m-ℓ+1 along each row.
// Rows are streamed one at a time; the full matrix is never held.

#include <tsnip/error.hpp>
#include <tsnip/series.hpp>
#include <tsnip/sliding_min.hpp>
#include <tsnip/worker_pool.hpp>
#include <tsnip/zdist.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsnip {

/// ℓ = ⌈m/2⌉.
constexpr std::size_t default_inner_length(std::size_t m) noexcept { return (m + 1) / 2; }

/// k = ⌈0.05 · 2m⌉, at least 1.
constexpr std::size_t default_order_statistic(std::size_t m) noexcept {
  return std::max<std::size_t>(1, (m + 9) / 10);
}

struct MPdistParams {
  std::size_t m = 0;  ///< snippet / window length
  std::size_t l = 0;  ///< inner subsequence length
  std::size_t k = 0;  ///< order statistic (1-based)

  /// Parameters for length m; ℓ defaults to ⌈m/2⌉, k to ⌈0.1·m⌉.
  static MPdistParams for_length(std::size_t m, std::optional<std::size_t> l = std::nullopt) {
    MPdistParams p{m, l.value_or(default_inner_length(m)), default_order_statistic(m)};
    detail::require(p.l >= 1 && p.l <= p.m,
                    "inner length " + std::to_string(p.l) + " outside [1, " + std::to_string(m) + "]");
    return p;
  }

  std::size_t rows() const noexcept { return m - l + 1; }

  void validate(std::size_t n) const {
    detail::require(l >= 1 && l <= m && m <= n,
                    "need 1 <= l <= m <= n (l=" + std::to_string(l) + ", m=" + std::to_string(m) +
                        ", n=" + std::to_string(n) + ")");
    detail::require(k >= 1, "order statistic k must be at least 1");
  }
};

struct MPdistProfile {
  std::size_t segment_index = 0;
  std::vector<double> values;  ///< n - m + 1 entries
};

/// Column-wise minimum over equal-length rows.
inline std::vector<double> column_minima(std::span<const std::vector<double>> rows) {
  detail::require(!rows.empty(), "column_minima: no rows");
  std::vector<double> out = rows.front();
  for (const auto& row : rows.subspan(1)) {
    if (row.size() != out.size())
      throw invalid_argument("column_minima: ragged rows (" + std::to_string(row.size()) + " vs " +
                             std::to_string(out.size()) + ")");
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::min(out[j], row[j]);
  }
  return out;
}

/// Minimum of each width-`window` run of a distance row.
inline std::vector<double> row_sliding_minima(std::span<const double> row, std::size_t window) {
  return sliding_minima(row, window);
}

/// k-th smallest element of the concatenation `ab ++ ba` (maximum if the
/// concatenation has no more than k entries). `scratch` is overwritten.
inline double mpdist_at(std::span<const double> ab, std::span<const double> ba, std::size_t k,
                        std::vector<double>& scratch) {
  if (ab.size() != ba.size())
    throw invalid_argument("mpdist_at: part lengths differ (" + std::to_string(ab.size()) + " vs " +
                           std::to_string(ba.size()) + ")");
  detail::require(!ab.empty(), "mpdist_at: empty parts");
  detail::require(k >= 1, "mpdist_at: k must be at least 1");
  scratch.resize(ab.size() + ba.size());
  std::copy(ab.begin(), ab.end(), scratch.begin());
  std::copy(ba.begin(), ba.end(), scratch.begin() + static_cast<std::ptrdiff_t>(ab.size()));
  if (scratch.size() <= k) return *std::max_element(scratch.begin(), scratch.end());
  const auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

inline double mpdist_at(std::span<const double> ab, std::span<const double> ba,
                        const MPdistParams& params) {
  detail::require(ab.size() == params.rows(), "mpdist_at: part length must be m - l + 1");
  std::vector<double> scratch;
  return mpdist_at(ab, ba, params.k, scratch);
}

/// Reusable buffers for computing many profiles on one thread.
class ProfileWorkspace {
 public:
  /// MPdist profile of the length-m query starting at `query_start`.
  std::vector<double> compute(const DistanceContext& ctx, std::size_t query_start,
                              const MPdistParams& params,
                              DistanceKernel kernel = DistanceKernel::streaming) {
    const std::size_t cols = ctx.columns();  // n - ℓ + 1
    const std::size_t rows = params.rows();  // m - ℓ + 1
    const std::size_t width = cols - rows + 1;  // n - m + 1
    detail::require(ctx.window_len() == params.l, "distance context built for a different l");
    detail::require(query_start + params.m <= ctx.series().size(), "query runs past the series end");

    row_.resize(cols);
    row_min_.resize(width);
    ba_.assign(cols, std::numeric_limits<double>::infinity());
    ab_.resize(width * rows);

    SegmentRowGenerator gen(ctx, query_start, kernel);
    SlidingMinimum slide(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      gen.next(row_);
      for (std::size_t j = 0; j < cols; ++j) ba_[j] = std::min(ba_[j], row_[j]);
      slide(row_, row_min_);
      for (std::size_t j = 0; j < width; ++j) ab_[j * rows + i] = row_min_[j];
    }

    std::vector<double> profile(width);
    const std::span<const double> ab(ab_), ba(ba_);
    for (std::size_t j = 0; j < width; ++j)
      profile[j] = mpdist_at(ab.subspan(j * rows, rows), ba.subspan(j, rows), params.k, scratch_);
    return profile;
  }

 private:
  std::vector<double> row_, row_min_, ba_, ab_, scratch_;
};

/// MPdist profile of segment `segment_index` (starting at segment_index · m).
inline MPdistProfile mpdist_profile(const TimeSeries& series, std::size_t segment_index,
                                    const MPdistParams& params,
                                    DistanceKernel kernel = DistanceKernel::streaming) {
  params.validate(series.size());
  if ((segment_index + 1) * params.m > series.size())
    throw invalid_argument("segment " + std::to_string(segment_index) + " of length " +
                           std::to_string(params.m) + " lies outside a series of length " +
                           std::to_string(series.size()));
  const auto stats = compute_sliding_stats(series, params.l);
  const DistanceContext ctx(series, stats);
  ProfileWorkspace ws;
  return {segment_index, ws.compute(ctx, segment_index * params.m, params, kernel)};
}

/// Profiles of segments 0 .. count-1, computed on up to `threads` threads.
/// Output is identical for every thread count.
inline std::vector<MPdistProfile> segment_profiles(const TimeSeries& series, std::size_t count,
                                                   const MPdistParams& params,
                                                   std::size_t threads = 1) {
  params.validate(series.size());
  detail::require(count * params.m <= series.size(), "more segments requested than fit in the series");
  const auto stats = compute_sliding_stats(series, params.l);
  const DistanceContext ctx(series, stats);
  std::vector<MPdistProfile> out(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
  std::vector<ProfileWorkspace> spaces(workers);
  // Static striping keeps one workspace per thread without locking.
  parallel_for(workers, workers, [&](std::size_t w) {
    for (std::size_t s = w; s < count; s += workers)
      out[s] = {s, spaces[w].compute(ctx, s * params.m, params)};
  });
  return out;
}

}  // namespace tsnip
