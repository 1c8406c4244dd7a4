// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tsnip/error.hpp>
#include <tsnip/mpdist.hpp>
#include <tsnip/series.hpp>
#include <tsnip/worker_pool.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace tsnip {

/// The ⌊n/m⌋ non-overlapping length-m blocks of a series (zero-based starts).
/// The trailing n mod m samples belong to no segment.
struct SegmentSet {
  std::size_t m = 0;
  std::vector<std::size_t> starts;

  std::size_t count() const noexcept { return starts.size(); }
};

inline SegmentSet segment(const TimeSeries& series, std::size_t m) {
  const std::size_t n = series.size();
  if (m < 2 || m > n / 2)
    throw invalid_argument("segment length " + std::to_string(m) + " outside [2, n/2] for n=" +
                           std::to_string(n) + " (at least two segments are required)");
  SegmentSet set{m, {}};
  set.starts.reserve(n / m);
  for (std::size_t s = 0; s + m <= n; s += m) set.starts.push_back(s);
  return set;
}

/// Distances closer than this are ties. Profiles of identical segments agree
/// only to round-off, so exact comparison would break ties on noise.
inline constexpr double tie_tolerance = 1e-9;

struct Snippet {
  std::size_t index = 0;  ///< segment number (zero-based)
  std::size_t start = 0;  ///< index · m
  std::size_t length = 0;
  double frac = 0.0;      ///< |neighbors| / (n - m + 1)
  std::vector<std::size_t> neighbors;  ///< starts of windows whose nearest segment this is
};

struct SnippetResult {
  std::size_t n = 0;
  MPdistParams params;
  std::vector<Snippet> snippets;            ///< ordered by frac descending, then index
  std::vector<std::vector<double>> profiles;  ///< snippets[i]'s MPdist profile
  std::vector<double> curve;                ///< pointwise min over `profiles`
  double profile_area = 0.0;
  std::vector<double> area_trace;           ///< profile area after each greedy step
  std::vector<std::size_t> segment_neighbor_counts;  ///< per segment, over all segments
  std::size_t unassigned_count = 0;  ///< windows whose nearest segment is not a snippet
  double max_profile_value = 0.0;    ///< largest entry over every segment's profile

  std::size_t window_count() const noexcept { return n - params.m + 1; }
};

/// Pointwise minimum over a non-empty set of equal-length profiles.
inline std::vector<double> representativeness_curve(std::span<const std::vector<double>> profiles) {
  detail::require(!profiles.empty(), "representativeness curve needs at least one profile");
  std::vector<double> curve = profiles.front();
  for (const auto& p : profiles.subspan(1)) {
    if (p.size() != curve.size())
      throw invalid_argument("profile lengths differ (" + std::to_string(p.size()) + " vs " +
                             std::to_string(curve.size()) + ")");
    for (std::size_t j = 0; j < curve.size(); ++j) curve[j] = std::min(curve[j], p[j]);
  }
  return curve;
}

inline std::vector<double> representativeness_curve(std::span<const MPdistProfile> profiles) {
  std::vector<std::vector<double>> values;
  values.reserve(profiles.size());
  for (const auto& p : profiles) values.push_back(p.values);
  return representativeness_curve(std::span<const std::vector<double>>(values));
}

inline double profile_area(std::span<const double> curve) {
  detail::require(!curve.empty(), "profile area of an empty curve");
  return std::accumulate(curve.begin(), curve.end(), 0.0);
}

/// Greedy snippet selection over precomputed profiles of every segment.
///
/// Each step adds the segment whose profile minimizes the area of the updated
/// curve (ties toward the lower index). Windows are then attributed to their
/// nearest segment over all segments (ties toward the lower index). Ties are
/// judged with `tie_tolerance` per window.
inline SnippetResult select_snippets_from_profiles(std::span<const MPdistProfile> all,
                                                   std::size_t n, const MPdistParams& params,
                                                   std::size_t count, std::size_t threads = 1) {
  const std::size_t segments = all.size();
  if (count < 1 || count > segments)
    throw invalid_argument("snippet count " + std::to_string(count) + " outside [1, " +
                           std::to_string(segments) + "]");
  const std::size_t width = n - params.m + 1;
  for (const auto& p : all)
    detail::require(p.values.size() == width, "profile length must be n - m + 1");

  std::vector<double> curve(width, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(segments, false);
  std::vector<std::size_t> order;
  std::vector<double> trace;
  std::vector<double> candidate_area(segments);
  for (std::size_t step = 0; step < count; ++step) {
    parallel_for(segments, threads, [&](std::size_t s) {
      if (chosen[s]) return;
      double area = 0.0;
      const auto& d = all[s].values;
      for (std::size_t j = 0; j < width; ++j) area += std::min(curve[j], d[j]);
      candidate_area[s] = area;
    });
    const double area_tie = tie_tolerance * static_cast<double>(width);
    std::size_t best = segments;
    for (std::size_t s = 0; s < segments; ++s)
      if (!chosen[s] && (best == segments || candidate_area[s] < candidate_area[best] - area_tie))
        best = s;
    chosen[best] = true;
    order.push_back(best);
    const auto& d = all[best].values;
    for (std::size_t j = 0; j < width; ++j) curve[j] = std::min(curve[j], d[j]);
    trace.push_back(candidate_area[best]);
  }

  SnippetResult result;
  result.n = n;
  result.params = params;
  result.area_trace = std::move(trace);
  result.segment_neighbor_counts.assign(segments, 0);
  std::vector<std::size_t> owner(width);
  for (std::size_t j = 0; j < width; ++j) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < segments; ++s)
      if (all[s].values[j] < all[best].values[j] - tie_tolerance) best = s;
    owner[j] = best;
    ++result.segment_neighbor_counts[best];
  }
  double max_value = 0.0;
  for (const auto& p : all)
    for (double v : p.values) max_value = std::max(max_value, v);
  result.max_profile_value = max_value;

  for (std::size_t s : order) {
    Snippet snip{s, s * params.m, params.m, 0.0, {}};
    for (std::size_t j = 0; j < width; ++j)
      if (owner[j] == s) snip.neighbors.push_back(j);
    snip.frac = static_cast<double>(snip.neighbors.size()) / static_cast<double>(width);
    result.snippets.push_back(std::move(snip));
  }
  for (std::size_t j = 0; j < width; ++j)
    if (!chosen[owner[j]]) ++result.unassigned_count;

  std::stable_sort(result.snippets.begin(), result.snippets.end(),
                   [](const Snippet& a, const Snippet& b) {
                     if (a.neighbors.size() != b.neighbors.size())
                       return a.neighbors.size() > b.neighbors.size();
                     return a.index < b.index;
                   });
  for (const auto& snip : result.snippets) result.profiles.push_back(all[snip.index].values);
  result.curve = representativeness_curve(std::span<const std::vector<double>>(result.profiles));
  result.profile_area = profile_area(result.curve);
  return result;
}

/// Profiles of all ⌊n/m⌋ segments, then greedy selection of `count` snippets.
inline SnippetResult select_snippets(const TimeSeries& series, const MPdistParams& params,
                                     std::size_t count, std::size_t threads = 1) {
  params.validate(series.size());
  const auto segs = segment(series, params.m);
  if (count < 1 || count > segs.count())
    throw invalid_argument("snippet count " + std::to_string(count) + " outside [1, " +
                           std::to_string(segs.count()) + "]");
  const auto profiles = segment_profiles(series, segs.count(), params, threads);
  return select_snippets_from_profiles(profiles, series.size(), params, count, threads);
}

}  // namespace tsnip
