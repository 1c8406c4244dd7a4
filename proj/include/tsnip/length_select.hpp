// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tsnip/error.hpp>
#include <tsnip/mpdist.hpp>
#include <tsnip/snippets.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsnip {

/// How ℓ is derived from m: a fixed value, or ⌈m/2⌉ when unset.
struct InnerLengthRule {
  std::optional<std::size_t> fixed;

  MPdistParams params_for(std::size_t m) const { return MPdistParams::for_length(m, fixed); }
  std::size_t inner_length(std::size_t m) const { return fixed.value_or(default_inner_length(m)); }
};

enum class GridRule { pow2, arithmetic };

/// Candidate lengths in [m_min, m_max]: m_min·2^i, or m_min + i·step.
inline std::vector<std::size_t> make_grid(std::size_t m_min, std::size_t m_max,
                                          GridRule rule = GridRule::pow2, std::size_t step = 1) {
  if (m_min < 2 || m_min > m_max)
    throw invalid_argument("empty length grid: m_min=" + std::to_string(m_min) +
                           ", m_max=" + std::to_string(m_max));
  detail::require(rule == GridRule::pow2 || step >= 1, "grid step must be at least 1");
  std::vector<std::size_t> grid;
  for (std::size_t m = m_min; m <= m_max; m = rule == GridRule::pow2 ? m * 2 : m + step)
    grid.push_back(m);
  return grid;
}

/// Sum over unordered snippet pairs of the L1 area between their profiles,
/// divided by `normalizer` (0 when the normalizer is 0).
inline double criterion_score(std::span<const std::vector<double>> snippet_profiles,
                              double normalizer) {
  if (snippet_profiles.size() < 2)
    throw invalid_argument("length criterion needs at least 2 snippets, got " +
                           std::to_string(snippet_profiles.size()));
  double separation = 0.0;
  for (std::size_t p = 0; p < snippet_profiles.size(); ++p)
    for (std::size_t q = p + 1; q < snippet_profiles.size(); ++q) {
      const auto& a = snippet_profiles[p];
      const auto& b = snippet_profiles[q];
      detail::require(a.size() == b.size(), "snippet profiles differ in length");
      for (std::size_t i = 0; i < a.size(); ++i) separation += std::abs(a[i] - b[i]);
    }
  return normalizer > 0.0 ? separation / normalizer : 0.0;
}

/// Criterion for `result`, normalized by the largest entry over all segment
/// profiles at this length.
inline double criterion_score(const SnippetResult& result, std::span<const MPdistProfile> all) {
  detail::require(!all.empty(), "no segment profiles given");
  double max_value = 0.0;
  for (const auto& p : all)
    for (double v : p.values) max_value = std::max(max_value, v);
  return criterion_score(result.profiles, max_value);
}

/// Same, using the maximum recorded while the result was selected.
inline double criterion_score(const SnippetResult& result) {
  return criterion_score(result.profiles, result.max_profile_value);
}

struct LengthCandidate {
  std::size_t m = 0;
  double score = 0.0;
  SnippetResult result;
};

struct LengthReport {
  std::vector<LengthCandidate> candidates;  ///< ascending m
  std::size_t m_best = 0;

  const LengthCandidate& best() const {
    for (const auto& c : candidates)
      if (c.m == m_best) return c;
    throw error("length report has no candidate for m_best");
  }
};

/// Scores per-length results and picks the argmax (ties toward smaller m).
inline LengthReport build_length_report(std::map<std::size_t, SnippetResult> results) {
  detail::require(!results.empty(), "no length candidates to compare");
  LengthReport report;
  double best_score = -1.0;
  for (auto& [m, result] : results) {
    const double score = criterion_score(result);
    if (score > best_score) {
      best_score = score;
      report.m_best = m;
    }
    report.candidates.push_back({m, score, std::move(result)});
  }
  return report;
}

inline void check_grid(const TimeSeries& series, std::span<const std::size_t> grid,
                       const InnerLengthRule& rule, std::size_t count) {
  if (grid.empty()) throw invalid_argument("empty length grid");
  for (std::size_t m : grid) {
    if (m < 2 || m > series.size() / 2 || series.size() / m < count)
      throw invalid_argument("length " + std::to_string(m) + " admits " +
                             std::to_string(m ? series.size() / m : 0) + " segment(s) of a series of " +
                             std::to_string(series.size()) + "; " + std::to_string(std::max<std::size_t>(count, 2)) +
                             " needed");
    rule.params_for(m).validate(series.size());
  }
}

/// Sequential sweep: snippets at every grid length, then the argmax.
inline LengthReport select_length(const TimeSeries& series, std::span<const std::size_t> grid,
                                  const InnerLengthRule& rule, std::size_t count,
                                  std::size_t threads = 1) {
  check_grid(series, grid, rule, count);
  std::map<std::size_t, SnippetResult> results;
  for (std::size_t m : grid)
    results.emplace(m, select_snippets(series, rule.params_for(m), count, threads));
  return build_length_report(std::move(results));
}

}  // namespace tsnip
