// SPDX-License-Identifier: Apache-2.0
#pragma once

// Karmarkar–Karp largest differencing for splitting jobs across workers.

#include <tsnip/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace tsnip {

struct Schedule {
  std::vector<std::vector<std::size_t>> assignments;  ///< per worker: job indices, ascending
  std::vector<double> loads;                          ///< per worker: summed weight
  double differencing_value = 0.0;  ///< spread left by the differencing loop

  double makespan() const noexcept {
    return loads.empty() ? 0.0 : *std::max_element(loads.begin(), loads.end());
  }
  double spread() const noexcept {
    if (loads.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(loads.begin(), loads.end());
    return *hi - *lo;
  }
};

namespace detail {

inline void check_weights(std::span<const double> weights, std::size_t workers) {
  require(workers >= 1, "worker count must be at least 1");
  require(!weights.empty(), "no jobs to partition");
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw invalid_argument("job " + std::to_string(i) + " has non-positive weight");
}

inline Schedule finish_schedule(std::vector<std::vector<std::size_t>> sets,
                                std::span<const double> weights, double value) {
  Schedule s;
  s.differencing_value = value;
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    double load = 0.0;
    for (std::size_t j : set) load += weights[j];
    s.loads.push_back(load);
  }
  s.assignments = std::move(sets);
  return s;
}

// Two-way: difference the two largest, remember that they sit on opposite
// sides, two-color the resulting tree.
inline Schedule kk_two_way(std::span<const double> weights) {
  const std::size_t count = weights.size();
  using Entry = std::pair<double, std::size_t>;
  auto lower = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  for (std::size_t i = 0; i < count; ++i) heap.emplace(weights[i], i);
  std::vector<std::vector<std::size_t>> apart(count);
  while (heap.size() > 1) {
    const auto big = heap.top();
    heap.pop();
    const auto small = heap.top();
    heap.pop();
    apart[big.second].push_back(small.second);
    apart[small.second].push_back(big.second);
    heap.emplace(big.first - small.first, big.second);
  }
  const double value = heap.top().first;

  std::vector<int> color(count, -1);
  std::vector<std::vector<std::size_t>> sets(2);
  for (std::size_t root = 0; root < count; ++root) {
    if (color[root] >= 0) continue;
    color[root] = 0;
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      sets[static_cast<std::size_t>(color[v])].push_back(v);
      for (std::size_t u : apart[v])
        if (color[u] < 0) {
          color[u] = 1 - color[v];
          stack.push_back(u);
        }
    }
  }
  return finish_schedule(std::move(sets), weights, value);
}

// Multiway: every item is a W-tuple of (load, jobs) sorted by load
// descending. The two tuples with the largest spread are merged by pairing
// the heaviest part of one with the lightest of the other.
inline Schedule kk_multiway(std::span<const double> weights, std::size_t workers) {
  struct Part {
    double load = 0.0;
    std::vector<std::size_t> jobs;
  };
  struct Tuple {
    std::vector<Part> parts;
    std::size_t id = 0;
    double spread() const { return parts.front().load - parts.back().load; }
  };
  auto by_load = [](const Part& a, const Part& b) { return a.load > b.load; };

  std::vector<Tuple> items;
  items.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    Tuple t{std::vector<Part>(workers), i};
    t.parts[0] = {weights[i], {i}};
    items.push_back(std::move(t));
  }
  std::size_t next_id = weights.size();
  auto largest = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < items.size(); ++i) {
      const double a = items[i].spread(), b = items[best].spread();
      if (a > b || (a == b && items[i].id < items[best].id)) best = i;
    }
    Tuple t = std::move(items[best]);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(best));
    return t;
  };
  while (items.size() > 1) {
    Tuple a = largest();
    Tuple b = largest();
    Tuple merged{std::vector<Part>(workers), next_id++};
    for (std::size_t w = 0; w < workers; ++w) {
      auto& src_a = a.parts[w];
      auto& src_b = b.parts[workers - 1 - w];
      merged.parts[w].load = src_a.load + src_b.load;
      merged.parts[w].jobs = std::move(src_a.jobs);
      merged.parts[w].jobs.insert(merged.parts[w].jobs.end(), src_b.jobs.begin(), src_b.jobs.end());
    }
    std::stable_sort(merged.parts.begin(), merged.parts.end(), by_load);
    items.push_back(std::move(merged));
  }
  const double value = items.front().spread();
  std::vector<std::vector<std::size_t>> sets;
  for (auto& p : items.front().parts) sets.push_back(std::move(p.jobs));
  return finish_schedule(std::move(sets), weights, value);
}

}  // namespace detail

/// Splits weighted jobs across `workers` with the largest differencing method.
/// Workers may end up empty when there are fewer jobs than workers.
inline Schedule kk_partition(std::span<const double> weights, std::size_t workers) {
  detail::check_weights(weights, workers);
  if (workers == 1) {
    std::vector<std::vector<std::size_t>> all(1);
    for (std::size_t i = 0; i < weights.size(); ++i) all[0].push_back(i);
    return detail::finish_schedule(std::move(all), weights, 0.0);
  }
  if (workers == 2) return detail::kk_two_way(weights);
  return detail::kk_multiway(weights, workers);
}

}  // namespace tsnip
