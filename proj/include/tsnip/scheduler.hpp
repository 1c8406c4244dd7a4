// SPDX-License-Identifier: Apache-2.0
#pragma once

// Length-sweep scheduling: predict per-length cost, balance lengths across
// workers, run each worker's list, and record observed runtimes so later runs
// can fit the cost model on them.

#include <tsnip/cost_model.hpp>
#include <tsnip/error.hpp>
#include <tsnip/length_select.hpp>
#include <tsnip/partition.hpp>
#include <tsnip/snippets.hpp>
#include <tsnip/worker_pool.hpp>

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tsnip {

/// One observed job runtime, as stored in the training log.
struct JobTiming {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t l = 0;
  double seconds = 0.0;
  double timestamp = 0.0;  ///< unix seconds
};

inline void to_json(nlohmann::json& j, const JobTiming& t) {
  j = nlohmann::json{{"m", t.m}, {"n", t.n}, {"l", t.l}, {"seconds", t.seconds}, {"timestamp", t.timestamp}};
}

inline void from_json(const nlohmann::json& j, JobTiming& t) {
  j.at("m").get_to(t.m);
  j.at("n").get_to(t.n);
  j.at("l").get_to(t.l);
  j.at("seconds").get_to(t.seconds);
  t.timestamp = j.value("timestamp", 0.0);
}

/// Append-only JSON-lines file of job runtimes.
class TrainingLog {
 public:
  static constexpr const char* path_env = "TSNIP_TRAINING_LOG";
  static constexpr const char* default_path = "tsnip_training.jsonl";

  explicit TrainingLog(std::string path) : path_(std::move(path)) {}

  /// Path from the environment override, else the default file name.
  static TrainingLog from_env() {
    const char* env = std::getenv(path_env);
    return TrainingLog(env && *env ? env : default_path);
  }

  const std::string& path() const noexcept { return path_; }

  /// Every parseable record; a missing file reads as empty.
  std::vector<JobTiming> load() const {
    std::vector<JobTiming> out;
    std::ifstream in(path_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out.push_back(nlohmann::json::parse(line).get<JobTiming>());
      } catch (const nlohmann::json::exception& e) {
        throw input_error("training log '" + path_ + "' line " + std::to_string(line_no) + ": " +
                          e.what());
      }
    }
    return out;
  }

  void append(std::span<const JobTiming> records) const {
    std::lock_guard lock(mutex());
    std::ofstream out(path_, std::ios::app);
    if (!out) throw input_error("cannot append to training log '" + path_ + "'");
    for (const auto& r : records) out << nlohmann::json(r).dump() << '\n';
  }

 private:
  static std::mutex& mutex() {
    static std::mutex m;
    return m;
  }
  std::string path_;
};

/// Per-length weights: the fitted model when history for this n covers at
/// least degree + 1 distinct lengths, else the analytic default.
struct CostPlan {
  std::vector<double> weights;
  std::optional<CostModel> model;
};

inline CostPlan predict_costs(std::span<const std::size_t> grid, std::size_t n,
                              const InnerLengthRule& rule, std::span<const JobTiming> history,
                              std::size_t degree = 2) {
  std::vector<CostSample> samples;
  std::set<std::size_t> distinct;
  for (const auto& t : history)
    if (t.n == n && t.l == rule.inner_length(t.m) && t.seconds > 0.0) {
      samples.push_back({static_cast<double>(t.m), t.seconds});
      distinct.insert(t.m);
    }
  CostPlan plan;
  if (distinct.size() >= degree + 1) {
    plan.model = fit_cost_model(samples, degree);
    // A fitted polynomial can dip below zero outside its data; fall back to
    // the smallest observed cost there.
    double floor = samples.front().seconds;
    for (const auto& s : samples) floor = std::min(floor, s.seconds);
    for (std::size_t m : grid)
      plan.weights.push_back(std::max(plan.model->predict(static_cast<double>(m)), floor));
  } else {
    for (std::size_t m : grid) plan.weights.push_back(default_cost(m, n, rule.inner_length(m)));
  }
  return plan;
}

struct SweepOptions {
  std::size_t workers = 1;        ///< first level: lengths spread over workers
  std::size_t inner_threads = 1;  ///< second level: segment profiles within a length
  std::size_t degree = 2;         ///< cost-model polynomial degree
  std::vector<JobTiming> history;
};

struct RunOutcome {
  std::map<std::size_t, SnippetResult> results;
  std::vector<JobTiming> timings;  ///< ascending m
};

/// Runs every worker's length list. Results are keyed by m, so the merged
/// map does not depend on the worker count.
inline RunOutcome run_schedule(const TimeSeries& series, std::span<const std::size_t> grid,
                               const Schedule& schedule, const InnerLengthRule& rule,
                               std::size_t count, std::size_t inner_threads = 1) {
  std::set<std::size_t> seen;
  for (const auto& list : schedule.assignments)
    for (std::size_t job : list) {
      detail::require(job < grid.size(), "schedule refers to a job outside the grid");
      detail::require(seen.insert(job).second, "schedule assigns a job twice");
    }
  detail::require(seen.size() == grid.size(), "schedule leaves grid lengths unassigned");

  RunOutcome outcome;
  std::mutex merge;
  run_job_lists<std::size_t>(schedule.assignments, [&](std::size_t, const std::size_t& job) {
    const std::size_t m = grid[job];
    const auto started = std::chrono::steady_clock::now();
    SnippetResult result;
    try {
      result = select_snippets(series, rule.params_for(m), count, inner_threads);
    } catch (const std::exception& e) {
      throw error("length m=" + std::to_string(m) + ": " + e.what());
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
    const double now = std::chrono::duration<double>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
    std::lock_guard lock(merge);
    outcome.timings.push_back({m, series.size(), result.params.l, took.count(), now});
    outcome.results.emplace(m, std::move(result));
  });
  std::sort(outcome.timings.begin(), outcome.timings.end(),
            [](const JobTiming& a, const JobTiming& b) { return a.m < b.m; });
  return outcome;
}

struct SweepOutcome {
  LengthReport report;
  Schedule schedule;
  CostPlan costs;
  std::vector<JobTiming> timings;
};

/// Plans, runs and scores a length sweep.
inline SweepOutcome sweep_lengths(const TimeSeries& series, std::span<const std::size_t> grid,
                                  const InnerLengthRule& rule, std::size_t count,
                                  const SweepOptions& options) {
  check_grid(series, grid, rule, count);
  detail::require(options.workers >= 1, "worker count must be at least 1");
  SweepOutcome out;
  out.costs = predict_costs(grid, series.size(), rule, options.history, options.degree);
  out.schedule = kk_partition(out.costs.weights, options.workers);
  auto run = run_schedule(series, grid, out.schedule, rule, count, options.inner_threads);
  out.timings = std::move(run.timings);
  out.report = build_length_report(std::move(run.results));
  return out;
}

}  // namespace tsnip
