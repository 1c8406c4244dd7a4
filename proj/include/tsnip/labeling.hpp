// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tsnip/error.hpp>
#include <tsnip/snippets.hpp>

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace tsnip {

/// One class id per point.
struct LabelSequence {
  static constexpr int residual = -1;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
};

/// Labels every point with the rank (in `result.snippets`) of the snippet
/// nearest to the window starting there; ties go to the lower rank. The last
/// m - 1 points, which start no window, inherit the last window's label.
inline LabelSequence label_series(const SnippetResult& result, std::size_t n) {
  detail::require(n == result.n, "label_series: n=" + std::to_string(n) +
                                     " does not match the result's series length " +
                                     std::to_string(result.n));
  detail::require(!result.profiles.empty(), "label_series: result has no snippets");
  const std::size_t width = result.window_count();
  LabelSequence seq;
  seq.labels.assign(n, LabelSequence::residual);
  for (std::size_t j = 0; j < width; ++j) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < result.profiles.size(); ++s)
      if (result.profiles[s][j] < result.profiles[best][j] - tie_tolerance) best = s;
    seq.labels[j] = static_cast<int>(best);
  }
  for (std::size_t i = width; i < n; ++i) seq.labels[i] = seq.labels[width - 1];
  return seq;
}

struct ClassScore {
  int truth_class = 0;
  int predicted_class = LabelSequence::residual;  ///< matched prediction id, residual if none
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct EvalReport {
  std::vector<ClassScore> classes;  ///< ascending truth class
  double macro_f1 = 0.0;
};

namespace detail {

inline double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

/// Point-wise precision/recall/F1 per truth class.
///
/// Predicted ids carry no meaning, so each is first matched to at most one
/// truth class: repeatedly take the unmatched pair with the largest overlap
/// (ties: smaller predicted class, then lower truth id, then the predicted
/// class that appears first in the sequence). Unmatched predictions count as
/// misses for every truth class.
inline EvalReport evaluate(const LabelSequence& pred, const LabelSequence& truth) {
  if (pred.size() != truth.size())
    throw invalid_argument("label length mismatch: predicted " + std::to_string(pred.size()) +
                           ", truth " + std::to_string(truth.size()));
  if (pred.size() == 0) throw invalid_argument("cannot evaluate empty label sequences");

  std::map<int, std::size_t> pred_size, pred_first, truth_size;
  std::map<std::pair<int, int>, std::size_t> overlap;  // (pred, truth) -> points
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int p = pred.labels[i], t = truth.labels[i];
    ++pred_size[p];
    pred_first.try_emplace(p, i);
    ++truth_size[t];
    ++overlap[{p, t}];
  }

  struct Pair {
    std::size_t overlap, pred_size;
    int truth;
    std::size_t first;
    int pred;
  };
  std::vector<Pair> pairs;
  for (const auto& [key, count] : overlap)
    pairs.push_back({count, pred_size[key.first], key.second, pred_first[key.first], key.first});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(b.overlap, a.pred_size, a.truth, a.first) <
           std::tie(a.overlap, b.pred_size, b.truth, b.first);
  });

  std::map<int, int> pred_to_truth, truth_to_pred;
  for (const auto& pr : pairs) {
    if (pred_to_truth.count(pr.pred) || truth_to_pred.count(pr.truth)) continue;
    pred_to_truth[pr.pred] = pr.truth;
    truth_to_pred[pr.truth] = pr.pred;
  }

  EvalReport report;
  for (const auto& [t, size] : truth_size) {
    ClassScore c;
    c.truth_class = t;
    const auto match = truth_to_pred.find(t);
    if (match != truth_to_pred.end()) {
      c.predicted_class = match->second;
      c.tp = overlap[{match->second, t}];
      c.fp = pred_size[match->second] - c.tp;
    }
    c.fn = size - c.tp;
    c.precision = detail::ratio(c.tp, c.tp + c.fp);
    c.recall = detail::ratio(c.tp, c.tp + c.fn);
    c.f1 = c.tp == 0 ? 0.0 : 2.0 * c.precision * c.recall / (c.precision + c.recall);
    report.classes.push_back(c);
  }
  double sum = 0.0;
  for (const auto& c : report.classes) sum += c.f1;
  report.macro_f1 = sum / static_cast<double>(report.classes.size());
  return report;
}

/// One integer per line; blank lines skipped.
inline LabelSequence read_labels(std::istream& in, const std::string& source = "labels") {
  LabelSequence seq;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cell = detail::trim(line);
    if (cell.empty()) continue;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
      throw input_error(source + ": non-integer label '" + std::string(cell) + "' at row " +
                        std::to_string(line_no));
    seq.labels.push_back(v);
  }
  return seq;
}

inline LabelSequence load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  return read_labels(in, path);
}

inline void write_labels(std::ostream& out, const LabelSequence& seq) {
  std::string buf;
  for (int v : seq.labels) {
    buf += std::to_string(v);
    buf += '\n';
  }
  out << buf;
}

}  // namespace tsnip
