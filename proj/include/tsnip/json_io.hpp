// SPDX-License-Identifier: Apache-2.0
#pragma once

// Versioned JSON documents and plot-data CSV exports.

#include <tsnip/labeling.hpp>
#include <tsnip/length_select.hpp>
#include <tsnip/snippets.hpp>

#include "json.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace tsnip {

inline constexpr int schema_version = 1;

inline nlohmann::json snippet_result_json(const SnippetResult& r) {
  nlohmann::json snippets = nlohmann::json::array();
  for (const auto& s : r.snippets)
    snippets.push_back({{"index", s.index},
                        {"start", s.start},
                        {"frac", s.frac},
                        {"neighbor_count", s.neighbors.size()}});
  return {{"schema", schema_version},
          {"n", r.n},
          {"m", r.params.m},
          {"l", r.params.l},
          {"k", r.params.k},
          {"snippets", std::move(snippets)},
          {"unassigned_count", r.unassigned_count},
          {"profile_area", r.profile_area}};
}

inline nlohmann::json length_report_json(const LengthReport& report) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : report.candidates)
    candidates.push_back({{"m", c.m}, {"score", c.score}, {"profile_area", c.result.profile_area}});
  return {{"schema", schema_version}, {"m_best", report.m_best}, {"candidates", std::move(candidates)}};
}

inline nlohmann::json eval_report_json(const EvalReport& report) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : report.classes)
    classes.push_back({{"truth_class", c.truth_class},
                       {"predicted_class", c.predicted_class},
                       {"tp", c.tp},
                       {"fp", c.fp},
                       {"fn", c.fn},
                       {"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1}});
  return {{"schema", schema_version}, {"macro_f1", report.macro_f1}, {"classes", std::move(classes)}};
}

/// Curve as one value per line (n - m + 1 rows).
inline void write_curve_csv(std::ostream& out, const SnippetResult& r) { write_values_csv(out, r.curve); }

/// One column per snippet (in result order), one row per window, with header.
inline void write_profiles_csv(std::ostream& out, const SnippetResult& r) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  for (std::size_t s = 0; s < r.snippets.size(); ++s)
    buf << (s ? "," : "") << "snippet_" << r.snippets[s].index;
  buf << '\n';
  for (std::size_t j = 0; j < r.window_count(); ++j) {
    for (std::size_t s = 0; s < r.profiles.size(); ++s) buf << (s ? "," : "") << r.profiles[s][j];
    buf << '\n';
  }
  out << buf.str();
}

}  // namespace tsnip
