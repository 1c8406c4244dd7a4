// SPDX-License-Identifier: Apache-2.0
//
// tsnip: discover snippets, sweep snippet lengths, label series, score labels.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <tsnip/tsnip.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::size_t column = 0;
  bool all_columns = false;
  std::optional<std::size_t> m;
  std::optional<std::size_t> m_min, m_max;
  std::string grid = "pow2";
  std::size_t step = 1;
  std::optional<std::size_t> l;
  std::size_t k = 2;
  std::size_t workers = 1;
  std::size_t threads = 1;
  std::size_t degree = 2;
  std::string out;
  std::string curve_out;
  std::string profiles_out;
  std::string training_log;
  bool no_log = false;
  std::string pred, truth;
};

std::size_t default_workers() {
  if (const char* env = std::getenv("TSNIP_WORKERS"); env && *env) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw tsnip::input_error("cannot write '" + path + "'");
  out << text;
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path);
  if (!out) throw tsnip::input_error("cannot write '" + path + "'");
  fn(out);
}

void export_plots(const RunConfig& cfg, const tsnip::SnippetResult& r) {
  if (!cfg.curve_out.empty())
    write_file(cfg.curve_out, [&](std::ostream& o) { tsnip::write_curve_csv(o, r); });
  if (!cfg.profiles_out.empty())
    write_file(cfg.profiles_out, [&](std::ostream& o) { tsnip::write_profiles_csv(o, r); });
}

std::vector<std::size_t> grid_of(const RunConfig& cfg) {
  if (*cfg.m_min > *cfg.m_max)
    throw usage_error("empty length grid: --m-min " + std::to_string(*cfg.m_min) + " > --m-max " +
                      std::to_string(*cfg.m_max));
  const auto rule = cfg.grid == "arith" ? tsnip::GridRule::arithmetic : tsnip::GridRule::pow2;
  try {
    return tsnip::make_grid(*cfg.m_min, *cfg.m_max, rule, cfg.step);
  } catch (const tsnip::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

void require_single_mode(const RunConfig& cfg) {
  const bool fixed = cfg.m.has_value();
  const bool range = cfg.m_min.has_value() || cfg.m_max.has_value();
  if (fixed == range) throw usage_error("give exactly one of --m or --m-min/--m-max");
  if (range && !(cfg.m_min && cfg.m_max)) throw usage_error("--m-min and --m-max go together");
}

tsnip::SweepOutcome run_sweep(const RunConfig& cfg, const tsnip::TimeSeries& series) {
  const auto grid = grid_of(cfg);
  const tsnip::InnerLengthRule rule{cfg.l};
  auto log = cfg.training_log.empty() ? tsnip::TrainingLog::from_env()
                                      : tsnip::TrainingLog(cfg.training_log);
  tsnip::SweepOptions options;
  options.workers = cfg.workers;
  options.inner_threads = cfg.threads;
  options.degree = cfg.degree;
  if (!cfg.no_log) options.history = log.load();
  auto outcome = tsnip::sweep_lengths(series, grid, rule, cfg.k, options);
  if (!cfg.no_log) log.append(outcome.timings);
  return outcome;
}

int cmd_discover(const RunConfig& cfg) {
  if (!cfg.m) throw usage_error("discover requires --m");
  const auto params = tsnip::MPdistParams::for_length(*cfg.m, cfg.l);
  if (cfg.all_columns) {
    nlohmann::json doc{{"schema", tsnip::schema_version}, {"coordinates", nlohmann::json::array()}};
    for (const auto& series : tsnip::load_all_columns(cfg.input)) {
      auto r = tsnip::select_snippets(series, params, cfg.k, cfg.threads);
      auto entry = tsnip::snippet_result_json(r);
      entry["coordinate"] = series.coordinate_id();
      doc["coordinates"].push_back(std::move(entry));
    }
    write_text(cfg.out, doc.dump(2) + "\n");
    return 0;
  }
  const auto series = tsnip::load_series(cfg.input, cfg.column);
  const auto result = tsnip::select_snippets(series, params, cfg.k, cfg.threads);
  write_text(cfg.out, tsnip::snippet_result_json(result).dump(2) + "\n");
  export_plots(cfg, result);
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto series = tsnip::load_series(cfg.input, cfg.column);
  const auto outcome = run_sweep(cfg, series);
  auto doc = tsnip::length_report_json(outcome.report);
  doc["best"] = tsnip::snippet_result_json(outcome.report.best().result);
  write_text(cfg.out, doc.dump(2) + "\n");
  export_plots(cfg, outcome.report.best().result);
  return 0;
}

int cmd_label(const RunConfig& cfg) {
  require_single_mode(cfg);
  const auto series = tsnip::load_series(cfg.input, cfg.column);
  tsnip::SnippetResult result;
  if (cfg.m) {
    result = tsnip::select_snippets(series, tsnip::MPdistParams::for_length(*cfg.m, cfg.l), cfg.k,
                                    cfg.threads);
  } else {
    result = run_sweep(cfg, series).report.best().result;
  }
  std::ostringstream buf;
  tsnip::write_labels(buf, tsnip::label_series(result, series.size()));
  write_text(cfg.out, buf.str());
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  const auto pred = tsnip::load_labels(cfg.pred);
  const auto truth = tsnip::load_labels(cfg.truth);
  write_text(cfg.out, tsnip::eval_report_json(tsnip::evaluate(pred, truth)).dump(2) + "\n");
  return 0;
}

void add_series_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--input,-i", cfg.input, "CSV file with one or more numeric columns")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--column,-c", cfg.column, "zero-based column to analyze");
  cmd->add_option("--l", cfg.l, "inner subsequence length (default ceil(m/2))");
  cmd->add_option("--k", cfg.k, "number of snippets")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", cfg.threads, "threads for segment profiles within one length")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out,-o", cfg.out, "output file (default stdout)");
}

void add_sweep_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--m-min", cfg.m_min, "smallest candidate length");
  cmd->add_option("--m-max", cfg.m_max, "largest candidate length");
  cmd->add_option("--grid", cfg.grid, "candidate grid: pow2 (doubling) or arith")
      ->check(CLI::IsMember({"pow2", "arith"}));
  cmd->add_option("--step", cfg.step, "step for --grid arith")->check(CLI::PositiveNumber);
  cmd->add_option("--workers,-w", cfg.workers, "parallel length workers (env TSNIP_WORKERS)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--degree", cfg.degree, "cost-model polynomial degree");
  cmd->add_option("--training-log", cfg.training_log, "runtime log (env TSNIP_TRAINING_LOG)");
  cmd->add_flag("--no-log", cfg.no_log, "neither read nor append the runtime log");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-series snippet discovery, length selection and labeling"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.workers = default_workers();

  auto* discover = app.add_subcommand("discover", "find snippets for a fixed length");
  add_series_options(discover, cfg);
  discover->add_option("--m", cfg.m, "snippet length");
  discover->add_flag("--all-columns", cfg.all_columns, "analyze every column independently");
  discover->add_option("--export-curve", cfg.curve_out, "write the representativeness curve CSV");
  discover->add_option("--export-profiles", cfg.profiles_out, "write snippet profiles CSV");

  auto* sweep = app.add_subcommand("sweep", "pick the best snippet length from a range");
  add_series_options(sweep, cfg);
  add_sweep_options(sweep, cfg);
  sweep->get_option("--m-min")->required();
  sweep->get_option("--m-max")->required();
  sweep->add_option("--export-curve", cfg.curve_out, "curve CSV of the winning length");
  sweep->add_option("--export-profiles", cfg.profiles_out, "profiles CSV of the winning length");

  auto* label = app.add_subcommand("label", "label every point with its nearest snippet");
  add_series_options(label, cfg);
  add_sweep_options(label, cfg);
  label->add_option("--m", cfg.m, "fixed snippet length (instead of a sweep)");

  auto* eval = app.add_subcommand("eval", "score predicted labels against ground truth");
  eval->add_option("--pred", cfg.pred, "predicted labels, one integer per line")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--truth", cfg.truth, "ground-truth labels, one integer per line")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out,-o", cfg.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (discover->parsed()) return cmd_discover(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (label->parsed()) return cmd_label(cfg);
    return cmd_eval(cfg);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
