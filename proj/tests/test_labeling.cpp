// SPDX-License-Identifier: Apache-2.0
#include <tsnip/labeling.hpp>

#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace {

tsnip::LabelSequence seq(std::vector<int> v) { return tsnip::LabelSequence{std::move(v)}; }

TEST(LabelSeries, SingleSnippetLabelsEverything) {
  const tsnip::TimeSeries s(tsnip::testing::random_normal(200, 3));
  const auto r = tsnip::select_snippets(s, tsnip::MPdistParams::for_length(20), 1);
  const auto labels = tsnip::label_series(r, s.size());
  ASSERT_EQ(labels.size(), 200u);
  for (int v : labels.labels) EXPECT_EQ(v, 0);
  EXPECT_THROW(tsnip::label_series(r, 199), tsnip::invalid_argument);
}

TEST(LabelSeries, BoundaryNearRegimeChange) {
  const std::size_t m = 32;
  const auto s = tsnip::testing::two_regime_series(1024, 32, 512, 0.05, 9);
  const tsnip::TimeSeries series(s.values);
  const auto r = tsnip::select_snippets(series, tsnip::MPdistParams::for_length(m), 2);
  const auto labels = tsnip::label_series(r, series.size());
  ASSERT_EQ(labels.size(), series.size());
  const int first = labels.labels[0];
  std::size_t change = 0;
  while (change < labels.size() && labels.labels[change] == first) ++change;
  EXPECT_LE(change > 512 ? change - 512 : 512 - change, m);
  const auto report = tsnip::evaluate(labels, tsnip::LabelSequence{s.truth});
  EXPECT_GE(report.macro_f1, 0.9);
}

TEST(Evaluate, Identity) {
  const auto truth = seq({0, 0, 1, 1, 1, 2, 2});
  const auto r = tsnip::evaluate(truth, truth);
  for (const auto& c : r.classes) {
    EXPECT_EQ(c.precision, 1.0);
    EXPECT_EQ(c.recall, 1.0);
    EXPECT_EQ(c.f1, 1.0);
  }
  EXPECT_EQ(r.macro_f1, 1.0);
}

TEST(Evaluate, Arithmetic) {
  // class 0: TP 8, FP 2, FN 2
  std::vector<int> truth, pred;
  for (int i = 0; i < 8; ++i) truth.push_back(0), pred.push_back(0);
  for (int i = 0; i < 2; ++i) truth.push_back(0), pred.push_back(1);
  for (int i = 0; i < 2; ++i) truth.push_back(1), pred.push_back(0);
  for (int i = 0; i < 8; ++i) truth.push_back(1), pred.push_back(1);
  const auto r = tsnip::evaluate(seq(pred), seq(truth));
  EXPECT_EQ(r.classes[0].tp, 8u);
  EXPECT_EQ(r.classes[0].fp, 2u);
  EXPECT_EQ(r.classes[0].fn, 2u);
  EXPECT_NEAR(r.classes[0].precision, 0.8, 1e-15);
  EXPECT_NEAR(r.classes[0].recall, 0.8, 1e-15);
  EXPECT_NEAR(r.classes[0].f1, 0.8, 1e-15);
}

TEST(Evaluate, SingleClassPrediction) {
  const auto r = tsnip::evaluate(seq({5, 5, 5, 5, 5}), seq({0, 0, 0, 1, 1}));
  ASSERT_EQ(r.classes.size(), 2u);
  EXPECT_EQ(r.classes[0].recall, 1.0);
  EXPECT_EQ(r.classes[0].predicted_class, 5);
  EXPECT_EQ(r.classes[1].f1, 0.0);
  EXPECT_EQ(r.classes[1].predicted_class, tsnip::LabelSequence::residual);
}

TEST(Evaluate, Errors) {
  EXPECT_THROW(tsnip::evaluate(seq({0, 1}), seq({0})), tsnip::invalid_argument);
  EXPECT_THROW(tsnip::evaluate(seq({}), seq({})), tsnip::invalid_argument);
}

TEST(Evaluate, RelabelingInvariantAndHarmonic) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + rng() % 200;
    const int classes = 1 + static_cast<int>(rng() % 4);
    std::vector<int> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng() % static_cast<unsigned>(classes));
      pred[i] = rng() % 4 ? truth[i] : static_cast<int>(rng() % 5);
    }
    std::vector<int> perm{0, 1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = 10 + perm[static_cast<std::size_t>(pred[i])];
    const auto a = tsnip::evaluate(seq(pred), seq(truth));
    const auto b = tsnip::evaluate(seq(relabeled), seq(truth));
    ASSERT_EQ(a.classes.size(), b.classes.size());
    EXPECT_EQ(a.macro_f1, b.macro_f1);
    EXPECT_GE(a.macro_f1, 0.0);
    EXPECT_LE(a.macro_f1, 1.0);
    for (std::size_t c = 0; c < a.classes.size(); ++c) {
      EXPECT_EQ(a.classes[c].tp, b.classes[c].tp);
      EXPECT_EQ(a.classes[c].fp, b.classes[c].fp);
      const auto& k = a.classes[c];
      EXPECT_NEAR(k.f1 * (k.precision + k.recall), 2 * k.precision * k.recall, 1e-12);
      for (double v : {k.precision, k.recall, k.f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(LabelsCsv, ReadWrite) {
  std::ostringstream out;
  tsnip::write_labels(out, seq({0, 1, -1, 2}));
  std::istringstream in(out.str());
  EXPECT_EQ(tsnip::read_labels(in).labels, (std::vector<int>{0, 1, -1, 2}));
  std::istringstream bad("0\n1\nx\n");
  EXPECT_THROW(tsnip::read_labels(bad), tsnip::input_error);
}

}  // namespace
