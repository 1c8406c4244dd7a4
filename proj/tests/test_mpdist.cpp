// SPDX-License-Identifier: Apache-2.0
#include <tsnip/mpdist.hpp>

#include "oracles.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

TEST(Params, DefaultsForLength) {
  const auto p = tsnip::MPdistParams::for_length(64);
  EXPECT_EQ(p.l, 32u);
  EXPECT_EQ(p.k, 7u);  // ceil(0.05 * 128)
  EXPECT_EQ(tsnip::MPdistParams::for_length(5).l, 3u);
  EXPECT_EQ(tsnip::MPdistParams::for_length(3).k, 1u);
  EXPECT_EQ(tsnip::MPdistParams::for_length(10).k, 1u);
  EXPECT_EQ(tsnip::MPdistParams::for_length(11).k, 2u);
  EXPECT_THROW(tsnip::MPdistParams::for_length(8, 9), tsnip::invalid_argument);
}

TEST(ColumnMinima, Examples) {
  const std::vector<std::vector<double>> rows{{1, 4, 2}, {3, 0, 5}};
  EXPECT_EQ(tsnip::column_minima(rows), (std::vector<double>{1, 0, 2}));
  const std::vector<std::vector<double>> single{{3, 1, 2}};
  EXPECT_EQ(tsnip::column_minima(single), single[0]);
  const std::vector<std::vector<double>> same(4, std::vector<double>(5, 2.5));
  EXPECT_EQ(tsnip::column_minima(same), std::vector<double>(5, 2.5));
  const std::vector<std::vector<double>> ragged{{1, 2}, {1}};
  EXPECT_THROW(tsnip::column_minima(ragged), tsnip::invalid_argument);
}

TEST(RowSlidingMinima, Examples) {
  const std::vector<double> row{3, 1, 2, 5, 4};
  EXPECT_EQ(tsnip::row_sliding_minima(row, 2), (std::vector<double>{1, 1, 2, 4}));
  EXPECT_EQ(tsnip::row_sliding_minima(row, 1), row);
  const std::vector<double> falling{5, 4, 3, 2};
  EXPECT_EQ(tsnip::row_sliding_minima(falling, 2), (std::vector<double>{4, 3, 2}));
  EXPECT_THROW(tsnip::row_sliding_minima(row, 6), tsnip::invalid_argument);
  EXPECT_THROW(tsnip::row_sliding_minima(row, 0), tsnip::invalid_argument);
}

TEST(RowSlidingMinima, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t w = 1 + rng() % n;
    std::vector<double> row(n);
    // small integer alphabet forces plenty of ties
    for (auto& v : row) v = static_cast<double>(rng() % 6);
    ASSERT_EQ(tsnip::row_sliding_minima(row, w), tsnip::oracle::sliding_min(row, w));
  }
}

TEST(MpdistAt, Examples) {
  const std::vector<double> zeros(3, 0.0);
  EXPECT_EQ(tsnip::mpdist_at(zeros, zeros, tsnip::MPdistParams{4, 2, 2}), 0.0);
  const std::vector<double> ab{0.1, 0.4}, ba{0.2, 0.3};
  std::vector<double> scratch;
  EXPECT_EQ(tsnip::mpdist_at(ab, ba, 1, scratch), 0.1);
  EXPECT_EQ(tsnip::mpdist_at(ab, ba, 3, scratch), 0.3);
  EXPECT_EQ(tsnip::mpdist_at(ab, ba, 4, scratch), 0.4);  // 4 entries <= k: maximum
  EXPECT_EQ(tsnip::mpdist_at(ab, ba, 9, scratch), 0.4);
  const std::vector<double> shorter{0.1};
  EXPECT_THROW(tsnip::mpdist_at(ab, shorter, 1, scratch), tsnip::invalid_argument);
}

TEST(MpdistProfile, AntiPhaseWindowMatches) {
  const tsnip::TimeSeries s({0, 1, 0, 1, 1, 0, 1, 0});
  const auto p = tsnip::MPdistParams{4, 2, 1};
  const auto profile = tsnip::mpdist_profile(s, 0, p);
  ASSERT_EQ(profile.values.size(), 5u);
  EXPECT_NEAR(profile.values[0], 0.0, 1e-9);
  EXPECT_NEAR(profile.values[4], 0.0, 1e-9);
  const auto ref = tsnip::oracle::mpdist_profile(s.values(), 0, 4, 2, 1);
  for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(profile.values[j], ref[j], 1e-9);
}

TEST(MpdistProfile, InvalidSegment) {
  const tsnip::TimeSeries s(tsnip::testing::random_normal(40, 3));
  const auto p = tsnip::MPdistParams::for_length(8);
  EXPECT_THROW(tsnip::mpdist_profile(s, 5, p), tsnip::invalid_argument);
  EXPECT_NO_THROW(tsnip::mpdist_profile(s, 4, p));
}

TEST(MpdistProfile, MatchesNaiveOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = trial % 2 ? 16 : 8;
    const std::size_t n = 3 * m + rng() % (400 - 3 * m);
    const auto values = trial % 3 ? tsnip::testing::random_normal(n, rng())
                                  : tsnip::testing::random_walk(n, rng());
    const tsnip::TimeSeries s(values);
    const auto p = tsnip::MPdistParams::for_length(m);
    const std::size_t seg = rng() % (n / m);
    const auto profile = tsnip::mpdist_profile(s, seg, p);
    const auto ref = tsnip::oracle::mpdist_profile(values, seg * m, m, p.l, p.k);
    ASSERT_EQ(profile.values.size(), n - m + 1);
    EXPECT_NEAR(profile.values[seg * m], 0.0, 1e-9);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      ASSERT_NEAR(profile.values[j], ref[j], 1e-6) << "trial " << trial << " j " << j;
      ASSERT_GE(profile.values[j], 0.0);
      ASSERT_LE(profile.values[j], 2.0 * std::sqrt(static_cast<double>(p.l)) + 1e-6);
    }
  }
}

TEST(MpdistProfile, LargeKFallsBackToMaximum) {
  // 2(m - l + 1) = 4 <= k: every entry is the maximum of P_ABBA
  const auto values = tsnip::testing::random_normal(60, 8);
  const tsnip::TimeSeries s(values);
  const tsnip::MPdistParams p{6, 5, 4};
  const auto profile = tsnip::mpdist_profile(s, 2, p);
  const auto ref = tsnip::oracle::mpdist_profile(values, 12, 6, 5, 4);
  for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(profile.values[j], ref[j], 1e-9);
}

TEST(SegmentProfiles, IndependentOfThreadCount) {
  const tsnip::TimeSeries s(tsnip::testing::random_normal(600, 4));
  const auto p = tsnip::MPdistParams::for_length(20);
  const auto one = tsnip::segment_profiles(s, 30, p, 1);
  const auto four = tsnip::segment_profiles(s, 30, p, 4);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].segment_index, i);
    EXPECT_EQ(one[i].values, four[i].values);
    EXPECT_EQ(one[i].values, tsnip::mpdist_profile(s, i, p).values);
  }
}

TEST(SegmentProfiles, DirectKernelAgrees) {
  const auto values = tsnip::testing::random_walk(300, 21);
  const tsnip::TimeSeries s(values);
  const auto p = tsnip::MPdistParams::for_length(12);
  const auto fast = tsnip::mpdist_profile(s, 7, p);
  const auto slow = tsnip::mpdist_profile(s, 7, p, tsnip::DistanceKernel::direct);
  for (std::size_t j = 0; j < fast.values.size(); ++j) EXPECT_NEAR(fast.values[j], slow.values[j], 1e-6);
}

}  // namespace
