/*
 * Copyright 2026 The VAAS Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vaas/fx_global.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "vaas/oracles.hpp"
#include "vaas/splitmix64.hpp"

namespace vaas {
namespace {

// [layers, heads, T, T] with row i of every plane given by weights(l, i, j),
// row-normalised.
template <typename Fn>
Tensor make_attention(std::size_t layers, std::size_t heads, std::size_t t, Fn weights) {
  std::vector<float> data;
  data.reserve(layers * heads * t * t);
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t h = 0; h < heads; ++h) {
      for (std::size_t i = 0; i < t; ++i) {
        std::vector<double> row(t);
        double z = 0;
        for (std::size_t j = 0; j < t; ++j) z += row[j] = weights(l, h, i, j);
        for (double w : row) data.push_back(static_cast<float>(w / z));
      }
    }
  }
  return Tensor({layers, heads, t, t}, std::move(data));
}

TEST(Aggregate, UniformIsConstantOneOverT) {
  const Tensor a = make_attention(4, 2, 196, [](auto...) { return 1.0; });
  for (int k : {1, 2, 4, 9}) {
    const auto map = aggregate_attention(a, 14, 14, 224, 224, k);
    ASSERT_EQ(map.values.rows(), 224);
    EXPECT_NEAR(map.values.maxCoeff(), 1.0 / 196.0, 1e-9);
    EXPECT_NEAR(map.values.minCoeff(), 1.0 / 196.0, 1e-9);
    EXPECT_EQ(map.source_rows, 14);
  }
}

TEST(Aggregate, SingleLayerTruncatesLastK) {
  SplitMix64 rng(4);
  const Tensor a = make_attention(1, 3, 49, [&](auto...) { return 0.1 + rng.uniform(); });
  const auto k4 = aggregate_attention(a, 7, 7, 64, 64, 4);
  const auto k1 = aggregate_attention(a, 7, 7, 64, 64, 1);
  EXPECT_EQ(k4.values, k1.values);
}

TEST(Aggregate, OnlyLastKLayersCount) {
  // Layer 0 concentrates on token 0; layers 1..2 are uniform.
  const Tensor a = make_attention(3, 1, 16, [](std::size_t l, std::size_t, std::size_t, std::size_t j) {
    return l == 0 && j == 0 ? 100.0 : 1.0;
  });
  const auto last2 = aggregate_attention(a, 4, 4, 8, 8, 2);
  EXPECT_NEAR(last2.values.maxCoeff() - last2.values.minCoeff(), 0.0, 1e-9);
  const auto all = aggregate_attention(a, 4, 4, 8, 8, 3);
  EXPECT_GT(all.values(0, 0), all.values(7, 7));
}

TEST(Aggregate, ClassTokenDropped) {
  // Token 0 is a class token that everyone attends to heavily; the grid part
  // stays uniform so the map is constant.
  const Tensor a = make_attention(1, 1, 17, [](std::size_t, std::size_t, std::size_t, std::size_t j) {
    return j == 0 ? 50.0 : 1.0;
  });
  const auto map = aggregate_attention(a, 4, 4, 16, 16, 4);
  EXPECT_NEAR(map.values.maxCoeff(), map.values.minCoeff(), 1e-9);
  EXPECT_NEAR(map.values(0, 0), (1.0 / 66.0), 1e-7);
  EXPECT_THROW(aggregate_attention(a, 4, 5, 16, 16, 4), DataError);
}

// Token j* receives double weight in every row. The map must peak inside
// j*'s pixel block and match the bilinear formula evaluated directly.
TEST(Aggregate, DoubleWeightColumnPeaksOverItsToken) {
  const std::size_t jstar = 5 * 14 + 9;
  const Tensor a = make_attention(1, 1, 196, [&](std::size_t, std::size_t, std::size_t, std::size_t j) {
    return j == jstar ? 2.0 : 1.0;
  });
  const auto map = aggregate_attention(a, 14, 14, 224, 224, 4);

  Matrix<double> received(14, 14);
  for (Index j = 0; j < 196; ++j) received(j / 14, j % 14) = (j == Index(jstar) ? 2.0 : 1.0) / 197.0;
  for (int r = 0; r < 224; r += 7) {
    for (int c = 0; c < 224; c += 5) {
      const double y = (r + 0.5) * 14.0 / 224.0 - 0.5;
      const double x = (c + 0.5) * 14.0 / 224.0 - 0.5;
      ASSERT_NEAR(map.values(r, c), oracle::bilinear_at(received, y, x), 1e-7) << r << "," << c;
    }
  }
  // Centre of token (5, 9): pixels 80..95 x 144..159.
  const double centre = map.values(87, 151);
  EXPECT_NEAR(centre, oracle::bilinear_at(received, 87.5 / 16.0 - 0.5, 151.5 / 16.0 - 0.5), 1e-7);
  Index mr = 0;
  Index mc = 0;
  const double peak = map.values.maxCoeff(&mr, &mc);
  EXPECT_NEAR(peak, centre, 1e-9);
  EXPECT_GE(mr, 80);
  EXPECT_LT(mr, 96);
  EXPECT_GE(mc, 144);
  EXPECT_LT(mc, 160);
}

TEST(Summarise, ClosedForms) {
  const auto c = summarise(Matrix<double>::Constant(5, 7, 0.25));
  EXPECT_DOUBLE_EQ(c.mu, 0.25);
  EXPECT_DOUBLE_EQ(c.sigma, 0.0);
  Matrix<double> half(4, 4);
  for (Index i = 0; i < 16; ++i) half.data()[i] = i % 2;
  const auto h = summarise(half);
  EXPECT_DOUBLE_EQ(h.mu, 0.5);
  EXPECT_DOUBLE_EQ(h.sigma, 0.5);
  EXPECT_THROW(summarise(Matrix<double>(0, 0)), ValidationError);
}

TEST(Summarise, MatchesLongDoubleOracle) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix<double> m(224, 224);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = 1e-3 + rng.uniform() * 1e-2;
    const auto s = summarise(m);
    const auto [mu, sigma] = oracle::moments(m);
    EXPECT_NEAR(s.mu, mu, 1e-6 * std::abs(mu));
    EXPECT_NEAR(s.sigma, sigma, 1e-6 * sigma);
  }
}

TEST(Calibrate, TwoSampleClosedForm) {
  const AttentionSummary s[] = {{0.4, 0.0}, {0.6, 0.0}};
  const auto ref = calibrate(s);
  EXPECT_NEAR(ref.mu_ref, 0.5, 1e-15);
  EXPECT_NEAR(ref.sigma_ref, 0.1, 1e-15);
  EXPECT_EQ(ref.n_samples, 2u);
  EXPECT_NEAR(ref.raw_p01, 1.0, 1e-12);
  EXPECT_NEAR(ref.raw_p99, 1.0, 1e-12);
}

TEST(Calibrate, IdenticalMeansAreDegenerate) {
  const AttentionSummary s[] = {{0.3, 0.1}, {0.3, 0.2}, {0.3, 0.0}};
  EXPECT_THROW(calibrate(s), DataError);
  const AttentionSummary z[] = {{0.0, 0.1}, {0.0, 0.2}};
  EXPECT_THROW(calibrate(z), DataError);
}

TEST(Calibrate, NeedsTwoSamples) {
  const AttentionSummary s[] = {{0.3, 0.1}};
  EXPECT_THROW(calibrate(s), ValidationError);
}

TEST(Calibrate, PercentilesMatchSortOracle) {
  SplitMix64 rng(7);
  std::vector<AttentionSummary> s(100);
  for (auto& x : s) x.mu = rng.uniform();
  const auto ref = calibrate(s);
  std::vector<double> raw;
  for (const auto& x : s) raw.push_back(std::abs(x.mu - ref.mu_ref) / ref.sigma_ref);
  EXPECT_EQ(ref.raw_p01, oracle::nearest_rank_percentile(raw, 1));
  EXPECT_EQ(ref.raw_p99, oracle::nearest_rank_percentile(raw, 99));
  Matrix<double> means(100, 1);
  for (Index i = 0; i < 100; ++i) means(i, 0) = s[static_cast<std::size_t>(i)].mu;
  const auto [mu, sigma] = oracle::moments(means);
  EXPECT_NEAR(ref.mu_ref, mu, 1e-12);
  EXPECT_NEAR(ref.sigma_ref, sigma, 1e-12);
}

TEST(NearestRank, SmallCases) {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  EXPECT_EQ(nearest_rank(v, 1), 1);
  EXPECT_EQ(nearest_rank(v, 50), 3);
  EXPECT_EQ(nearest_rank(v, 99), 5);
  EXPECT_EQ(nearest_rank(v, 100), 5);
  SplitMix64 rng(3);
  for (int n = 1; n < 60; ++n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = std::floor(rng.uniform() * 10);
    std::sort(w.begin(), w.end());
    for (int p = 0; p <= 100; p += 7) EXPECT_EQ(nearest_rank(w, p), oracle::nearest_rank_percentile(w, p));
  }
}

ReferenceStats reference(double mu, double sigma, double p01, double p99) {
  ReferenceStats r;
  r.mu_ref = mu;
  r.sigma_ref = sigma;
  r.raw_p01 = p01;
  r.raw_p99 = p99;
  r.n_samples = 10;
  return r;
}

TEST(ScoreGlobal, Examples) {
  EXPECT_EQ(score_global({0.5, 0.0}, reference(0.5, 0.05, 0, 4)).raw, 0.0);
  EXPECT_NEAR(score_global({0.6, 0.0}, reference(0.5, 0.05, 0, 4)).raw, 2.0, 1e-12);
  const auto ref = reference(0.0, 1.0, 1.0, 3.0);
  EXPECT_EQ(score_global({1.0, 0}, ref).normalised, 0.0);
  EXPECT_EQ(score_global({3.0, 0}, ref).normalised, 1.0);
  EXPECT_DOUBLE_EQ(score_global({2.0, 0}, ref).normalised, 0.5);
  EXPECT_EQ(score_global({-9.0, 0}, ref).normalised, 1.0);
}

TEST(ScoreGlobal, ZeroSpan) {
  const auto ref = reference(0.0, 1.0, 2.0, 2.0);
  EXPECT_EQ(score_global({2.0, 0}, ref).normalised, 0.0);
  EXPECT_EQ(score_global({1.0, 0}, ref).normalised, 0.0);
  EXPECT_EQ(score_global({2.5, 0}, ref).normalised, 1.0);
}

TEST(ScoreGlobal, ShiftInvariantAndMonotone) {
  SplitMix64 rng(12);
  std::vector<AttentionSummary> cal(30);
  for (auto& s : cal) s.mu = 0.2 + 0.1 * rng.uniform();
  const auto ref = calibrate(cal);
  const double shift = 0.125;
  auto shifted = cal;
  for (auto& s : shifted) s.mu += shift;
  const auto ref2 = calibrate(shifted);
  double prev_raw = -1.0;
  double prev_norm = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double mu = 0.15 + i * 0.001;
    const auto a = score_global({mu, 0}, ref);
    const auto b = score_global({mu + shift, 0}, ref2);
    EXPECT_NEAR(a.raw, b.raw, 1e-9 * std::max(1.0, a.raw));
    if (mu >= ref.mu_ref) {
      EXPECT_GE(a.raw, prev_raw);
      EXPECT_GE(a.normalised, prev_norm);
      prev_raw = a.raw;
      prev_norm = a.normalised;
    }
    EXPECT_GE(a.normalised, 0.0);
    EXPECT_LE(a.normalised, 1.0);
  }
}

TEST(Reference, JsonRoundTrip) {
  const auto ref = reference(0.005, 6.5e-8, 0.13, 2.1);
  const auto back = parse_reference(dump_reference(ref));
  EXPECT_EQ(back.mu_ref, ref.mu_ref);
  EXPECT_EQ(back.sigma_ref, ref.sigma_ref);
  EXPECT_EQ(back.raw_p01, ref.raw_p01);
  EXPECT_EQ(back.raw_p99, ref.raw_p99);
  EXPECT_EQ(back.n_samples, 10u);
  EXPECT_THROW(parse_reference("{}"), ValidationError);
  EXPECT_THROW(parse_reference(dump_reference(reference(0.1, 0.0, 0, 1))), ValidationError);
}

}  // namespace
}  // namespace vaas
