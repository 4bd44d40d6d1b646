// Copyright 2026 The meanfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "meanfield/error.hpp"
#include "meanfield/params.hpp"
#include "meanfield/rng.hpp"

namespace mf = meanfield;

TEST(ModelParams, DefaultsValidate) {
  mf::ModelParams p;
  EXPECT_NO_THROW(mf::validate(p));
}

TEST(ModelParams, RejectsBadFields) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto bad = [](auto mutate) {
    mf::ModelParams p;
    mutate(p);
    EXPECT_THROW(mf::validate(p), mf::ValidationError);
  };
  bad([](mf::ModelParams& p) { p.alpha = 0.0; });
  bad([](mf::ModelParams& p) { p.alpha = -1.0; });
  bad([&](mf::ModelParams& p) { p.alpha = nan; });
  bad([](mf::ModelParams& p) { p.theta = -0.1; });
  bad([](mf::ModelParams& p) { p.sigma = -1e-9; });
  bad([&](mf::ModelParams& p) { p.sigma = nan; });
  bad([](mf::ModelParams& p) { p.n_particles = 0; });
  bad([](mf::ModelParams& p) { p.dt = 0.0; });
  bad([](mf::ModelParams& p) { p.t_end = 1e-4; });
  bad([](mf::ModelParams& p) { p.record_stride = 0; });
  bad([](mf::ModelParams& p) { p.threads = 0; });
  bad([](mf::ModelParams& p) { p.divergence_guard = std::numeric_limits<double>::infinity(); });
}

TEST(ModelParams, StepCountRoundsRepresentationError) {
  mf::ModelParams p;
  p.dt = 0.1;
  p.t_end = 0.3;
  EXPECT_EQ(p.n_steps(), 3u);
  p.dt = 1e-3;
  p.t_end = 200.0;
  EXPECT_EQ(p.n_steps(), 200000u);
}

TEST(Trajectory, WellFormed) {
  mf::Trajectory<int> tr;
  EXPECT_TRUE(mf::well_formed(tr));
  tr.push(0.0, 1);
  tr.push(0.5, 2);
  EXPECT_TRUE(mf::well_formed(tr));
  tr.push(0.5, 3);
  EXPECT_FALSE(mf::well_formed(tr));

  mf::Trajectory<int> late;
  late.push(0.1, 0);
  EXPECT_FALSE(mf::well_formed(late));
}

TEST(PairwiseSum, MatchesExactSumOfIntegers) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(mf::pairwise_sum(v), 500500.0);
  EXPECT_EQ(mf::pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(PairwiseSum, BeatsNaiveOnManySmallTerms) {
  std::vector<double> v(1 << 20, 0.1);
  const double exact = 0.1 * static_cast<double>(v.size());
  double naive = 0.0;
  for (double x : v) naive += x;
  EXPECT_LT(std::abs(mf::pairwise_sum(v) - exact), std::abs(naive - exact));
  EXPECT_NEAR(mf::pairwise_sum(v), exact, 1e-9);
}

// Known-answer vectors cross-checked against an independent Philox4x64-10
// implementation.
TEST(Philox, KnownAnswerZero) {
  const auto out = mf::philox4x64({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x16554d9eca36314cull);
  EXPECT_EQ(out[1], 0xdb20fe9d672d0fdcull);
  EXPECT_EQ(out[2], 0xd7e772cee186176bull);
  EXPECT_EQ(out[3], 0x7e68b68aec7ba23bull);
}

TEST(Philox, KnownAnswerNonZero) {
  const auto out = mf::philox4x64({1, 2, 3, 4}, {5, 6});
  EXPECT_EQ(out[0], 0xa39b5519339fe354ull);
  EXPECT_EQ(out[1], 0xaceb1228efc25196ull);
  EXPECT_EQ(out[2], 0xa0a2e3c25aa5f4fcull);
  EXPECT_EQ(out[3], 0x08d0cfa9332720dfull);
}

TEST(Rng, DrawsArePureFunctionsOfCoordinates) {
  const mf::RngStream s{42, 3, 7};
  EXPECT_EQ(mf::gaussian_draw(s, 12345), mf::gaussian_draw(s, 12345));
  EXPECT_NE(mf::gaussian_draw(s, 0), mf::gaussian_draw(s.substream(8), 0));
  EXPECT_NE(mf::gaussian_draw(s, 0), mf::gaussian_draw({42, 4, 7}, 0));
  EXPECT_NE(mf::gaussian_draw(s, 0), mf::gaussian_draw({43, 3, 7}, 0));
}

TEST(Rng, CursorMatchesDirectDraws) {
  const mf::RngStream s{9, 1, 2};
  mf::NormalCursor c(s);
  for (std::uint64_t k = 0; k < 37; ++k) EXPECT_EQ(c.at(k), mf::gaussian_draw(s, k));
  EXPECT_EQ(c.at(3), mf::gaussian_draw(s, 3));  // backwards jump
  const auto block = mf::normal_block(s, 5);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(block[j], mf::gaussian_draw(s, 20 + j));
}

TEST(Rng, MeanAndVarianceOfOneMillionDraws) {
  const mf::RngStream s{2026, 0, 0};
  constexpr std::size_t n = 1000000;
  mf::NormalCursor c(s);
  std::vector<double> v(n), sq(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = c.at(k);
    sq[k] = v[k] * v[k];
  }
  const double mean = mf::pairwise_sum(v) / n;
  const double var = mf::pairwise_sum(sq) / n - mean * mean;
  // 4 standard errors: 1/sqrt(n) for the mean, sqrt(2/n) for the variance.
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(double(n)));
  EXPECT_LT(std::abs(var - 1.0), 4.0 * std::sqrt(2.0 / n));
}

TEST(Rng, KolmogorovSmirnovAgainstNormal) {
  const mf::RngStream s{17, 5, 0};
  constexpr std::size_t n = 100000;
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = mf::gaussian_draw(s, k);
  std::sort(v.begin(), v.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = mf::normal_cdf(v[i]);
    d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
  }
  EXPECT_LT(d, 1.628 / std::sqrt(double(n)));  // 1% critical value
}

TEST(Rng, NormalCdfReferenceValues) {
  EXPECT_DOUBLE_EQ(mf::normal_cdf(0.0), 0.5);
  EXPECT_NEAR(mf::normal_cdf(1.959963984540054), 0.975, 1e-15);
  EXPECT_NEAR(mf::normal_cdf(-1.0), 0.15865525393145707, 1e-15);
}

TEST(Rng, SubstreamsAreUncorrelated) {
  constexpr std::size_t n = 200000;
  const mf::RngStream a{1, 0, 0};
  const mf::RngStream b = a.substream(1);
  std::vector<double> prod(n);
  for (std::size_t k = 0; k < n; ++k) prod[k] = mf::gaussian_draw(a, k) * mf::gaussian_draw(b, k);
  EXPECT_LT(std::abs(mf::pairwise_sum(prod) / n), 4.0 / std::sqrt(double(n)));
}
