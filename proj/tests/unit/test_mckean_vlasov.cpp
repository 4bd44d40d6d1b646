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
#include <vector>

#include "meanfield/error.hpp"
#include "meanfield/mckean_vlasov.hpp"

namespace mf = meanfield;

namespace {

mf::ModelParams limit_params(double theta, double sigma, double dt) {
  mf::ModelParams p;
  p.alpha = 1.0;
  p.theta = theta;
  p.sigma = sigma;
  p.dt = dt;
  p.t_end = 1.0;
  p.seed = 7;
  return p;
}

mf::PicardOptions small_picard(std::size_t n_samples) {
  mf::PicardOptions o;
  o.n_samples = n_samples;
  o.tol = 1e-12;
  return o;
}

}  // namespace

TEST(InitialLaw, SamplesAndAntitheticImages) {
  EXPECT_EQ(mf::InitialLaw::dirac(0.3).sample(1.7), 0.3);
  EXPECT_EQ(mf::InitialLaw::normal(0.5, 2.0).sample(1.0), 2.5);
  EXPECT_EQ(mf::InitialLaw::two_point(1.5).sample(0.2), 1.5);
  EXPECT_EQ(mf::InitialLaw::two_point(1.5).sample(-0.2), -1.5);
  EXPECT_EQ(mf::InitialLaw::normal(0.0, 1.0).describe(), "normal(0,1)");
}

TEST(Picard, DecoupledFieldIsExactAfterOneIteration) {
  const mf::ModelParams p = limit_params(0.0, 0.3, 1e-2);
  const auto path = mf::picard_solve(mf::InitialLaw::normal(0.5, 0.5), 0.8, p, small_picard(2000));
  EXPECT_EQ(path.defects.size(), 1u);
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    EXPECT_NEAR(path.mu[k], 0.8 * std::exp(-path.times[k]), 1e-15);
  }
}

TEST(Picard, DefectsDecayGeometrically) {
  const mf::ModelParams p = limit_params(1.0, 0.3, 1e-2);
  const auto path =
      mf::picard_solve(mf::InitialLaw::normal(0.5, 0.5), 0.2, p, small_picard(20000));
  ASSERT_GE(path.defects.size(), 4u);
  for (std::size_t i = 1; i < path.defects.size(); ++i) {
    if (path.defects[i - 1] < 1e-13) break;
    EXPECT_LT(path.defects[i], 0.5 * path.defects[i - 1]) << i;
  }
  EXPECT_LT(path.defects.back(), 1e-12);
}

TEST(Picard, SymmetricLawKeepsMeanAtZero) {
  const mf::ModelParams p = limit_params(2.0, 0.4, 1e-2);
  for (const auto& law : {mf::InitialLaw::normal(0.0, 0.7), mf::InitialLaw::two_point(1.0)}) {
    const auto path = mf::picard_solve(law, 0.0, p, small_picard(2000));
    for (std::size_t k = 0; k < path.m.size(); ++k) {
      EXPECT_LT(std::abs(path.m[k]), 1e-10);
      EXPECT_LT(std::abs(path.mu[k]), 1e-10);
    }
  }
}

TEST(Picard, SymmetricLawWithoutPairingWithinMonteCarloError) {
  const mf::ModelParams p = limit_params(2.0, 0.4, 1e-2);
  mf::PicardOptions o = small_picard(20000);
  o.antithetic = false;
  const auto path = mf::picard_solve(mf::InitialLaw::normal(0.0, 0.7), 0.0, p, o);
  for (double m : path.m) EXPECT_LT(std::abs(m), 4.0 * 1.2 / std::sqrt(20000.0));
}

TEST(Picard, BitwiseReproducibleAcrossThreadCounts) {
  mf::ModelParams p = limit_params(1.0, 0.3, 1e-2);
  const auto law = mf::InitialLaw::normal(0.5, 0.5);
  const auto a = mf::picard_solve(law, 0.2, p, small_picard(4000));
  const auto b = mf::picard_solve(law, 0.2, p, small_picard(4000));
  p.threads = 3;
  const auto c = mf::picard_solve(law, 0.2, p, small_picard(4000));
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.m, c.m);
  EXPECT_EQ(a.mu, c.mu);
  EXPECT_EQ(a.defects, c.defects);
}

TEST(Picard, FieldMatchesHigherOrderReconstruction) {
  const mf::ModelParams p = limit_params(1.5, 0.3, 1e-3);
  const auto path =
      mf::picard_solve(mf::InitialLaw::normal(0.5, 0.5), 0.2, p, small_picard(2000));
  // Composite Simpson for the exponential kernel at even grid points.
  const double alpha = p.alpha, theta = p.theta, dt = p.dt;
  for (std::size_t k = 2; k < path.m.size(); k += 2) {
    const double t = path.times[k];
    double integral = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const double w = (j == 0 || j == k) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      integral += w * std::exp(-alpha * (t - path.times[j])) * path.m[j];
    }
    integral *= dt / 3.0;
    const double e = std::exp(-alpha * t);
    const double mu = e * 0.2 - theta * path.m[k] + theta * e * path.initial_mean +
                      alpha * theta * integral;
    EXPECT_NEAR(path.mu[k], mu, 1e-6) << "t=" << t;
  }
}

TEST(Picard, NonConvergenceCarriesDefects) {
  const mf::ModelParams p = limit_params(1.0, 0.3, 1e-2);
  mf::PicardOptions o = small_picard(200);
  o.n_iter = 2;
  try {
    mf::picard_solve(mf::InitialLaw::normal(0.5, 0.5), 0.2, p, o);
    FAIL() << "expected non-convergence";
  } catch (const mf::PicardNonConvergence& e) {
    EXPECT_EQ(e.defects().size(), 2u);
  }
}

TEST(Picard, RejectsBadOptions) {
  const mf::ModelParams p = limit_params(1.0, 0.3, 1e-2);
  mf::PicardOptions o = small_picard(3);
  EXPECT_THROW(mf::picard_solve(mf::InitialLaw::dirac(0.0), 0.0, p, o), mf::ValidationError);
  o = small_picard(100);
  o.n_iter = 0;
  EXPECT_THROW(mf::picard_solve(mf::InitialLaw::dirac(0.0), 0.0, p, o), mf::ValidationError);
}

TEST(MuFromMean, ConstantMeanSecondOrder) {
  // m = c: mu(t) = e^{-at} mu0 - th c + th e^{-at} c + th c (1 - e^{-at}) = e^{-at} mu0
  auto worst = [](std::size_t steps) {
    const double dt = 1.0 / double(steps);
    const std::vector<double> m(steps + 1, 0.4);
    const auto mu = mf::mu_from_mean(m, 0.3, 0.4, 2.0, 1.5, dt);
    EXPECT_EQ(mu[0], 0.3);
    double w = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      w = std::max(w, std::abs(mu[k] - 0.3 * std::exp(-2.0 * dt * double(k))));
    }
    return w;
  };
  const double coarse = worst(100), fine = worst(200);
  EXPECT_LT(coarse, 1e-4);
  EXPECT_NEAR(fine / coarse, 0.25, 0.01);
}

TEST(Coupling, SingleParticleWithoutCouplingCoincides) {
  const mf::ModelParams p = limit_params(0.0, 0.3, 1e-2);
  mf::ModelParams one = p;
  one.n_particles = 1;
  const std::vector<double> zero(p.n_steps() + 1, 0.0);
  for (std::uint64_t r = 0; r < 10; ++r) {
    EXPECT_EQ(mf::coupling_error(one, mf::InitialLaw::normal(0.5, 0.5), 0.0, zero, {7, r, 0}),
              0.0);
  }
  std::vector<double> decay(p.n_steps() + 1);
  for (std::size_t k = 0; k < decay.size(); ++k) decay[k] = 0.5 * std::exp(-p.dt * double(k));
  const double err =
      mf::coupling_error(one, mf::InitialLaw::normal(0.5, 0.5), 0.5, decay, {7, 0, 0});
  EXPECT_GT(err, 0.0);
  EXPECT_LT(err, 10.0 * p.dt);
}

TEST(Coupling, RejectsShortReference) {
  mf::ModelParams p = limit_params(1.0, 0.3, 1e-2);
  p.n_particles = 3;
  const std::vector<double> mu(5, 0.0);
  EXPECT_THROW(mf::coupling_error(p, mf::InitialLaw::dirac(0.0), 0.0, mu, {}),
               mf::ValidationError);
}

TEST(ChaosRate, ErrorsShrinkLikeInverseSquareRoot) {
  const mf::ModelParams p = limit_params(1.0, 0.3, 1e-2);
  mf::ChaosOptions o;
  o.n_grid = {10, 40, 160, 640};
  o.n_replicas = 40;
  o.reference = small_picard(20000);
  const auto res = mf::chaos_rate_experiment(p, o);
  EXPECT_NEAR(res.fit.slope, -0.5, 0.25);
  for (std::size_t i = 1; i < res.fit.ordinates.size(); ++i) {
    EXPECT_LT(res.fit.ordinates[i], res.fit.ordinates[i - 1]);
  }
  EXPECT_EQ(res.fit.stderrs.size(), 4u);
}

TEST(ChaosRate, RejectsShortGrid) {
  mf::ChaosOptions o;
  o.n_grid = {10, 100, 1000};
  EXPECT_THROW(mf::chaos_rate_experiment(limit_params(1.0, 0.3, 1e-2), o), mf::ValidationError);
}

TEST(GaussError, VanishingNoiseReachesIntegratorFloor) {
  mf::ModelParams p = limit_params(1.0, 0.0, 1e-3);
  mf::GaussErrorOptions o;
  o.sigma_grid = {1e-4, 2e-4, 4e-4, 8e-4};
  o.n_samples = 200;
  o.min_r2 = 0.0;
  const auto res = mf::gaussian_error_experiment(p, o);
  for (double e : res.fit.ordinates) EXPECT_LT(e, 1e-6);
  for (double r : res.remainder_bound) {
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_LT(r, 10.0);
  }
  EXPECT_EQ(res.path_error.size(), 4u);
  EXPECT_EQ(res.field_error.size(), 4u);
}

TEST(GaussError, RejectsBadGrid) {
  mf::GaussErrorOptions o;
  o.sigma_grid = {0.01, -0.02, 0.05, 0.1};
  EXPECT_THROW(mf::gaussian_error_experiment(limit_params(1.0, 0.0, 1e-2), o),
               mf::ValidationError);
  o.sigma_grid = {0.01, 0.02, 0.05, 0.1};
  o.n_samples = 3;
  EXPECT_THROW(mf::gaussian_error_experiment(limit_params(1.0, 0.0, 1e-2), o),
               mf::ValidationError);
}
