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

#include <cmath>
#include <vector>

#include "meanfield/error.hpp"
#include "meanfield/particles.hpp"

namespace mf = meanfield;

namespace {

mf::ModelParams noiseless(std::size_t n, double alpha = 1.0, double theta = 1.0) {
  mf::ModelParams p;
  p.alpha = alpha;
  p.theta = theta;
  p.sigma = 0.0;
  p.n_particles = n;
  p.dt = 0.01;
  p.t_end = 1.0;
  return p;
}

std::vector<double> draws(std::size_t n, std::uint64_t seed) {
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = mf::gaussian_draw({seed, 0, i}, 0);
  return xi;
}

}  // namespace

TEST(StepParticles, EquilibriaAreFixed) {
  for (double x0 : {-1.0, 0.0, 1.0}) {
    mf::ParticleState s;
    s.x.assign(8, x0);
    const mf::ParticleState next = mf::step_particles(s, noiseless(8), {1, 0, 0});
    for (double v : next.x) EXPECT_EQ(v, x0);
    EXPECT_EQ(next.mu, 0.0);
    EXPECT_EQ(next.step, 1u);
  }
}

TEST(StepParticles, HandEvaluatedSingleParticle) {
  mf::ParticleState s;
  s.x = {2.0};
  const mf::ParticleState next = mf::step_particles(s, noiseless(1), {1, 0, 0});
  EXPECT_NEAR(next.x[0], 1.94, 1e-15);
  EXPECT_NEAR(next.mu, 0.06, 1e-15);
  EXPECT_NEAR(next.t, 0.01, 1e-15);
}

TEST(StepParticles, MirrorSymmetryIsExact) {
  mf::ModelParams p = noiseless(64, 1.5, 2.0);
  p.sigma = 0.7;
  mf::ParticleState a;
  for (std::size_t i = 0; i < 64; ++i) a.x.push_back(std::sin(0.37 * double(i)) * 1.8);
  a.mu = 0.3;
  mf::ParticleState b = a;
  for (double& v : b.x) v = -v;
  b.mu = -a.mu;
  for (int k = 0; k < 50; ++k) {
    std::vector<double> xi = draws(64, 100 + k);
    mf::advance_particles(a, p, xi);
    for (double& v : xi) v = -v;
    mf::advance_particles(b, p, xi);
  }
  for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(b.x[i], -a.x[i]);
  EXPECT_EQ(b.mu, -a.mu);
}

TEST(StepParticles, FieldFormsAgree) {
  mf::ModelParams p = noiseless(200, 1.0, 2.5);
  p.sigma = 0.4;
  mf::ParticleState s;
  for (std::size_t i = 0; i < 200; ++i) s.x.push_back(std::cos(1.3 * double(i)) * 1.5);
  s.mu = -0.2;
  for (int k = 0; k < 20; ++k) {
    const std::vector<double> xi = draws(200, 7 + k);
    mf::ParticleState e = s;
    mf::advance_particles(s, p, xi, mf::FieldUpdate::kExpanded);
    mf::advance_particles(e, p, xi, mf::FieldUpdate::kEmpiricalIncrement);
    EXPECT_EQ(e.x, s.x);
    EXPECT_NEAR(e.mu, s.mu, 1e-13);
  }
}

TEST(StepParticles, RejectsMismatchedNoise) {
  mf::ParticleState s = mf::split_state(4);
  std::vector<double> xi(3, 0.0);
  EXPECT_THROW(mf::advance_particles(s, noiseless(4), xi), mf::ValidationError);
}

TEST(StepParticles, GuardBreachIsReported) {
  mf::ModelParams p = noiseless(2);
  p.dt = 0.1;
  mf::ParticleState s;
  s.x = {1e3, 0.0};
  const std::vector<double> xi(2, 0.0);
  EXPECT_THROW(mf::advance_particles(s, p, xi), mf::DivergenceError);
}

TEST(SplitState, HalvesAtPlusAndMinusOne) {
  const mf::ParticleState s = mf::split_state(5, 0.25);
  EXPECT_EQ(s.x, (std::vector<double>{1, 1, 1, -1, -1}));
  EXPECT_EQ(s.mu, 0.25);
  EXPECT_EQ(mf::split_state(6).mean(), 0.0);
}

TEST(SimulateParticles, DecoupledFieldDecaysExponentially) {
  mf::ModelParams p = noiseless(10, 2.0, 0.0);
  p.dt = 1e-3;
  p.t_end = 3.0;
  p.record_stride = 100;
  mf::ParticleState init = mf::split_state(10, 0.8);
  const auto tr = mf::simulate_particles(init, p);
  ASSERT_TRUE(mf::well_formed(tr));
  EXPECT_EQ(tr.size(), 31u);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double exact = 0.8 * std::exp(-2.0 * tr.times[i]);
    EXPECT_NEAR(tr.records[i].mu, exact, 2.0 * p.dt) << "t=" << tr.times[i];
  }
}

TEST(SimulateParticles, IndependentOfThreadCount) {
  mf::ModelParams p = noiseless(301, 1.0, 2.9);
  p.sigma = 0.5;
  p.dt = 1e-3;
  p.t_end = 2.0;
  p.seed = 11;
  p.record_stride = 7;
  const mf::ParticleState init = mf::split_state(301);
  mf::ParticleRunOptions opts;
  opts.record_particles = true;
  const auto one = mf::simulate_particles(init, p, opts);
  p.threads = 4;
  const auto four = mf::simulate_particles(init, p, opts);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one.records[i].m, four.records[i].m);
    EXPECT_EQ(one.records[i].mu, four.records[i].mu);
    EXPECT_EQ(one.records[i].x, four.records[i].x);
  }
}

TEST(SimulateParticles, ReplicasDiffer) {
  mf::ModelParams p = noiseless(20);
  p.sigma = 0.3;
  const mf::ParticleState init = mf::split_state(20);
  mf::ParticleRunOptions r1;
  r1.replica = 1;
  const auto a = mf::simulate_particles(init, p);
  const auto b = mf::simulate_particles(init, p, r1);
  EXPECT_NE(a.records.back().m, b.records.back().m);
  EXPECT_EQ(a.records.back().m, mf::simulate_particles(init, p).records.back().m);
}

TEST(SimulateParticles, EngineMatchesSingleSteps) {
  mf::ModelParams p = noiseless(9);
  p.sigma = 0.6;
  p.seed = 3;
  const mf::RngStream replica{3, 0, 0};
  mf::ParticleState a = mf::split_state(9, 0.1);
  mf::ParticleState b = a;
  mf::ParticleEngine engine(p, replica);
  for (int k = 0; k < 13; ++k) {
    engine.step(a);
    b = mf::step_particles(b, p, replica);
  }
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.mu, b.mu);
}

TEST(SimulateParticles, RejectsWrongParticleCount) {
  EXPECT_THROW(mf::simulate_particles(mf::split_state(3), noiseless(4)), mf::ValidationError);
}

TEST(CoefficientFlow, PureDecayWithoutDiffusion) {
  mf::PotentialCoeffs c{{0.5, -1.0, 2.0, 3.0, -4.0}, 0.0};
  const auto out = mf::coefficient_flow(c, 0.7, 2.0);
  EXPECT_EQ(out.a[0], 0.5);
  EXPECT_EQ(out.a[1], -1.0);
  for (std::size_t k = 2; k < 5; ++k) {
    EXPECT_NEAR(out.a[k], c.a[k] * std::exp(-1.4), 1e-15);
  }
}

TEST(CoefficientFlow, QuarticFeedsQuadratic) {
  mf::PotentialCoeffs c{{0, 0, 0, 0, 1}, 1.0};
  const auto out = mf::coefficient_flow(c, 1.0, 1.0);
  EXPECT_NEAR(out.a[2], 12.0 / std::exp(1.0), 1e-14);
  EXPECT_NEAR(out.a[4], std::exp(-1.0), 1e-15);
  EXPECT_EQ(out.a[3], 0.0);
}

TEST(CoefficientFlow, MatchesNumericalIntegration) {
  const double alpha = 0.8, d = 0.3, t_end = 2.0;
  mf::PotentialCoeffs c{{0.1, 0.2, 1.0, -0.5, 0.25, 0.3, -0.2}, d};
  // RK4 on the linear system as an independent check.
  std::vector<double> a = c.a;
  auto rhs = [&](const std::vector<double>& v) {
    std::vector<double> r(v.size(), 0.0);
    for (std::size_t k = 2; k < v.size(); ++k) {
      r[k] = -alpha * v[k];
      if (k + 2 < v.size()) r[k] += d * double((k + 2) * (k + 1)) * v[k + 2];
    }
    return r;
  };
  const int steps = 2000;
  const double h = t_end / steps;
  for (int s = 0; s < steps; ++s) {
    auto k1 = rhs(a);
    std::vector<double> tmp(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) tmp[i] = a[i] + 0.5 * h * k1[i];
    auto k2 = rhs(tmp);
    for (std::size_t i = 0; i < a.size(); ++i) tmp[i] = a[i] + 0.5 * h * k2[i];
    auto k3 = rhs(tmp);
    for (std::size_t i = 0; i < a.size(); ++i) tmp[i] = a[i] + h * k3[i];
    auto k4 = rhs(tmp);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
  }
  const auto out = mf::coefficient_flow(c, alpha, t_end);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(out.a[k], a[k], 1e-11) << k;
}

TEST(CoefficientFlow, DecaysToZero) {
  mf::PotentialCoeffs c{{0, 0, 1, 1, 1, 1, 1, 1, 1}, 2.0};
  const auto out = mf::coefficient_flow(c, 1.0, 200.0);
  for (std::size_t k = 2; k < out.a.size(); ++k) EXPECT_LT(std::abs(out.a[k]), 1e-70);
}

TEST(CoefficientFlow, RejectsBadInputs) {
  mf::PotentialCoeffs c{{0, 0, 1}, 0.0};
  EXPECT_THROW(mf::coefficient_flow(c, 0.0, 1.0), mf::ValidationError);
  c.diffusion = -1.0;
  EXPECT_THROW(mf::coefficient_flow(c, 1.0, 1.0), mf::ValidationError);
}

TEST(Hasminskii, SimpleValues) {
  mf::ParticleState s;
  s.x.assign(5, 0.0);
  EXPECT_EQ(mf::hasminskii_value(s, 1.0), 0.0);
  s.x.assign(5, 1.0);
  EXPECT_DOUBLE_EQ(mf::hasminskii_value(s, 1.0), 0.75);
  s.mu = 2.0;
  EXPECT_DOUBLE_EQ(mf::hasminskii_value(s, 0.5), 1.75);
  EXPECT_THROW(mf::hasminskii_value(s, 0.0), mf::ValidationError);
}

TEST(Hasminskii, NonIncreasingFarFromOrigin) {
  mf::ModelParams p = noiseless(50);
  p.dt = 1e-3;
  mf::ParticleState s;
  for (std::size_t i = 0; i < 50; ++i) s.x.push_back(2.0 + 2.0 * double(i) / 49.0);
  const std::vector<double> xi(50, 0.0);
  double prev = mf::hasminskii_value(s, 1.0);
  int checked = 0;
  for (int k = 0; k < 5000 && prev > 2.0; ++k) {
    mf::advance_particles(s, p, xi);
    const double v = mf::hasminskii_value(s, 1.0);
    EXPECT_LE(v, prev + p.dt);
    prev = v;
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Hasminskii, RunningAverageStaysBounded) {
  mf::ModelParams p = noiseless(100, 1.0, 2.5);
  p.sigma = 0.5;
  p.dt = 1e-3;
  p.seed = 5;
  mf::ParticleEngine engine(p, {5, 0, 0});
  mf::ParticleState s = mf::split_state(100);
  double sum = 0.0;
  const int steps = 50000;
  for (int k = 0; k < steps; ++k) {
    engine.step(s);
    sum += mf::hasminskii_value(s, 1.0 / p.theta);
  }
  const double avg = sum / steps;
  EXPECT_TRUE(std::isfinite(avg));
  EXPECT_LT(avg, 5.0);
}
