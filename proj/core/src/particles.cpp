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

#include "meanfield/particles.hpp"

#include <cmath>
#include <sstream>

#include "meanfield/error.hpp"
#include "meanfield/parallel.hpp"

namespace meanfield {

namespace {

void check_size(const ParticleState& state, std::span<const double> xi) {
  if (xi.size() != state.x.size()) {
    throw ValidationError("noise vector length does not match particle count");
  }
  if (state.x.empty()) throw ValidationError("particle state is empty");
}

void check_guard(const ParticleState& state, double guard) {
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    const double v = state.x[i];
    if (!(std::abs(v) <= guard)) {
      std::ostringstream os;
      os << "particle run diverged at t=" << state.t << ": |x_" << i << "| = " << v
         << " exceeds guard " << guard << " (reduce dt)";
      throw DivergenceError(os.str());
    }
  }
  if (!std::isfinite(state.mu)) {
    throw DivergenceError("particle run diverged: field value is not finite");
  }
}

// drift holds -x^3 + x on return; it is caller-owned scratch so the engine
// can reuse it across steps.
void advance_impl(ParticleState& state, const ModelParams& p, std::span<const double> xi,
                  FieldUpdate form, WorkerPool* pool, std::vector<double>& drift) {
  const std::size_t n = state.x.size();
  const double dt = p.dt;
  const double noise_scale = p.sigma * std::sqrt(dt);
  const double mu = state.mu;
  drift.resize(n);

  double m_old = 0.0;
  if (form == FieldUpdate::kEmpiricalIncrement) {
    m_old = pairwise_sum(state.x) / static_cast<double>(n);
  }

  auto body = [&](std::size_t begin, std::size_t end) {
    double* x = state.x.data();
    for (std::size_t i = begin; i < end; ++i) {
      const double xv = x[i];
      const double d = -xv * xv * xv + xv;
      drift[i] = d;
      x[i] = xv + (d - mu) * dt + noise_scale * xi[i];
    }
  };
  if (pool != nullptr) {
    pool->run(n, body);
  } else {
    body(0, n);
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  if (form == FieldUpdate::kExpanded) {
    const double drift_mean = pairwise_sum(drift) * inv_n;
    const double noise_mean = pairwise_sum(xi) * inv_n;
    state.mu = mu - (p.alpha - p.theta) * mu * dt - p.theta * drift_mean * dt -
               p.theta * noise_scale * noise_mean;
  } else {
    const double m_new = pairwise_sum(state.x) * inv_n;
    state.mu = mu - p.alpha * mu * dt - p.theta * (m_new - m_old);
  }
  ++state.step;
  state.t = static_cast<double>(state.step) * dt;
  check_guard(state, p.divergence_guard);
}

}  // namespace

double ParticleState::mean() const {
  return x.empty() ? 0.0 : pairwise_sum(x) / static_cast<double>(x.size());
}

ParticleState split_state(std::size_t n, double mu0) {
  ParticleState s;
  s.x.resize(n);
  const std::size_t plus = n - n / 2;
  for (std::size_t i = 0; i < n; ++i) s.x[i] = i < plus ? 1.0 : -1.0;
  s.mu = mu0;
  return s;
}

void advance_particles(ParticleState& state, const ModelParams& params,
                       std::span<const double> xi, FieldUpdate form, WorkerPool* pool) {
  check_size(state, xi);
  std::vector<double> drift;
  advance_impl(state, params, xi, form, pool, drift);
}

ParticleState step_particles(const ParticleState& state, const ModelParams& params,
                             const RngStream& replica) {
  validate(params);
  std::vector<double> xi(state.x.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    xi[i] = gaussian_draw(replica.substream(i), state.step);
  }
  ParticleState next = state;
  advance_particles(next, params, xi);
  return next;
}

ParticleEngine::ParticleEngine(const ModelParams& params, RngStream replica)
    : params_(validate(params)), noise_(params.n_particles) {
  cursors_.reserve(params.n_particles);
  for (std::size_t i = 0; i < params.n_particles; ++i) {
    cursors_.emplace_back(replica.substream(i));
  }
  const unsigned threads = resolve_threads(params.threads);
  if (threads > 1) pool_ = std::make_unique<WorkerPool>(threads);
}

ParticleEngine::~ParticleEngine() = default;
ParticleEngine::ParticleEngine(ParticleEngine&&) noexcept = default;
ParticleEngine& ParticleEngine::operator=(ParticleEngine&&) noexcept = default;

void ParticleEngine::step(ParticleState& state) {
  if (state.x.size() != cursors_.size()) {
    throw ValidationError("particle count does not match the engine's n_particles");
  }
  const std::uint64_t k = state.step;
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) noise_[i] = cursors_[i].at(k);
  };
  if (pool_) {
    pool_->run(noise_.size(), fill);
  } else {
    fill(0, noise_.size());
  }
  advance_impl(state, params_, noise_, FieldUpdate::kExpanded, pool_.get(), drift_);
}

Trajectory<ParticleSnapshot> simulate_particles(const ParticleState& init,
                                                const ModelParams& params,
                                                const ParticleRunOptions& opts) {
  validate(params);
  if (init.x.size() != params.n_particles) {
    throw ValidationError("initial state has " + std::to_string(init.x.size()) +
                          " particles but n_particles = " +
                          std::to_string(params.n_particles));
  }
  for (double v : init.x) {
    if (!std::isfinite(v)) throw ValidationError("initial particle positions must be finite");
  }
  if (!std::isfinite(init.mu)) throw ValidationError("initial mu must be finite");

  ParticleEngine engine(params, RngStream{params.seed, opts.replica, 0});
  ParticleState state = init;
  state.step = 0;
  state.t = 0.0;

  Trajectory<ParticleSnapshot> out;
  out.meta = params;
  auto record = [&] {
    ParticleSnapshot snap{state.mean(), state.mu, {}};
    if (opts.record_particles) snap.x = state.x;
    out.push(state.t, std::move(snap));
  };
  record();
  const std::size_t steps = params.n_steps();
  for (std::size_t k = 1; k <= steps; ++k) {
    engine.step(state);
    if (k % params.record_stride == 0 || k == steps) record();
  }
  return out;
}

PotentialCoeffs coefficient_flow(const PotentialCoeffs& c0, double alpha, double t) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(c0.diffusion >= 0.0)) throw ValidationError("diffusion must be >= 0");
  PotentialCoeffs out = c0;
  const std::size_t n = c0.degree();
  if (n < 2) return out;
  const double decay = std::exp(-alpha * t);
  const double dt_term = c0.diffusion * t;
  // b_k = e^{alpha t} a_k solves b_k' = D (k+2)(k+1) b_{k+2}, a nilpotent
  // system, so b(t) = sum_j (D t)^j / j! * (k+2j)!/k! * b_{k+2j}(0).
  for (std::size_t k = 2; k <= n; ++k) {
    double sum = 0.0;
    double coef = 1.0;  // (D t)^j / j! * (k+2j)! / k!
    for (std::size_t j = 0; k + 2 * j <= n; ++j) {
      if (j > 0) {
        const double kk = static_cast<double>(k + 2 * j);
        coef *= dt_term * kk * (kk - 1.0) / static_cast<double>(j);
      }
      sum += coef * c0.a[k + 2 * j];
    }
    out.a[k] = decay * sum;
  }
  return out;
}

double hasminskii_value(const ParticleState& state, double a) {
  if (!(a > 0.0)) throw ValidationError("Hasminskii weight a must be > 0");
  if (state.x.empty()) throw ValidationError("particle state is empty");
  std::vector<double> terms(state.x.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double x2 = state.x[i] * state.x[i];
    terms[i] = 0.25 * x2 * x2 + 0.5 * x2;
  }
  return pairwise_sum(terms) / static_cast<double>(terms.size()) +
         0.5 * a * state.mu * state.mu;
}

}  // namespace meanfield
