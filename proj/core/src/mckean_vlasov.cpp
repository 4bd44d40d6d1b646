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

#include "meanfield/mckean_vlasov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "meanfield/gaussian_closure.hpp"
#include "meanfield/parallel.hpp"
#include "meanfield/particles.hpp"

namespace meanfield {

namespace {

double limit_drift(double x, double mu) { return -x * x * x + x - mu; }

// One step of the frozen limit SDE from t_k to t_{k+1}.
double limit_step(double x, double mu_k, double mu_next, double dt, double noise,
                  SdeScheme scheme) {
  if (scheme == SdeScheme::kEulerMaruyama) return x + limit_drift(x, mu_k) * dt + noise;
  const double mu_mid = 0.5 * (mu_k + mu_next);
  const double k1 = limit_drift(x, mu_k);
  const double k2 = limit_drift(x + 0.5 * dt * k1, mu_mid);
  const double k3 = limit_drift(x + 0.5 * dt * k2, mu_mid);
  const double k4 = limit_drift(x + dt * k3, mu_next);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4) + noise;
}

// Contiguous split of `units` into at most 64 blocks; the split depends
// only on `units`, so per-block partial sums are thread-count independent.
struct Blocks {
  std::size_t units = 0;
  std::size_t count = 0;
  explicit Blocks(std::size_t n) : units(n), count(std::min<std::size_t>(64, n)) {}
  [[nodiscard]] std::size_t begin(std::size_t b) const { return b * units / count; }
  [[nodiscard]] std::size_t end(std::size_t b) const { return (b + 1) * units / count; }
};

void check_picard(const PicardOptions& opts) {
  if (opts.n_iter < 1) throw ValidationError("n_iter must be >= 1");
  if (opts.n_samples < 2) throw ValidationError("n_samples must be >= 2");
  if (opts.antithetic && opts.n_samples % 2 != 0) {
    throw ValidationError("antithetic sampling needs an even n_samples");
  }
  if (!(opts.tol > 0.0)) throw ValidationError("Picard tolerance must be > 0");
}

struct MeanStats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStats mean_and_stderr(const std::vector<double>& v) {
  MeanStats s;
  const double n = static_cast<double>(v.size());
  s.mean = pairwise_sum(v) / n;
  if (v.size() > 1) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - s.mean) * (v[i] - s.mean);
    s.stderr_ = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return s;
}

}  // namespace

double InitialLaw::sample(double g) const {
  switch (kind) {
    case Kind::kDirac: return a;
    case Kind::kNormal: return a + b * g;
    case Kind::kTwoPoint: return g >= 0.0 ? a : -a;
  }
  return a;
}

std::string InitialLaw::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kDirac: os << "dirac(" << a << ")"; break;
    case Kind::kNormal: os << "normal(" << a << "," << b << ")"; break;
    case Kind::kTwoPoint: os << "two_point(" << a << ")"; break;
  }
  return os.str();
}

std::vector<double> mu_from_mean(std::span<const double> m, double mu0, double initial_mean,
                                 double alpha, double theta, double dt) {
  std::vector<double> mu(m.size());
  const double decay = std::exp(-alpha * dt);
  double integral = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k > 0) integral = decay * integral + 0.5 * dt * (decay * m[k - 1] + m[k]);
    const double e = std::exp(-alpha * dt * static_cast<double>(k));
    mu[k] = e * mu0 - theta * m[k] + theta * e * initial_mean + alpha * theta * integral;
  }
  return mu;
}

MeanPath picard_solve(const InitialLaw& law, double mu0, const ModelParams& params,
                      const PicardOptions& opts) {
  validate(params);
  check_picard(opts);
  if (!std::isfinite(mu0)) throw ValidationError("mu0 must be finite");
  const std::size_t steps = params.n_steps();
  const double dt = params.dt;
  const double noise_scale = params.sigma * std::sqrt(dt);
  const std::size_t units = opts.antithetic ? opts.n_samples / 2 : opts.n_samples;
  const int signs = opts.antithetic ? 2 : 1;
  const Blocks blocks(units);
  const RngStream base{params.seed, opts.stream_id, 0};
  WorkerPool pool(resolve_threads(params.threads));

  MeanPath out;
  out.times.resize(steps + 1);
  std::vector<double> mu(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    out.times[k] = static_cast<double>(k) * dt;
    mu[k] = std::exp(-params.alpha * out.times[k]) * mu0;
  }

  std::vector<std::vector<double>> partial(blocks.count, std::vector<double>(steps + 1));
  std::vector<double> m(steps + 1);
  for (std::size_t iter = 0; iter < opts.n_iter; ++iter) {
    pool.run(blocks.count, [&](std::size_t b0, std::size_t b1) {
      for (std::size_t b = b0; b < b1; ++b) {
        std::vector<double>& acc = partial[b];
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t u = blocks.begin(b); u < blocks.end(b); ++u) {
          NormalCursor cursor(base.substream(u));
          for (int s = 0; s < signs; ++s) {
            const double sign = s == 0 ? 1.0 : -1.0;
            double x = law.sample(sign * cursor.at(0));
            acc[0] += x;
            for (std::size_t k = 0; k < steps; ++k) {
              x = limit_step(x, mu[k], mu[k + 1], dt, noise_scale * sign * cursor.at(k + 1),
                             opts.scheme);
              acc[k + 1] += x;
            }
            if (!std::isfinite(x)) throw DivergenceError("limit SDE sample diverged; reduce dt");
          }
        }
      }
    });
    const double inv = 1.0 / static_cast<double>(opts.n_samples);
    for (std::size_t k = 0; k <= steps; ++k) {
      double s = 0.0;
      for (std::size_t b = 0; b < blocks.count; ++b) s += partial[b][k];
      m[k] = s * inv;
    }
    out.initial_mean = m[0];
    std::vector<double> next =
        mu_from_mean(m, mu0, out.initial_mean, params.alpha, params.theta, dt);
    double defect = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) defect = std::max(defect, std::abs(next[k] - mu[k]));
    out.defects.push_back(defect);
    mu = std::move(next);
    if (defect < opts.tol) {
      out.m = m;
      out.mu = mu;
      return out;
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not reach tolerance " << opts.tol << " in " << opts.n_iter
     << " iterations; defects:";
  for (double d : out.defects) os << ' ' << d;
  throw PicardNonConvergence(os.str(), out.defects);
}

double coupling_error(const ModelParams& params, const InitialLaw& law, double mu0,
                      std::span<const double> mu_ref, const RngStream& replica) {
  const std::size_t n = params.n_particles;
  const std::size_t steps = params.n_steps();
  if (mu_ref.size() != steps + 1) throw ValidationError("reference mu has the wrong length");
  const double dt = params.dt;
  const double noise_scale = params.sigma * std::sqrt(dt);
  std::vector<NormalCursor> cursors(n);
  std::vector<double> y(n), sup(n, 0.0), xi(n);
  ParticleState state;
  state.x.resize(n);
  state.mu = mu0;
  for (std::size_t i = 0; i < n; ++i) {
    cursors[i] = NormalCursor(replica.substream(i));
    state.x[i] = law.sample(cursors[i].at(0));
    y[i] = state.x[i];
  }
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) xi[i] = cursors[i].at(k + 1);
    advance_particles(state, params, xi);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = limit_step(y[i], mu_ref[k], mu_ref[k + 1], dt, noise_scale * xi[i],
                        SdeScheme::kEulerMaruyama);
      sup[i] = std::max(sup[i], std::abs(state.x[i] - y[i]));
    }
  }
  return pairwise_sum(sup) / static_cast<double>(n);
}

ChaosResult chaos_rate_experiment(const ModelParams& params, const ChaosOptions& opts) {
  validate(params);
  if (opts.n_grid.size() < 4) throw ValidationError("N grid needs at least 4 values");
  for (std::size_t n : opts.n_grid) {
    if (n < 1) throw ValidationError("N values must be >= 1");
  }
  if (opts.n_replicas < 2) throw ValidationError("n_replicas must be >= 2");

  ChaosResult res;
  res.reference = picard_solve(opts.law, opts.mu0, params, opts.reference);
  const std::vector<double>& mu_ref = res.reference.mu;
  WorkerPool pool(resolve_threads(params.threads));

  std::vector<double> ns, errs, ses;
  for (std::size_t a = 0; a < opts.n_grid.size(); ++a) {
    const std::size_t n = opts.n_grid[a];
    ModelParams p = params;
    p.n_particles = n;
    std::vector<double> per_replica(opts.n_replicas);
    pool.run(opts.n_replicas, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r < r1; ++r) {
        const RngStream replica{params.seed, ((a + 1) << 32) | r, 0};
        per_replica[r] = coupling_error(p, opts.law, opts.mu0, mu_ref, replica);
      }
    });
    const MeanStats st = mean_and_stderr(per_replica);
    ns.push_back(static_cast<double>(n));
    errs.push_back(st.mean);
    ses.push_back(st.stderr_);
  }
  res.fit = fit_log_log(ns, errs, ses);
  require_fit_quality(res.fit, opts.min_r2, "propagation-of-chaos rate");
  return res;
}

GaussErrorResult gaussian_error_experiment(const ModelParams& params,
                                           const GaussErrorOptions& opts) {
  ModelParams base = params;
  base.sigma = 0.0;
  validate(base);
  if (opts.sigma_grid.size() < 4) throw ValidationError("sigma grid needs at least 4 values");
  if (opts.n_samples < 2 || opts.n_samples % 2 != 0) {
    throw ValidationError("n_samples must be even and >= 2");
  }
  const std::size_t steps = base.n_steps();
  const double dt = base.dt;
  const std::size_t pairs = opts.n_samples / 2;
  const Blocks blocks(pairs);
  WorkerPool pool(resolve_threads(params.threads));

  GaussErrorResult res;
  std::vector<double> sigmas, totals, ses;
  for (std::size_t s_idx = 0; s_idx < opts.sigma_grid.size(); ++s_idx) {
    const double sigma = opts.sigma_grid[s_idx];
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma values must be > 0");
    ModelParams p = base;
    p.sigma = sigma;
    PicardOptions po;
    po.n_iter = opts.picard_iter;
    po.n_samples = opts.n_samples;
    po.tol = opts.picard_tol;
    po.scheme = SdeScheme::kSplitRk4;
    po.stream_id = 0xE000000000000000ull + s_idx;
    const MeanPath limit = picard_solve(InitialLaw::dirac(opts.x0), opts.mu0, p, po);

    // Closure path: (m, nu, V) is deterministic; only z depends on the sample.
    std::vector<double> cm(steps + 1), cnu(steps + 1), cv(steps + 1), za(steps + 1);
    GaussState g{opts.x0, opts.mu0, 0.0};
    for (std::size_t k = 0; k <= steps; ++k) {
      cm[k] = g.m;
      cnu[k] = g.nu;
      cv[k] = g.V;
      za[k] = 1.0 - 3.0 * g.m * g.m - 3.0 * sigma * sigma * g.V;
      if (k < steps) {
        double dummy = 0.0;
        gauss_step(g, dummy, p.alpha, p.theta, sigma, dt, 0.0);
      }
    }
    double field_err = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
      field_err = std::max(field_err, std::abs(limit.mu[k] - cnu[k]));
    }

    const double sq = std::sqrt(dt);
    std::vector<double> pair_sup(pairs);
    std::vector<std::vector<double>> rem(blocks.count, std::vector<double>(steps + 1));
    const RngStream stream{params.seed, po.stream_id, 0};
    pool.run(blocks.count, [&](std::size_t b0, std::size_t b1) {
      for (std::size_t b = b0; b < b1; ++b) {
        std::fill(rem[b].begin(), rem[b].end(), 0.0);
        for (std::size_t u = blocks.begin(b); u < blocks.end(b); ++u) {
          NormalCursor cursor(stream.substream(u));
          double pair_total = 0.0;
          for (int s = 0; s < 2; ++s) {
            const double sign = s == 0 ? 1.0 : -1.0;
            double x = opts.x0;
            double z = 0.0;
            double sup = 0.0;
            for (std::size_t k = 0; k < steps; ++k) {
              const double db = sq * sign * cursor.at(k + 1);
              x = limit_step(x, limit.mu[k], limit.mu[k + 1], dt, sigma * db,
                             SdeScheme::kSplitRk4);
              z = z + za[k] * z * dt + db;
              const double y = cm[k + 1] + sigma * z;
              sup = std::max(sup, std::abs(x - y));
              const GaussSample gs{cm[k + 1], cnu[k + 1], cv[k + 1], z, y};
              rem[b][k + 1] += std::abs(closure_remainder(gs, sigma));
            }
            pair_total += sup;
          }
          pair_sup[u] = 0.5 * pair_total;
        }
      }
    });
    double rem_sup = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
      double s = 0.0;
      for (std::size_t b = 0; b < blocks.count; ++b) s += rem[b][k];
      rem_sup = std::max(rem_sup, s / static_cast<double>(opts.n_samples));
    }
    const MeanStats st = mean_and_stderr(pair_sup);
    res.path_error.push_back(st.mean);
    res.field_error.push_back(field_err);
    res.remainder_bound.push_back(rem_sup);
    sigmas.push_back(sigma);
    totals.push_back(st.mean + field_err);
    ses.push_back(st.stderr_);
  }
  res.fit = fit_log_log(sigmas, totals, ses);
  require_fit_quality(res.fit, opts.min_r2, "Gaussian approximation rate");
  return res;
}

}  // namespace meanfield
