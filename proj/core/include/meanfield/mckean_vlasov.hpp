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

#ifndef MEANFIELD_MCKEAN_VLASOV_HPP
#define MEANFIELD_MCKEAN_VLASOV_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meanfield/error.hpp"
#include "meanfield/params.hpp"
#include "meanfield/rate_fit.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

/// Law of the initial value, written as the image of one standard normal g
/// so that antithetic pairs (g, -g) are available for every law.
struct InitialLaw {
  enum class Kind { kDirac, kNormal, kTwoPoint };
  Kind kind = Kind::kDirac;
  double a = 0.0;  ///< Dirac point, normal mean, or two-point magnitude
  double b = 0.0;  ///< normal standard deviation

  static InitialLaw dirac(double x0) { return {Kind::kDirac, x0, 0.0}; }
  static InitialLaw normal(double mean, double sd) { return {Kind::kNormal, mean, sd}; }
  /// +-c with probability 1/2 each.
  static InitialLaw two_point(double c) { return {Kind::kTwoPoint, c, 0.0}; }

  [[nodiscard]] double sample(double g) const;
  [[nodiscard]] std::string describe() const;
};

/// Time discretisation of the frozen limit SDE dx = (-x^3 + x - mu(t)) dt + sigma dB.
enum class SdeScheme {
  kEulerMaruyama,
  /// RK4 on the drift with mu interpolated linearly, then the additive
  /// noise increment.
  kSplitRk4,
};

/// E[x(t)] and mu(t) of the limit equation on the grid t_k = k dt.
struct MeanPath {
  std::vector<double> times;
  std::vector<double> m;
  std::vector<double> mu;
  std::vector<double> defects;  ///< sup_t |mu_{n+1} - mu_n| per iteration
  double initial_mean = 0.0;    ///< sample mean of the initial values
};

struct PicardOptions {
  std::size_t n_iter = 30;
  std::size_t n_samples = 100000;
  double tol = 1e-10;
  bool antithetic = true;
  SdeScheme scheme = SdeScheme::kEulerMaruyama;
  /// stream_id of the sample paths; sample pair j uses substream j.
  std::uint64_t stream_id = 0xF000000000000000ull;
};

/// Non-convergence of the Picard iteration; carries the defect sequence.
class PicardNonConvergence : public InconclusiveError {
 public:
  PicardNonConvergence(const std::string& what, std::vector<double> defects)
      : InconclusiveError(what), defects_(std::move(defects)) {}
  [[nodiscard]] const std::vector<double>& defects() const { return defects_; }

 private:
  std::vector<double> defects_;
};

/// Picard iteration for the limit equation on [0, params.t_end] with step
/// params.dt. The same sample paths (common random numbers) are reused in
/// every iteration. Stops once the defect drops below opts.tol; the returned
/// m is the mean under the last mu iterate and mu is its update.
MeanPath picard_solve(const InitialLaw& law, double mu0, const ModelParams& params,
                      const PicardOptions& opts = {});

/// mu(t) rebuilt from m(t) by the closed form with the recursive trapezoid
/// rule for the exponential kernel.
std::vector<double> mu_from_mean(std::span<const double> m, double mu0, double initial_mean,
                                 double alpha, double theta, double dt);

/// One coupled replica: params.n_particles particles and as many limit-SDE
/// copies driven by mu_ref (length n_steps + 1) share initial values and
/// increments; particle i uses substream i of `replica`, draw 0 for the
/// initial value and draw k + 1 for step k. Returns (1/N) sum_i sup_t |x_i - y_i|.
double coupling_error(const ModelParams& params, const InitialLaw& law, double mu0,
                      std::span<const double> mu_ref, const RngStream& replica);

struct ChaosOptions {
  std::vector<std::size_t> n_grid{10, 30, 100, 300, 1000};
  std::size_t n_replicas = 200;
  InitialLaw law = InitialLaw::normal(0.5, 0.5);
  double mu0 = 0.2;
  PicardOptions reference{};
  double min_r2 = 0.9;
};

struct ChaosResult {
  RateFit fit;
  MeanPath reference;
};

/// For each N, couples the N-particle system and N copies of the limit SDE
/// driven by the reference mu through identical initial values and Brownian
/// increments, and measures E[(1/N) sum_i sup_t |x_i - y_i|] over replicas.
/// Throws InconclusiveFitError when the log-log fit has r^2 < min_r2.
ChaosResult chaos_rate_experiment(const ModelParams& params, const ChaosOptions& opts = {});

struct GaussErrorOptions {
  std::vector<double> sigma_grid{0.01, 0.02, 0.05, 0.1};
  std::size_t n_samples = 2000;
  double x0 = 0.5;
  double mu0 = 0.2;
  double min_r2 = 0.9;
  std::size_t picard_iter = 30;
  double picard_tol = 1e-12;
};

struct GaussErrorResult {
  RateFit fit;
  std::vector<double> path_error;      ///< E sup_t |x - y| per sigma
  std::vector<double> field_error;     ///< sup_t |mu - nu| per sigma
  std::vector<double> remainder_bound; ///< sup_t E|R_sigma(t)| per sigma
};

/// Couples the limit SDE from (x0, mu0) with the Gaussian closure path
/// y = m + sigma z through the same Brownian increments and measures
/// E sup|x - y| + sup|mu - nu| for each sigma. params.sigma is ignored.
GaussErrorResult gaussian_error_experiment(const ModelParams& params,
                                           const GaussErrorOptions& opts = {});

}  // namespace meanfield

#endif  // MEANFIELD_MCKEAN_VLASOV_HPP
