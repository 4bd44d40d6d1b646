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

#ifndef MEANFIELD_FOKKER_PLANCK_HPP
#define MEANFIELD_FOKKER_PLANCK_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "meanfield/params.hpp"

namespace meanfield {

/// Uniform finite-volume grid on [lo, hi].
struct GridSpec {
  double lo = -4.0;
  double hi = 4.0;
  std::size_t n_cells = 400;

  [[nodiscard]] double width() const { return (hi - lo) / static_cast<double>(n_cells); }
  /// Cell midpoints. On a symmetric domain they are exact mirror images.
  [[nodiscard]] double center(std::size_t i) const;
  /// Interface k sits between cells k-1 and k (k = 0 .. n_cells).
  [[nodiscard]] double interface(std::size_t k) const;
  [[nodiscard]] bool symmetric() const { return lo == -hi; }
};

/// Cell-averaged density with its mass h * sum(q).
struct GridDensity {
  GridSpec grid;
  std::vector<double> q;
  double mass = 0.0;

  void refresh_mass();
  /// Rescales q to unit mass.
  void normalize();
};

struct FpState {
  GridDensity density;
  double mu = 0.0;
  double t = 0.0;
};

struct StationaryDensity {
  GridDensity density;  ///< midpoint samples of the stationary profile, unit grid mass
  double z_star = 0.0;  ///< normalising constant on the real line (may be inf for tiny sigma)
  double log_z = 0.0;
  double tail_mass = 0.0;  ///< estimated stationary mass outside [lo, hi]
  std::string warning;     ///< non-empty when tail_mass > 1e-10
};

/// Z^-1 exp((-x^4/2 + x^2) / sigma^2) on the grid. Z is computed in log space
/// by adaptive Simpson to relative tolerance `rel_tol`. Requires sigma > 0,
/// lo <= -4 and hi >= 4.
StationaryDensity stationary_density(double sigma, const GridSpec& grid, double rel_tol = 1e-10);

/// Time derivative of q under the full Chang-Cooper (Scharfetter-Gummel)
/// flux with zero-flux boundaries, for fixed mu.
std::vector<double> fp_operator(const GridDensity& d, double mu, double sigma);

/// Max-norm of fp_operator applied to the sampled stationary density.
double stationary_residual(double sigma, const GridSpec& grid, double mu = 0.0);

/// Quadrature pairing h * sum f(c_i) q_i with f(x) = -x^3 + x, summed in
/// mirror pairs so that an even density gives exactly zero.
double drift_pairing(const GridDensity& d);

/// Grid moment h * sum c_i^k q_i, summed in mirror pairs.
double grid_moment(const GridDensity& d, int k);

/// h * sum |p_i - q_i|; both densities must live on the same grid.
double l1_distance(const GridDensity& p, const GridDensity& q);

/// Mirror image x -> -x of a density on a symmetric grid.
GridDensity reflect(const GridDensity& d);

/// Normalised midpoint samples of a normal density on the grid.
GridDensity normal_density(const GridSpec& grid, double mean, double sd);

/// Largest dt for which the explicit drift part keeps q >= 0 at this mu.
double max_stable_dt(const GridSpec& grid, double mu);

struct FpSummary {
  double mass = 0.0;
  double mu = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double l1_to_qstar = 0.0;
};

struct FpOptions {
  std::vector<double> dump_times;  ///< densities are stored at the first step past each time
};

struct FpRun {
  Trajectory<FpSummary> summaries;  ///< every params.record_stride steps and the last step
  FpState final_state;
  std::vector<std::pair<double, GridDensity>> dumps;
};

/// Semi-implicit step: upwind drift part explicit, Chang-Cooper-weighted
/// diffusion implicit, mu advanced by explicit Euler from the same time
/// level. Throws NumericalError when dt breaks the drift CFL bound.
void fp_step(FpState& state, const ModelParams& params);

/// Evolves to t_end with params.dt. params.sigma must be > 0.
FpRun evolve(const FpState& init, const ModelParams& params, double t_end,
             const FpOptions& opts = {});

}  // namespace meanfield

#endif  // MEANFIELD_FOKKER_PLANCK_HPP
