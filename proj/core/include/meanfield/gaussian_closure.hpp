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

#ifndef MEANFIELD_GAUSSIAN_CLOSURE_HPP
#define MEANFIELD_GAUSSIAN_CLOSURE_HPP

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meanfield/cubic.hpp"
#include "meanfield/params.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

/// Mean m, field nu and variance factor V of the Gaussian closure.
struct GaussState {
  double m = 0.0;
  double nu = 0.0;
  double V = 0.0;

  friend bool operator==(const GaussState&, const GaussState&) = default;
};

struct GaussVelocity {
  double dm = 0.0;
  double dnu = 0.0;
  double dV = 0.0;
};

/// (dm, dnu, dV) with dnu = -alpha nu - theta dm. Requires V >= 0.
GaussVelocity gauss_vector_field(const GaussState& s, double alpha, double theta, double sigma);

struct GaussEquilibrium {
  std::string label;  ///< "s1" .. "s5"
  GaussState point;
};

/// Closed-form equilibrium by label. s1 and s2 extend continuously to
/// sigma = 0 where they equal (+-1, 0, 1/4); s3..s5 need sigma > 0 and s1..s4
/// need sigma^2 <= 1/3 (ValidationError otherwise).
GaussState equilibrium_point(std::string_view label, double sigma);

/// s1..s4 when sigma^2 <= 1/3, and s5. Each point is checked to be a zero
/// of the vector field to rounding accuracy. Requires sigma > 0.
std::vector<GaussEquilibrium> gauss_equilibria(double alpha, double theta, double sigma);

/// Jacobian of gauss_vector_field with respect to (m, nu, V).
Mat3 gauss_jacobian_matrix(const GaussState& s, double alpha, double theta, double sigma);

struct SpectrumReport {
  std::string label;
  GaussState point;
  std::array<std::complex<double>, 3> eigenvalues{};
  double max_real_part = 0.0;
  bool stable = false;
  double max_residual = 0.0;  ///< worst relative characteristic-polynomial residual
};

/// Eigenvalues of the Jacobian at `point` from its characteristic cubic.
SpectrumReport gauss_jacobian(const GaussState& point, double alpha, double theta,
                              double sigma, std::string label = {});

/// Spectrum at the labelled equilibrium.
SpectrumReport equilibrium_spectrum(std::string_view label, double alpha, double theta,
                                    double sigma);

/// d Re(lambda) / d(sigma^2) at sigma = 0 for theta = alpha + 2:
/// 3 (10 - alpha) / (2 (8 + alpha)).
double excitability_slope(double alpha);

/// Eigenvalues of the labelled equilibrium along an increasing sigma grid,
/// each set permuted to continue the previous one (nearest-neighbour pairing).
std::vector<std::array<std::complex<double>, 3>> track_eigenvalues(
    std::string_view label, double alpha, double theta, std::span<const double> sigmas);

struct SigmaCOptions {
  std::string label = "s1";
  double lo = 1e-4;
  double hi = 0.57735026918962573 - 1e-4;  // 1/sqrt(3) - 1e-4
  std::size_t scan_points = 64;
  double tol = 1e-13;
};

struct SigmaCResult {
  bool excitable = false;
  double sigma_c = 0.0;  ///< valid when excitable
  /// Tracked eigenvalue that crosses the imaginary axis.
  std::complex<double> crossing_eigenvalue{};
  double max_real_lo = 0.0;
  double max_real_hi = 0.0;
};

/// First sigma in the bracket where the labelled equilibrium loses linear
/// stability. A bracket without a sign change yields excitable = false.
/// Requires theta < alpha + 2.
SigmaCResult find_sigma_c(double alpha, double theta, const SigmaCOptions& opts = {});

/// sqrt((2/3)(alpha - theta)(alpha - theta - 1)); requires theta > alpha + 2.
double s5_stability_threshold(double alpha, double theta);

struct GaussSample {
  double m = 0.0;
  double nu = 0.0;
  double V = 0.0;
  double z = 0.0;
  double y = 0.0;  ///< m + sigma z
};

using GaussPath = Trajectory<GaussSample>;

/// One step: classical RK4 for (m, nu, V) and Euler-Maruyama for
/// dz = (1 - 3m^2 - 3 sigma^2 V) z dt + dB with the given increment dB.
void gauss_step(GaussState& s, double& z, double alpha, double theta, double sigma, double dt,
                double dB);

/// Co-integrates the closure and the fluctuation process from (init, z = 0);
/// dB_k = sqrt(dt) * gaussian_draw(stream, k). Records every
/// params.record_stride steps. Throws DivergenceError past the guard.
GaussPath simulate_gauss_path(const GaussState& init, const ModelParams& params,
                              const RngStream& stream);

/// Same, with caller-supplied Brownian increments (one per step).
GaussPath simulate_gauss_path(const GaussState& init, const ModelParams& params,
                              std::span<const double> increments);

struct MomentDefects {
  double k1 = 0.0;  ///< first-moment line and the field line
  double k2 = 0.0;  ///< second-moment line
};

/// Max over recorded steps of the forward-difference defect of the k = 1, 2
/// moment equations evaluated on the Gaussian moments of (m, sigma^2 V) and
/// nu. Requires a path recorded with stride 1.
MomentDefects moment_residual(const GaussPath& path);

/// Normalised remainder 3m(z^2 - V) + sigma (z^3 - 3Vz) of the y equation.
double closure_remainder(const GaussSample& s, double sigma);

}  // namespace meanfield

#endif  // MEANFIELD_GAUSSIAN_CLOSURE_HPP
