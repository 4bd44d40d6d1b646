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

#include "meanfield/gaussian_closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#ifndef NDEBUG
#include <Eigen/Eigenvalues>
#endif

#include "meanfield/error.hpp"

namespace meanfield {

namespace {

using cd = std::complex<double>;
using Spectrum = std::array<cd, 3>;

void check_model(double alpha, double theta, double sigma) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!std::isfinite(theta) || !(theta >= 0.0)) throw ValidationError("theta must be >= 0");
  if (!std::isfinite(sigma) || !(sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
}

GaussVelocity field_unchecked(const GaussState& s, double alpha, double theta, double sigma) {
  const double s2 = sigma * sigma;
  const double dm = -s.m * s.m * s.m + s.m - s.nu - 3.0 * s2 * s.m * s.V;
  const double dnu = -alpha * s.nu - theta * dm;
  const double dV = 1.0 + 2.0 * (1.0 - 3.0 * s.m * s.m) * s.V - 6.0 * s2 * s.V * s.V;
  return {dm, dnu, dV};
}

// Magnitude of the largest term in the field, for scaled zero checks.
double field_scale(const GaussState& s, double alpha, double theta, double sigma) {
  const double s2 = sigma * sigma;
  const double am = std::abs(s.m);
  const double t1 = std::max({am * am * am, am, std::abs(s.nu), 3.0 * s2 * am * s.V});
  const double t2 = std::max(alpha * std::abs(s.nu), theta * t1);
  const double t3 = std::max({1.0, 2.0 * (1.0 + 3.0 * am * am) * s.V, 6.0 * s2 * s.V * s.V});
  return std::max({t1, t2, t3, 1.0});
}

double root_r(double sigma) {
  const double r2 = 1.0 - 3.0 * sigma * sigma;
  if (r2 < 0.0) {
    throw ValidationError("equilibria s1..s4 exist only for sigma^2 <= 1/3");
  }
  return std::sqrt(r2);
}

#ifndef NDEBUG
void cross_check(const Mat3& a, const Spectrum& eig) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const Eigen::EigenSolver<Eigen::Matrix3d> solver(m, false);
  const auto ref = solver.eigenvalues();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (const cd& z : eig) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) best = std::min(best, std::abs(ref(k) - z));
    if (best > 1e-6 * scale) {
      throw NumericalError("cubic eigenvalues disagree with the companion cross-check");
    }
  }
}
#endif

// Permutation of `next` that best continues `prev`.
Spectrum continue_from(const Spectrum& prev, const Spectrum& next) {
  std::array<std::size_t, 3> perm{0, 1, 2};
  std::array<std::size_t, 3> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < 3; ++i) cost += std::abs(prev[i] - next[perm[i]]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {next[best[0]], next[best[1]], next[best[2]]};
}

double max_real(const Spectrum& eig) {
  return std::max({eig[0].real(), eig[1].real(), eig[2].real()});
}

void check_guard(const GaussState& s, double z, double guard, double t) {
  if (!(std::abs(s.m) <= guard) || !(std::abs(s.nu) <= guard) || !(std::abs(s.V) <= guard) ||
      !(std::abs(z) <= guard)) {
    std::ostringstream os;
    os << "Gaussian closure path diverged at t=" << t << " (reduce dt)";
    throw DivergenceError(os.str());
  }
}

}  // namespace

GaussVelocity gauss_vector_field(const GaussState& s, double alpha, double theta, double sigma) {
  if (!(s.V >= 0.0)) throw ValidationError("V must be >= 0");
  return field_unchecked(s, alpha, theta, sigma);
}

GaussState equilibrium_point(std::string_view label, double sigma) {
  if (!std::isfinite(sigma) || !(sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
  const double s2 = sigma * sigma;
  if (label == "s1" || label == "s2") {
    const double r = root_r(sigma);
    const double m = std::sqrt(0.5 * (1.0 + r));
    const double v = 0.5 / (1.0 + r);  // (1 - r) / (6 sigma^2) without cancellation
    return {label == "s1" ? m : -m, 0.0, v};
  }
  if (label == "s3" || label == "s4") {
    if (!(sigma > 0.0)) throw ValidationError("s3 and s4 require sigma > 0");
    const double r = root_r(sigma);
    // (1 - r) / 2 = 3 sigma^2 / (2 (1 + r))
    const double m = std::sqrt(1.5 * s2 / (1.0 + r));
    return {label == "s3" ? -m : m, 0.0, (1.0 + r) / (6.0 * s2)};
  }
  if (label == "s5") {
    if (!(sigma > 0.0)) throw ValidationError("s5 requires sigma > 0");
    return {0.0, 0.0, (1.0 + std::sqrt(1.0 + 6.0 * s2)) / (6.0 * s2)};
  }
  throw ValidationError("unknown equilibrium label '" + std::string(label) + "'");
}

std::vector<GaussEquilibrium> gauss_equilibria(double alpha, double theta, double sigma) {
  check_model(alpha, theta, sigma);
  if (!(sigma > 0.0)) throw ValidationError("sigma must be > 0");
  std::vector<GaussEquilibrium> out;
  std::vector<std::string> labels;
  if (3.0 * sigma * sigma <= 1.0) labels = {"s1", "s2", "s3", "s4"};
  labels.emplace_back("s5");
  for (const std::string& l : labels) {
    const GaussState p = equilibrium_point(l, sigma);
    const GaussVelocity v = field_unchecked(p, alpha, theta, sigma);
    const double res = std::max({std::abs(v.dm), std::abs(v.dnu), std::abs(v.dV)});
    if (!(res <= 1e-12 * field_scale(p, alpha, theta, sigma))) {
      throw NumericalError("closed-form equilibrium " + l + " is not a zero of the field");
    }
    out.push_back({l, p});
  }
  return out;
}

Mat3 gauss_jacobian_matrix(const GaussState& s, double alpha, double theta, double sigma) {
  const double s2 = sigma * sigma;
  const double a = 1.0 - 3.0 * s.m * s.m - 3.0 * s2 * s.V;
  const double c = -3.0 * s2 * s.m;
  return {{{a, -1.0, c},
           {-theta * a, theta - alpha, -theta * c},
           {-12.0 * s.m * s.V, 0.0, 2.0 * (1.0 - 3.0 * s.m * s.m) - 12.0 * s2 * s.V}}};
}

SpectrumReport gauss_jacobian(const GaussState& point, double alpha, double theta,
                              double sigma, std::string label) {
  check_model(alpha, theta, sigma);
  const Mat3 jac = gauss_jacobian_matrix(point, alpha, theta, sigma);
  const CharPoly poly = characteristic_polynomial(jac);
  SpectrumReport rep;
  rep.label = std::move(label);
  rep.point = point;
  rep.eigenvalues = cubic_roots(poly);
#ifndef NDEBUG
  cross_check(jac, rep.eigenvalues);
#endif
  rep.max_real_part = max_real(rep.eigenvalues);
  rep.stable = rep.max_real_part < 0.0;
  for (const cd& z : rep.eigenvalues) {
    rep.max_residual = std::max(rep.max_residual, relative_residual(poly, z));
  }
  return rep;
}

SpectrumReport equilibrium_spectrum(std::string_view label, double alpha, double theta,
                                    double sigma) {
  return gauss_jacobian(equilibrium_point(label, sigma), alpha, theta, sigma, std::string(label));
}

double excitability_slope(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  return 3.0 * (10.0 - alpha) / (2.0 * (8.0 + alpha));
}

std::vector<std::array<std::complex<double>, 3>> track_eigenvalues(
    std::string_view label, double alpha, double theta, std::span<const double> sigmas) {
  std::vector<Spectrum> out;
  out.reserve(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (i > 0 && !(sigmas[i] > sigmas[i - 1])) {
      throw ValidationError("sigma grid must be strictly increasing");
    }
    const Spectrum eig = equilibrium_spectrum(label, alpha, theta, sigmas[i]).eigenvalues;
    out.push_back(out.empty() ? eig : continue_from(out.back(), eig));
  }
  return out;
}

SigmaCResult find_sigma_c(double alpha, double theta, const SigmaCOptions& opts) {
  check_model(alpha, theta, 0.0);
  if (!(theta < alpha + 2.0)) throw ValidationError("find_sigma_c requires theta < alpha + 2");
  if (opts.label != "s1" && opts.label != "s2") {
    throw ValidationError("find_sigma_c tracks s1 or s2");
  }
  if (!(opts.lo > 0.0 && opts.lo < opts.hi && 3.0 * opts.hi * opts.hi <= 1.0)) {
    throw ValidationError("sigma bracket must satisfy 0 < lo < hi <= 1/sqrt(3)");
  }
  if (opts.scan_points < 2) throw ValidationError("scan_points must be >= 2");

  std::vector<double> grid(opts.scan_points);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = opts.lo + (opts.hi - opts.lo) * static_cast<double>(i) /
                            static_cast<double>(grid.size() - 1);
  }
  const auto tracked = track_eigenvalues(opts.label, alpha, theta, grid);
  SigmaCResult res;
  res.max_real_lo = max_real(tracked.front());
  res.max_real_hi = max_real(tracked.back());
  if (res.max_real_lo >= 0.0) return res;  // already unstable: no loss of stability to locate

  auto g = [&](double s) {
    return equilibrium_spectrum(opts.label, alpha, theta, s).max_real_part;
  };
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double gi = max_real(tracked[i]);
    if (gi < 0.0) continue;
    const double ga = max_real(tracked[i - 1]);
    std::uintmax_t iters = 200;
    const auto tol = [&](double a, double b) { return std::abs(b - a) <= opts.tol; };
    const auto [a, b] =
        boost::math::tools::toms748_solve(g, grid[i - 1], grid[i], ga, gi, tol, iters);
    res.excitable = true;
    res.sigma_c = 0.5 * (a + b);
    const Spectrum at = continue_from(
        tracked[i - 1], equilibrium_spectrum(opts.label, alpha, theta, res.sigma_c).eigenvalues);
    std::size_t k = 0;
    for (std::size_t j = 1; j < 3; ++j) {
      if (at[j].real() > at[k].real() ||
          (at[j].real() == at[k].real() && at[j].imag() > at[k].imag())) {
        k = j;
      }
    }
    res.crossing_eigenvalue = at[k];
    return res;
  }
  return res;
}

double s5_stability_threshold(double alpha, double theta) {
  check_model(alpha, theta, 0.0);
  const double d = alpha - theta;
  const double radicand = (2.0 / 3.0) * d * (d - 1.0);
  if (!(theta > alpha + 2.0) || !(radicand > 0.0)) {
    throw ValidationError("s5 threshold requires theta > alpha + 2");
  }
  return std::sqrt(radicand);
}

void gauss_step(GaussState& s, double& z, double alpha, double theta, double sigma, double dt,
                double dB) {
  const double drift_z = (1.0 - 3.0 * s.m * s.m - 3.0 * sigma * sigma * s.V) * z;
  auto f = [&](const GaussState& p) { return field_unchecked(p, alpha, theta, sigma); };
  auto add = [](const GaussState& p, const GaussVelocity& v, double h) {
    return GaussState{p.m + h * v.dm, p.nu + h * v.dnu, p.V + h * v.dV};
  };
  const GaussVelocity k1 = f(s);
  const GaussVelocity k2 = f(add(s, k1, 0.5 * dt));
  const GaussVelocity k3 = f(add(s, k2, 0.5 * dt));
  const GaussVelocity k4 = f(add(s, k3, dt));
  s.m += dt / 6.0 * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm);
  s.nu += dt / 6.0 * (k1.dnu + 2.0 * k2.dnu + 2.0 * k3.dnu + k4.dnu);
  s.V += dt / 6.0 * (k1.dV + 2.0 * k2.dV + 2.0 * k3.dV + k4.dV);
  z += drift_z * dt + dB;
}

GaussPath simulate_gauss_path(const GaussState& init, const ModelParams& params,
                              std::span<const double> increments) {
  validate(params);
  if (!std::isfinite(init.m) || !std::isfinite(init.nu) || !std::isfinite(init.V)) {
    throw ValidationError("initial state must be finite");
  }
  if (!(init.V >= 0.0)) throw ValidationError("V must be >= 0");
  const std::size_t steps = params.n_steps();
  if (increments.size() < steps) {
    throw ValidationError("need one Brownian increment per step");
  }
  GaussPath out;
  out.meta = params;
  GaussState s = init;
  double z = 0.0;
  auto record = [&](double t) {
    out.push(t, GaussSample{s.m, s.nu, s.V, z, s.m + params.sigma * z});
  };
  record(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    gauss_step(s, z, params.alpha, params.theta, params.sigma, params.dt, increments[k - 1]);
    const double t = static_cast<double>(k) * params.dt;
    check_guard(s, z, params.divergence_guard, t);
    if (k % params.record_stride == 0 || k == steps) record(t);
  }
  return out;
}

GaussPath simulate_gauss_path(const GaussState& init, const ModelParams& params,
                              const RngStream& stream) {
  validate(params);
  const std::size_t steps = params.n_steps();
  std::vector<double> inc(steps);
  NormalCursor cursor(stream);
  const double sq = std::sqrt(params.dt);
  for (std::size_t k = 0; k < steps; ++k) inc[k] = sq * cursor.at(k);
  return simulate_gauss_path(init, params, inc);
}

MomentDefects moment_residual(const GaussPath& path) {
  const ModelParams& p = path.meta;
  if (p.record_stride != 1) throw ValidationError("moment_residual needs a stride-1 path");
  if (path.size() < 2) throw ValidationError("path too short");
  const double s2 = p.sigma * p.sigma;
  struct Moments {
    double m1, m2, m3, m4, nu;
  };
  auto moments = [&](const GaussSample& g) {
    const double m = g.m;
    const double w = s2 * g.V;
    return Moments{m, m * m + w, m * m * m + 3.0 * m * w,
                   m * m * m * m + 6.0 * m * m * w + 3.0 * w * w, g.nu};
  };
  MomentDefects d;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double h = path.times[k + 1] - path.times[k];
    const Moments a = moments(path.records[k]);
    const Moments b = moments(path.records[k + 1]);
    const double dm1 = (b.m1 - a.m1) / h;
    const double dm2 = (b.m2 - a.m2) / h;
    const double dnu = (b.nu - a.nu) / h;
    const double line1 = dm1 - (-a.m3 + a.m1 - a.nu);
    const double line_nu = dnu - (-(p.alpha - p.theta) * a.nu - p.theta * (-a.m3 + a.m1));
    const double line2 = dm2 - (-2.0 * a.m4 + 2.0 * a.m2 + s2 - 2.0 * a.nu * a.m1);
    d.k1 = std::max({d.k1, std::abs(line1), std::abs(line_nu)});
    d.k2 = std::max(d.k2, std::abs(line2));
  }
  return d;
}

double closure_remainder(const GaussSample& s, double sigma) {
  return 3.0 * s.m * (s.z * s.z - s.V) + sigma * (s.z * s.z * s.z - 3.0 * s.V * s.z);
}

}  // namespace meanfield
