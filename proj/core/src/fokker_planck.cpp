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

#include "meanfield/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "meanfield/error.hpp"

namespace meanfield {

namespace {

void check_grid(const GridSpec& g) {
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.lo < 0.0 && 0.0 < g.hi)) {
    throw ValidationError("grid bounds must satisfy lo < 0 < hi");
  }
  if (g.n_cells < 2) throw ValidationError("n_cells must be >= 2");
}

double drift(double x, double mu) { return -x * x * x + x - mu; }

// Bernoulli function w / (e^w - 1).
double bernoulli(double w) {
  if (w == 0.0) return 1.0;
  return w / std::expm1(w);
}

double log_profile(double x, double inv_s2) { return (-0.5 * x * x * x * x + x * x) * inv_s2; }

// Recursive adaptive Simpson with Richardson correction.
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson over [a, b] split into `pieces` panels so narrow peaks are
// seen by the initial sampling. `abs_tol` is shared out by panel width.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int pieces) {
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + w * i;
    const double hi = i + 1 == pieces ? b : lo + w;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += simpson_rec(f, lo, hi, flo, fm, fhi, whole, abs_tol / pieces, 50);
  }
  return total;
}

// Sum of g(i) + g(n-1-i) over mirror pairs, then the middle cell.
template <class G>
double mirror_sum(std::size_t n, G g) {
  double s = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) s += g(i) + g(n - 1 - i);
  if (n % 2 == 1) s += g(n / 2);
  return s;
}

// Solves a tridiagonal system by eliminating from both ends toward the
// middle, so mirror-symmetric systems give mirror-symmetric solutions
// bit for bit.
void solve_twisted(const std::vector<double>& sub, const std::vector<double>& diag,
                   const std::vector<double>& sup, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0);  // top sweep: x_i = g_i - c_i x_{i+1}
  std::vector<double> g(n, 0.0);
  std::vector<double> e(n, 0.0);  // bottom sweep: x_i = h_i - e_i x_{i-1}
  std::vector<double> hh(n, 0.0);
  const std::size_t top_end = n / 2 - (n % 2 == 0 ? 1 : 0);  // rows [0, top_end)
  const std::size_t bottom_begin = n - top_end;              // rows [bottom_begin, n)
  for (std::size_t i = 0; i < top_end; ++i) {
    const double denom = i == 0 ? diag[i] : diag[i] - sub[i] * c[i - 1];
    c[i] = sup[i] / denom;
    g[i] = (i == 0 ? rhs[i] : rhs[i] - sub[i] * g[i - 1]) / denom;
  }
  for (std::size_t j = 0; j < top_end; ++j) {
    const std::size_t i = n - 1 - j;
    const double denom = j == 0 ? diag[i] : diag[i] - sup[i] * e[i + 1];
    e[i] = sub[i] / denom;
    hh[i] = (j == 0 ? rhs[i] : rhs[i] - sup[i] * hh[i + 1]) / denom;
  }
  std::vector<double> x(n);
  if (n % 2 == 0) {
    const std::size_t p = n / 2 - 1;  // central rows p, p+1
    double a11 = diag[p];
    double b1 = rhs[p];
    if (p > 0) {
      a11 = diag[p] - sub[p] * c[p - 1];
      b1 = rhs[p] - sub[p] * g[p - 1];
    }
    double a22 = diag[p + 1];
    double b2 = rhs[p + 1];
    if (p + 2 < n) {
      a22 = diag[p + 1] - sup[p + 1] * e[p + 2];
      b2 = rhs[p + 1] - sup[p + 1] * hh[p + 2];
    }
    const double a12 = sup[p];
    const double a21 = sub[p + 1];
    const double det = a11 * a22 - a12 * a21;
    x[p] = (b1 * a22 - a12 * b2) / det;
    x[p + 1] = (a11 * b2 - a21 * b1) / det;
  } else {
    const std::size_t p = n / 2;
    double d = diag[p];
    double b = rhs[p];
    if (p > 0) {
      d = d - (sub[p] * c[p - 1] + sup[p] * e[p + 1]);
      b = b - (sub[p] * g[p - 1] + sup[p] * hh[p + 1]);
    }
    x[p] = b / d;
  }
  for (std::size_t j = top_end; j-- > 0;) x[j] = g[j] - c[j] * x[j + 1];
  for (std::size_t i = bottom_begin; i < n; ++i) x[i] = hh[i] - e[i] * x[i - 1];
  rhs = std::move(x);
}

}  // namespace

double GridSpec::center(std::size_t i) const {
  const double h = width();
  if (symmetric()) {
    return (static_cast<double>(i) + 0.5 - 0.5 * static_cast<double>(n_cells)) * h;
  }
  return lo + (static_cast<double>(i) + 0.5) * h;
}

double GridSpec::interface(std::size_t k) const {
  const double h = width();
  if (symmetric()) return (static_cast<double>(k) - 0.5 * static_cast<double>(n_cells)) * h;
  return lo + static_cast<double>(k) * h;
}

void GridDensity::refresh_mass() { mass = grid.width() * pairwise_sum(q); }

void GridDensity::normalize() {
  refresh_mass();
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NumericalError("density has non-positive or non-finite mass");
  }
  const double inv = 1.0 / mass;
  for (double& v : q) v *= inv;
  refresh_mass();
}

StationaryDensity stationary_density(double sigma, const GridSpec& grid, double rel_tol) {
  check_grid(grid);
  if (!std::isfinite(sigma) || !(sigma > 0.0)) throw ValidationError("sigma must be > 0");
  if (grid.lo > -4.0 || grid.hi < 4.0) {
    throw ValidationError("stationary density needs lo <= -4 and hi >= 4");
  }
  if (!(rel_tol > 0.0)) throw ValidationError("rel_tol must be > 0");
  const double inv_s2 = 1.0 / (sigma * sigma);
  const double peak = 0.5 * inv_s2;  // max of the log profile, at x = +-1

  StationaryDensity out;
  out.density.grid = grid;
  out.density.q.resize(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    out.density.q[i] = std::exp(log_profile(grid.center(i), inv_s2) - peak);
  }
  out.density.normalize();

  // Integrate exp(phi - peak) over [0, R]; the profile is even.
  double r = 2.0;
  while (log_profile(r, inv_s2) - peak > -800.0) r *= 1.25;
  auto f = [&](double x) { return std::exp(log_profile(x, inv_s2) - peak); };
  const int pieces = std::max(16, static_cast<int>(std::ceil(8.0 * r / sigma)));
  // Crude scale for the absolute tolerance: the peak width times its height.
  const double rough = std::min(r, 3.0 * sigma + 1.0);
  const double half = adaptive_simpson(f, 0.0, r, rel_tol * 0.1 * rough, pieces);
  out.log_z = peak + std::log(2.0 * half);
  out.z_star = std::exp(out.log_z);

  const double edge = std::min(-grid.lo, grid.hi);
  if (edge < r) {
    const double tail = adaptive_simpson(f, edge, r, rel_tol * 1e-3 * half, 64);
    out.tail_mass = tail / half;
  }
  if (out.tail_mass > 1e-10) {
    std::ostringstream os;
    os << "stationary mass outside the grid is about " << out.tail_mass << "; widen the domain";
    out.warning = os.str();
  }
  return out;
}

std::vector<double> fp_operator(const GridDensity& d, double mu, double sigma) {
  check_grid(d.grid);
  const std::size_t n = d.grid.n_cells;
  if (d.q.size() != n) throw ValidationError("density size does not match the grid");
  const double h = d.grid.width();
  const double diff = 0.5 * sigma * sigma;
  if (!(diff > 0.0)) throw ValidationError("sigma must be > 0");
  std::vector<double> flux(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double a = drift(d.grid.interface(k), mu);
    const double w = a * h / diff;
    flux[k] = diff / h * (bernoulli(-w) * d.q[k - 1] - bernoulli(w) * d.q[k]);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = -(flux[i + 1] - flux[i]) / h;
  return out;
}

double stationary_residual(double sigma, const GridSpec& grid, double mu) {
  const StationaryDensity st = stationary_density(sigma, grid);
  const std::vector<double> r = fp_operator(st.density, mu, sigma);
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

double drift_pairing(const GridDensity& d) {
  const double h = d.grid.width();
  return h * mirror_sum(d.q.size(), [&](std::size_t i) {
           const double x = d.grid.center(i);
           return (-x * x * x + x) * d.q[i];
         });
}

double grid_moment(const GridDensity& d, int k) {
  const double h = d.grid.width();
  return h * mirror_sum(d.q.size(), [&](std::size_t i) {
           return std::pow(d.grid.center(i), k) * d.q[i];
         });
}

double l1_distance(const GridDensity& p, const GridDensity& q) {
  if (p.q.size() != q.q.size()) throw ValidationError("densities live on different grids");
  std::vector<double> diff(p.q.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(p.q[i] - q.q[i]);
  return p.grid.width() * pairwise_sum(diff);
}

GridDensity reflect(const GridDensity& d) {
  if (!d.grid.symmetric()) throw ValidationError("reflection needs a symmetric grid");
  GridDensity out = d;
  std::reverse(out.q.begin(), out.q.end());
  out.refresh_mass();
  return out;
}

GridDensity normal_density(const GridSpec& grid, double mean, double sd) {
  check_grid(grid);
  if (!(sd > 0.0)) throw ValidationError("sd must be > 0");
  GridDensity d;
  d.grid = grid;
  d.q.resize(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double u = (grid.center(i) - mean) / sd;
    d.q[i] = std::exp(-0.5 * u * u);
  }
  d.normalize();
  return d;
}

double max_stable_dt(const GridSpec& grid, double mu) {
  check_grid(grid);
  const std::size_t n = grid.n_cells;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? std::max(drift(grid.interface(i + 1), mu), 0.0) : 0.0;
    const double left = i > 0 ? -std::min(drift(grid.interface(i), mu), 0.0) : 0.0;
    worst = std::max(worst, right + left);
  }
  return worst > 0.0 ? grid.width() / worst : std::numeric_limits<double>::infinity();
}

void fp_step(FpState& state, const ModelParams& p) {
  GridDensity& d = state.density;
  const std::size_t n = d.grid.n_cells;
  const double h = d.grid.width();
  const double dt = p.dt;
  const double diff = 0.5 * p.sigma * p.sigma;
  const double mu = state.mu;

  std::vector<double> adv(n + 1, 0.0);
  std::vector<double> kappa(n + 1, 0.0);  // dt * D * B(|w|) / h^2 per interface
  double worst = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double a = drift(d.grid.interface(k), mu);
    const double ap = std::max(a, 0.0);
    const double am = std::min(a, 0.0);
    adv[k] = ap * d.q[k - 1] + am * d.q[k];
    kappa[k] = dt * diff * bernoulli(std::abs(a) * h / diff) / (h * h);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? std::max(drift(d.grid.interface(i + 1), mu), 0.0) : 0.0;
    const double left = i > 0 ? -std::min(drift(d.grid.interface(i), mu), 0.0) : 0.0;
    worst = std::max(worst, right + left);
  }
  if (dt * worst / h > 1.0) {
    std::ostringstream os;
    os << "drift CFL bound violated at t=" << state.t << ": dt*max|A|/h = " << dt * worst / h
       << " > 1; use dt <= " << h / worst << " or a coarser/shorter domain";
    throw NumericalError(os.str());
  }

  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = d.q[i] - dt / h * (adv[i + 1] - adv[i]);
  std::vector<double> sub(n), diag(n), sup(n);
  for (std::size_t i = 0; i < n; ++i) {
    sub[i] = -kappa[i];
    sup[i] = -kappa[i + 1];
    diag[i] = 1.0 + (kappa[i] + kappa[i + 1]);
  }
  const double pairing = drift_pairing(d);
  solve_twisted(sub, diag, sup, rhs);
  for (double& v : rhs) v = std::max(v, 0.0);  // clears -0.0 and rounding-level negatives
  d.q = std::move(rhs);
  d.refresh_mass();

  state.mu = mu + dt * (-(p.alpha - p.theta) * mu - p.theta * pairing);
  state.t += dt;
  if (!std::isfinite(state.mu)) throw NumericalError("field value became non-finite");
}

FpRun evolve(const FpState& init, const ModelParams& params, double t_end,
             const FpOptions& opts) {
  validate(params);
  check_grid(init.density.grid);
  if (!(params.sigma > 0.0)) throw ValidationError("sigma must be > 0 for the Fokker-Planck solver");
  if (init.density.q.size() != init.density.grid.n_cells) {
    throw ValidationError("density size does not match the grid");
  }
  if (!(t_end >= params.dt)) throw ValidationError("t_end must be >= dt");
  for (double v : init.density.q) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("density must be finite and >= 0");
  }
  GridDensity check = init.density;
  check.refresh_mass();
  if (!(std::abs(check.mass - 1.0) < 1e-8)) {
    throw ValidationError("initial density must have unit mass");
  }

  const StationaryDensity target =
      init.density.grid.lo <= -4.0 && init.density.grid.hi >= 4.0
          ? stationary_density(params.sigma, init.density.grid)
          : StationaryDensity{};
  const bool has_target = !target.density.q.empty();

  FpRun run;
  run.summaries.meta = params;
  FpState s = init;
  s.t = 0.0;
  s.density.refresh_mass();
  auto summary = [&] {
    FpSummary out;
    out.mass = s.density.mass;
    out.mu = s.mu;
    out.m1 = grid_moment(s.density, 1);
    out.m2 = grid_moment(s.density, 2);
    out.l1_to_qstar = has_target ? l1_distance(s.density, target.density) : std::nan("");
    return out;
  };
  std::vector<double> dumps = opts.dump_times;
  std::sort(dumps.begin(), dumps.end());
  std::size_t next_dump = 0;
  auto maybe_dump = [&] {
    while (next_dump < dumps.size() && s.t >= dumps[next_dump] - 1e-12) {
      run.dumps.emplace_back(s.t, s.density);
      ++next_dump;
    }
  };

  run.summaries.push(0.0, summary());
  maybe_dump();
  const auto steps = static_cast<std::size_t>(std::llround(t_end / params.dt));
  for (std::size_t k = 1; k <= steps; ++k) {
    fp_step(s, params);
    s.t = static_cast<double>(k) * params.dt;
    if (k % params.record_stride == 0 || k == steps) run.summaries.push(s.t, summary());
    maybe_dump();
  }
  run.final_state = std::move(s);
  return run;
}

}  // namespace meanfield
