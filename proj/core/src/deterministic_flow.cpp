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

#include "meanfield/deterministic_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "meanfield/error.hpp"

namespace meanfield {

namespace {

void check_rates(double alpha, double theta) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!std::isfinite(theta) || !(theta >= 0.0)) throw ValidationError("theta must be >= 0");
}

void check_step(double dt) {
  if (!std::isfinite(dt) || !(dt > 0.0)) throw ValidationError("dt must be > 0");
}

std::string point_str(const MacroState& s) {
  std::ostringstream os;
  os << "(" << s.x << ", " << s.mu << ")";
  return os.str();
}

// Winding number of the closed polygon `pts` around p.
int winding_number(const std::vector<MacroState>& pts, const MacroState& p) {
  int wn = 0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const MacroState& a = pts[i];
    const MacroState& b = pts[(i + 1) % n];
    const double cross = (b.x - a.x) * (p.mu - a.mu) - (p.x - a.x) * (b.mu - a.mu);
    if (a.mu <= p.mu) {
      if (b.mu > p.mu && cross > 0.0) ++wn;
    } else {
      if (b.mu <= p.mu && cross < 0.0) --wn;
    }
  }
  return wn;
}

// Cubic Hermite interpolation on one step, tau in [0, 1].
struct Hermite {
  MacroState p0, p1;
  MacroVelocity d0, d1;  // derivatives with respect to elapsed time
  double h = 0.0;

  [[nodiscard]] MacroState at(double tau) const {
    const double t2 = tau * tau;
    const double t3 = t2 * tau;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + tau;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return {h00 * p0.x + h10 * h * d0.dx + h01 * p1.x + h11 * h * d1.dx,
            h00 * p0.mu + h10 * h * d0.dmu + h01 * p1.mu + h11 * h * d1.dmu};
  }
};

MacroVelocity signed_field(const MacroState& s, double alpha, double theta, double sign) {
  const MacroVelocity v = vector_field(s, alpha, theta);
  return {sign * v.dx, sign * v.dmu};
}

std::vector<MacroState> downsample(const std::vector<MacroState>& pts, std::size_t cap) {
  if (pts.size() <= cap) return pts;
  std::vector<MacroState> out;
  out.reserve(cap);
  const double stride = static_cast<double>(pts.size() - 1) / static_cast<double>(cap - 1);
  for (std::size_t i = 0; i < cap; ++i) {
    out.push_back(pts[static_cast<std::size_t>(std::llround(stride * static_cast<double>(i)))]);
  }
  return out;
}

}  // namespace

MacroVelocity vector_field(const MacroState& s, double alpha, double theta) {
  // dmu = -alpha mu - theta dx, the same composition as the closure's nu line.
  const double dx = -s.x * s.x * s.x + s.x - s.mu;
  return {dx, -alpha * s.mu - theta * dx};
}

std::string_view to_string(StabilityTag tag) {
  switch (tag) {
    case StabilityTag::kSaddle: return "saddle";
    case StabilityTag::kStable: return "stable";
    case StabilityTag::kUnstable: return "unstable";
    case StabilityTag::kCenterLike: return "center-like";
  }
  return "unknown";
}

Linearization jacobian2(const MacroState& s, double alpha, double theta) {
  Linearization lin;
  const double a = 1.0 - 3.0 * s.x * s.x;
  lin.matrix = {{{a, -1.0}, {-theta * a, -(alpha - theta)}}};
  lin.trace = a - (alpha - theta);
  lin.det = lin.matrix[0][0] * lin.matrix[1][1] - lin.matrix[0][1] * lin.matrix[1][0];
  const double half = 0.5 * lin.trace;
  const double disc = half * half - lin.det;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    // Avoid cancellation in the smaller root.
    const double big = half >= 0.0 ? half + r : half - r;
    const double small = big != 0.0 ? lin.det / big : 0.0;
    lin.eigenvalues = {std::complex<double>(std::max(big, small), 0.0),
                       std::complex<double>(std::min(big, small), 0.0)};
  } else {
    const double im = std::sqrt(-disc);
    lin.eigenvalues = {std::complex<double>(half, im), std::complex<double>(half, -im)};
  }
  if (lin.det < 0.0) {
    lin.tag = StabilityTag::kSaddle;
  } else if (lin.trace < 0.0) {
    lin.tag = StabilityTag::kStable;
  } else if (lin.trace > 0.0) {
    lin.tag = StabilityTag::kUnstable;
  } else {
    lin.tag = StabilityTag::kCenterLike;
  }
  return lin;
}

MacroState rk4_step(const MacroState& s, double alpha, double theta, double h) {
  const MacroVelocity k1 = vector_field(s, alpha, theta);
  const MacroVelocity k2 =
      vector_field({s.x + 0.5 * h * k1.dx, s.mu + 0.5 * h * k1.dmu}, alpha, theta);
  const MacroVelocity k3 =
      vector_field({s.x + 0.5 * h * k2.dx, s.mu + 0.5 * h * k2.dmu}, alpha, theta);
  const MacroVelocity k4 = vector_field({s.x + h * k3.dx, s.mu + h * k3.dmu}, alpha, theta);
  return {s.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          s.mu + h / 6.0 * (k1.dmu + 2.0 * k2.dmu + 2.0 * k3.dmu + k4.dmu)};
}

Trajectory<MacroState> integrate(const MacroState& init, double alpha, double theta,
                                 double t_end, double dt, const IntegrateOptions& opts) {
  check_rates(alpha, theta);
  check_step(dt);
  if (!std::isfinite(t_end) || !(t_end >= dt)) throw ValidationError("t_end must be >= dt");
  if (!std::isfinite(init.x) || !std::isfinite(init.mu)) {
    throw ValidationError("initial state must be finite");
  }
  if (opts.stride < 1) throw ValidationError("stride must be >= 1");

  Trajectory<MacroState> out;
  out.meta.alpha = alpha;
  out.meta.theta = theta;
  out.meta.sigma = 0.0;
  out.meta.dt = dt;
  out.meta.t_end = t_end;
  out.meta.record_stride = opts.stride;
  out.meta.divergence_guard = opts.guard;

  const double h = opts.backward ? -dt : dt;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  MacroState s = init;
  out.push(0.0, s);
  for (std::size_t k = 1; k <= steps; ++k) {
    s = rk4_step(s, alpha, theta, h);
    if (!(std::abs(s.x) <= opts.guard) || !(std::abs(s.mu) <= opts.guard)) {
      std::ostringstream os;
      os << "RK4 integration left the guard box at t=" << static_cast<double>(k) * dt
         << (opts.backward ? " (backward time)" : "") << "; reduce dt";
      throw NumericalError(os.str());
    }
    if (k % opts.stride == 0 || k == steps) out.push(static_cast<double>(k) * dt, s);
  }
  return out;
}

LyapunovValue lyapunov_W(const MacroState& s, double alpha, double theta) {
  if (!(theta > 0.0)) throw ValidationError("W is undefined for theta = 0");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  const double u = theta * s.x + s.mu;
  const double x2 = s.x * s.x;
  return {0.5 * x2 + u * u / (2.0 * alpha * theta), -x2 * x2 + (1.0 + theta) * x2 - u * u / theta};
}

AttractorVerdict detect_attractor(const MacroState& init, double alpha, double theta,
                                  const CycleOptions& opts) {
  check_rates(alpha, theta);
  check_step(opts.dt);
  if (!std::isfinite(init.x) || !std::isfinite(init.mu)) {
    throw ValidationError("initial state must be finite");
  }
  const double sign = opts.backward ? -1.0 : 1.0;
  const double h = sign * opts.dt;
  const auto max_steps = static_cast<std::uint64_t>(std::ceil(opts.max_horizon / opts.dt));

  struct Crossing {
    double t;
    double x;
  };
  std::vector<Crossing> crossings;
  std::vector<MacroState> lap;       // samples since the previous crossing
  std::vector<MacroState> last_lap;  // one full lap between the last two crossings

  MacroState s = init;
  AttractorVerdict verdict;
  for (std::uint64_t k = 1; k <= max_steps; ++k) {
    const MacroState prev = s;
    s = rk4_step(s, alpha, theta, h);
    const double t = static_cast<double>(k) * opts.dt;
    if (!(std::abs(s.x) <= opts.guard) || !(std::abs(s.mu) <= opts.guard)) {
      std::ostringstream os;
      os << "flow from " << point_str(init) << " left the guard box at t=" << t
         << (opts.backward ? " in backward time" : "");
      throw NumericalError(os.str());
    }
    for (int e = 0; e < 3; ++e) {
      const MacroState& q = kMacroEquilibria[static_cast<std::size_t>(e)];
      if (std::hypot(s.x - q.x, s.mu - q.mu) < opts.equilibrium_tol) {
        verdict.equilibrium = e;
        verdict.elapsed = t;
        return verdict;
      }
    }
    if (t < opts.transient) continue;
    lap.push_back(s);
    if (!(prev.mu < 0.0 && s.mu >= 0.0)) continue;

    Hermite herm{prev, s, signed_field(prev, alpha, theta, sign),
                 signed_field(s, alpha, theta, sign), opts.dt};
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (herm.at(mid).mu < 0.0 ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    const MacroState cross = {herm.at(tau).x, 0.0};
    crossings.push_back({t - opts.dt + tau * opts.dt, cross.x});
    last_lap = std::move(lap);
    lap.clear();
    lap.push_back(cross);
    if (crossings.size() < 3) continue;

    const std::size_t n = crossings.size();
    const double d1 = crossings[n - 1].x - crossings[n - 2].x;
    const double d0 = crossings[n - 2].x - crossings[n - 3].x;
    if (!(std::abs(d1) < opts.cycle_tol)) continue;
    double remaining = 0.0;
    if (d0 != 0.0) {
      const double q = std::abs(d1 / d0);
      remaining = q < 1.0 ? std::abs(d1) * q / (1.0 - q) : std::numeric_limits<double>::infinity();
    }
    if (!(remaining < opts.cycle_tol)) continue;
    bool near_equilibrium = false;
    for (const MacroState& q : kMacroEquilibria) {
      if (std::hypot(cross.x - q.x, q.mu) < opts.min_equilibrium_separation) {
        near_equilibrium = true;
      }
    }
    if (near_equilibrium) continue;

    CycleRecord rec;
    const std::size_t intervals = std::min<std::size_t>(3, n - 1);
    rec.period = (crossings[n - 1].t - crossings[n - 1 - intervals].t) /
                 static_cast<double>(intervals);
    rec.section_point = cross;
    rec.stable = !opts.backward;
    last_lap.push_back(cross);
    double xmin = cross.x;
    double xmax = cross.x;
    for (const MacroState& p : last_lap) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
    }
    rec.amplitude = xmax - xmin;
    if (!(rec.amplitude > opts.min_equilibrium_separation)) continue;
    for (std::size_t e = 0; e < 3; ++e) {
      rec.surrounds[e] = winding_number(last_lap, kMacroEquilibria[e]) != 0;
    }
    rec.orbit = downsample(last_lap, 2048);
    verdict.cycle = std::move(rec);
    verdict.elapsed = t;
    return verdict;
  }
  std::ostringstream os;
  os << "no equilibrium or cycle reached from " << point_str(init) << " within horizon "
     << opts.max_horizon << " (alpha=" << alpha << ", theta=" << theta
     << "); likely too close to a bifurcation threshold";
  throw InconclusiveError(os.str());
}

std::optional<CycleRecord> detect_limit_cycle(const MacroState& init, double alpha,
                                              double theta, const CycleOptions& opts) {
  return detect_attractor(init, alpha, theta, opts).cycle;
}

double find_theta1(double alpha, double tol, const Theta1Options& opts) {
  check_rates(alpha, 0.0);
  if (!std::isfinite(tol) || !(tol > 0.0)) throw ValidationError("tol must be > 0");
  auto has_cycle = [&](double theta) {
    return detect_attractor(opts.probe, alpha, theta, opts.cycle).cycle.has_value();
  };
  double lo = 0.0;
  double hi = alpha + 2.0;
  const bool at_lo = has_cycle(lo);
  const bool at_hi = has_cycle(hi);
  if (at_lo || !at_hi) {
    std::ostringstream os;
    os << "cycle indicator is (" << at_lo << ", " << at_hi
       << ") on the bracket (0, alpha+2), expected (0, 1); integrator tolerance too loose";
    throw NumericalError(os.str());
  }
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    (has_cycle(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kFixedPoints: return "FixedPoints";
    case Phase::kCoexistence: return "Coexistence";
    case Phase::kPeriodicOrbit: return "PeriodicOrbit";
  }
  return "unknown";
}

std::vector<MacroState> default_initial_grid() {
  const std::array<double, 5> xs{-2.55, -1.3, 0.05, 1.35, 2.6};
  const std::array<double, 5> mus{-2.45, -1.2, 0.1, 1.4, 2.65};
  std::vector<MacroState> grid;
  grid.reserve(25);
  for (double x : xs) {
    for (double mu : mus) grid.push_back({x, mu});
  }
  return grid;
}

PhaseReport classify_phase(double alpha, double theta, const PhaseOptions& opts) {
  check_rates(alpha, theta);
  PhaseReport rep;
  rep.alpha = alpha;
  rep.theta = theta;
  rep.hopf = alpha + 2.0;
  if (opts.theta1) {
    rep.theta1 = *opts.theta1;
  } else {
    Theta1Options t1;
    t1.cycle = opts.cycle;
    rep.theta1 = find_theta1(alpha, opts.theta1_tol, t1);
  }
  if (!(rep.theta1 > 0.0 && rep.theta1 < rep.hopf)) {
    throw ValidationError("theta1 must lie in (0, alpha+2)");
  }
  if (theta < rep.theta1) {
    rep.phase = Phase::kFixedPoints;
  } else if (theta < rep.hopf) {
    rep.phase = Phase::kCoexistence;
  } else {
    rep.phase = Phase::kPeriodicOrbit;
  }

  auto mismatch = [&](std::string msg) {
    rep.verified = false;
    rep.mismatches.push_back(std::move(msg));
  };
  auto add_cycle = [&](const CycleRecord& c) {
    for (const CycleRecord& known : rep.cycles) {
      if (known.stable == c.stable &&
          std::abs(known.period - c.period) <= 1e-4 * known.period &&
          std::abs(known.section_point.x - c.section_point.x) <= 1e-4) {
        return;
      }
    }
    rep.cycles.push_back(c);
  };

  const std::vector<MacroState> grid = opts.grid.empty() ? default_initial_grid() : opts.grid;
  for (const MacroState& p : grid) {
    AttractorVerdict v;
    try {
      v = detect_attractor(p, alpha, theta, opts.cycle);
    } catch (const InconclusiveError& e) {
      mismatch(std::string("inconclusive: ") + e.what());
      continue;
    }
    if (v.cycle) {
      if (rep.phase == Phase::kFixedPoints) {
        mismatch("cycle reached from " + point_str(p) + " below theta1");
      } else if (!v.cycle->surrounds_both_wells()) {
        mismatch("attracting cycle from " + point_str(p) + " does not surround both wells");
      }
      add_cycle(*v.cycle);
    } else {
      const int e = *v.equilibrium;
      if (rep.phase == Phase::kPeriodicOrbit) {
        mismatch("equilibrium " + point_str(kMacroEquilibria[static_cast<std::size_t>(e)]) +
                 " reached from " + point_str(p) + " above alpha+2");
      } else if (e == 1) {
        mismatch("saddle reached from " + point_str(p));
      }
    }
  }

  if (rep.phase != Phase::kFixedPoints) {
    const MacroState probe{3.0, 0.0};
    try {
      const auto outer = detect_limit_cycle(probe, alpha, theta, opts.cycle);
      if (!outer || !outer->surrounds_both_wells()) {
        mismatch("no outer cycle surrounding both wells from " + point_str(probe));
      } else {
        add_cycle(*outer);
      }
    } catch (const InconclusiveError& e) {
      mismatch(std::string("inconclusive: ") + e.what());
    }
  }

  if (rep.phase == Phase::kCoexistence) {
    CycleOptions back = opts.cycle;
    back.backward = true;
    for (double side : {-1.0, 1.0}) {
      const MacroState start{side * (1.0 + opts.inner_probe_offset), 0.0};
      const std::size_t well = side < 0.0 ? 0 : 2;
      try {
        const auto inner = detect_limit_cycle(start, alpha, theta, back);
        if (!inner || !inner->surrounds[well] || inner->surrounds[2 - well] ||
            inner->surrounds[1]) {
          mismatch("no unstable inner cycle around " + point_str(kMacroEquilibria[well]));
        } else {
          add_cycle(*inner);
        }
      } catch (const std::runtime_error& e) {
        mismatch(std::string("inner cycle search failed: ") + e.what());
      }
    }
  }

  std::stable_sort(rep.cycles.begin(), rep.cycles.end(),
                   [](const CycleRecord& a, const CycleRecord& b) {
                     return a.amplitude > b.amplitude;
                   });
  return rep;
}

}  // namespace meanfield
