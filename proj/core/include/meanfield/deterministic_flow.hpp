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

#ifndef MEANFIELD_DETERMINISTIC_FLOW_HPP
#define MEANFIELD_DETERMINISTIC_FLOW_HPP

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meanfield/params.hpp"

namespace meanfield {

/// Point (x, mu) of the noiseless macroscopic flow.
struct MacroState {
  double x = 0.0;
  double mu = 0.0;

  friend bool operator==(const MacroState&, const MacroState&) = default;
};

/// Time derivative (dx/dt, dmu/dt).
struct MacroVelocity {
  double dx = 0.0;
  double dmu = 0.0;
};

/// The three equilibria (-1,0), (0,0), (1,0), in that order.
inline constexpr std::array<MacroState, 3> kMacroEquilibria{
    MacroState{-1.0, 0.0}, MacroState{0.0, 0.0}, MacroState{1.0, 0.0}};

MacroVelocity vector_field(const MacroState& s, double alpha, double theta);

enum class StabilityTag { kSaddle, kStable, kUnstable, kCenterLike };
std::string_view to_string(StabilityTag tag);

struct Linearization {
  std::array<std::array<double, 2>, 2> matrix{};
  double trace = 0.0;
  double det = 0.0;
  std::array<std::complex<double>, 2> eigenvalues{};
  StabilityTag tag = StabilityTag::kSaddle;
};

/// Jacobian [[-3x^2+1, -1], [theta(3x^2-1), -(alpha-theta)]], its eigenvalues
/// from the quadratic formula and a stability tag.
Linearization jacobian2(const MacroState& s, double alpha, double theta);

/// One classical RK4 step of size h (negative h integrates backward).
MacroState rk4_step(const MacroState& s, double alpha, double theta, double h);

struct IntegrateOptions {
  std::size_t stride = 1;     ///< record every `stride` steps (plus the last)
  bool backward = false;      ///< integrate the time-reversed field
  double guard = 1e6;
};

/// RK4 trajectory of (x, mu) on [0, t_end]. Recorded times are the elapsed
/// integration time, so they increase in both directions.
Trajectory<MacroState> integrate(const MacroState& init, double alpha, double theta,
                                 double t_end, double dt,
                                 const IntegrateOptions& opts = {});

struct LyapunovValue {
  double value = 0.0;
  double derivative = 0.0;  ///< dW/dt along the flow
};

/// W(x,mu) = x^2/2 + (theta x + mu)^2 / (2 alpha theta) and its total
/// derivative. Requires theta > 0.
LyapunovValue lyapunov_W(const MacroState& s, double alpha, double theta);

/// A periodic orbit found on the section {mu = 0} crossed with mu increasing
/// in integration time.
struct CycleRecord {
  double period = 0.0;
  MacroState section_point{};
  double amplitude = 0.0;  ///< max x - min x over one period
  bool stable = true;      ///< false when found in backward time
  /// Flags for (-1,0), (0,0), (1,0) in kMacroEquilibria order.
  std::array<bool, 3> surrounds{};
  /// Orbit samples over the final period, used for plots and symmetry checks.
  std::vector<MacroState> orbit;

  [[nodiscard]] bool surrounds_both_wells() const { return surrounds[0] && surrounds[2]; }
};

struct CycleOptions {
  double dt = 1e-3;
  double transient = 100.0;
  double equilibrium_tol = 1e-8;
  double cycle_tol = 1e-6;
  double max_horizon = 1e4;
  /// A converged section point closer than this to an equilibrium is a
  /// spiral into that equilibrium, not a cycle.
  double min_equilibrium_separation = 1e-3;
  bool backward = false;
  double guard = 1e6;
};

/// Outcome of following one initial condition: either an equilibrium
/// (index into kMacroEquilibria) or a cycle.
struct AttractorVerdict {
  std::optional<int> equilibrium;
  std::optional<CycleRecord> cycle;
  double elapsed = 0.0;
};

/// Follows the flow until it settles on an equilibrium or a cycle. Throws
/// InconclusiveError when neither happens within max_horizon, and
/// NumericalError when the state leaves the guard box.
AttractorVerdict detect_attractor(const MacroState& init, double alpha, double theta,
                                  const CycleOptions& opts = {});

/// The cycle reached from `init`, or nullopt when the flow converges to an
/// equilibrium.
std::optional<CycleRecord> detect_limit_cycle(const MacroState& init, double alpha,
                                              double theta, const CycleOptions& opts = {});

struct Theta1Options {
  CycleOptions cycle{};
  MacroState probe{3.0, 0.0};  ///< far-outside initial point
};

/// Homoclinic threshold: bisection on theta in (0, alpha+2) of "a cycle is
/// reached from the probe point". Returns the bracket midpoint once the
/// bracket is narrower than tol. Throws NumericalError when the indicator is
/// not (false, true) on the initial bracket.
double find_theta1(double alpha, double tol, const Theta1Options& opts = {});

enum class Phase { kFixedPoints, kCoexistence, kPeriodicOrbit };
std::string_view to_string(Phase phase);

struct PhaseOptions {
  std::optional<double> theta1;  ///< skip the bisection when known
  double theta1_tol = 1e-3;
  CycleOptions cycle{};
  std::vector<MacroState> grid;  ///< empty: default 5x5 grid
  /// Offset from (+-1, 0) where backward integration looks for inner cycles.
  double inner_probe_offset = 1e-2;
};

struct PhaseReport {
  double alpha = 0.0;
  double theta = 0.0;
  double theta1 = 0.0;
  double hopf = 0.0;  ///< alpha + 2
  Phase phase = Phase::kFixedPoints;
  std::vector<CycleRecord> cycles;  ///< distinct cycles, outer first
  bool verified = true;
  std::vector<std::string> mismatches;
};

/// 5x5 grid of initial conditions on [-2.6, 2.6] x [-2.5, 2.7], offset so
/// that no point sits on an equilibrium or a symmetry axis.
std::vector<MacroState> default_initial_grid();

/// Analytic phase of (alpha, theta) plus an empirical check of the
/// attractor set from a grid of initial conditions. Disagreements are listed
/// in `mismatches` and clear `verified`.
PhaseReport classify_phase(double alpha, double theta, const PhaseOptions& opts = {});

}  // namespace meanfield

#endif  // MEANFIELD_DETERMINISTIC_FLOW_HPP
