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

#ifndef MEANFIELD_PARTICLES_HPP
#define MEANFIELD_PARTICLES_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "meanfield/params.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

class WorkerPool;

/// N particle positions and the dissipative field coefficient mu.
struct ParticleState {
  std::vector<double> x;
  double mu = 0.0;
  double t = 0.0;
  std::uint64_t step = 0;  ///< steps taken so far; the draw index of the next step

  /// Empirical mean m^(N).
  [[nodiscard]] double mean() const;
};

/// Half of the particles at +1 and half at -1 (the extra one at +1 when N is
/// odd), field value mu0.
ParticleState split_state(std::size_t n, double mu0 = 0.0);

/// Which form of the field equation advances mu.
enum class FieldUpdate {
  /// d mu = -(alpha - theta) mu dt - theta/N sum(-x^3 + x) dt - theta sigma/N sum dw
  kExpanded,
  /// d mu = -alpha mu dt - theta dm, with dm from the realised particle increments
  kEmpiricalIncrement,
};

/// One Euler-Maruyama step with caller-supplied standard normals xi (one per
/// particle). The field update reuses the same xi. Throws DivergenceError
/// when a particle leaves [-guard, guard] or turns non-finite.
void advance_particles(ParticleState& state, const ModelParams& params,
                       std::span<const double> xi,
                       FieldUpdate form = FieldUpdate::kExpanded,
                       WorkerPool* pool = nullptr);

/// One step driven by the replica stream: particle i uses substream i and
/// draw index state.step.
ParticleState step_particles(const ParticleState& state, const ModelParams& params,
                             const RngStream& replica);

/// Reusable stepping engine: keeps per-particle normal cursors, scratch
/// buffers and the worker pool alive across steps.
class ParticleEngine {
 public:
  ParticleEngine(const ModelParams& params, RngStream replica);
  ~ParticleEngine();
  ParticleEngine(ParticleEngine&&) noexcept;
  ParticleEngine& operator=(ParticleEngine&&) noexcept;

  void step(ParticleState& state);

  /// Normals consumed by the most recent step, indexed by particle.
  [[nodiscard]] std::span<const double> last_noise() const { return noise_; }
  [[nodiscard]] const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  std::vector<NormalCursor> cursors_;
  std::vector<double> noise_;
  std::vector<double> drift_;
  std::unique_ptr<WorkerPool> pool_;
};

struct ParticleSnapshot {
  double m = 0.0;
  double mu = 0.0;
  std::vector<double> x;  ///< empty unless full particle recording is on
};

struct ParticleRunOptions {
  std::uint64_t replica = 0;       ///< stream_id of the run
  bool record_particles = false;
};

/// Runs from `init` to params.t_end, recording (t, m^(N), mu) every
/// params.record_stride steps (plus t = 0 and the final step).
Trajectory<ParticleSnapshot> simulate_particles(const ParticleState& init,
                                                const ModelParams& params,
                                                const ParticleRunOptions& opts = {});

/// Polynomial coefficients a_0..a_n of the interaction potential and the
/// diffusion constant D of its evolution.
struct PotentialCoeffs {
  std::vector<double> a;
  double diffusion = 0.0;

  [[nodiscard]] std::size_t degree() const { return a.empty() ? 0 : a.size() - 1; }
};

/// Exact solution at time t of
///   a_k' = -alpha a_k + D (k+2)(k+1) a_{k+2},  k = 2..n  (a_{n+1} = a_{n+2} = 0).
/// a_0 and a_1 are returned unchanged: a_1 carries the particle forcing and
/// is owned by the particle system.
PotentialCoeffs coefficient_flow(const PotentialCoeffs& c0, double alpha, double t);

/// Lyapunov diagnostic (1/N) sum [x^4/4 + x^2/2] + (a/2) mu^2.
double hasminskii_value(const ParticleState& state, double a);

}  // namespace meanfield

#endif  // MEANFIELD_PARTICLES_HPP
