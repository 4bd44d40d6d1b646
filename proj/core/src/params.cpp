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

#include "meanfield/params.hpp"

#include <cmath>
#include <string>

#include "meanfield/error.hpp"

namespace meanfield {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

}  // namespace

std::size_t ModelParams::n_steps() const {
  // Round to the nearest step so t_end = k*dt is not lost to representation
  // error (0.3/0.1 = 2.9999999999999996).
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

const ModelParams& validate(const ModelParams& params) {
  require_finite(params.alpha, "alpha");
  if (!(params.alpha > 0.0)) throw ValidationError("alpha must be > 0");
  require_finite(params.theta, "theta");
  if (!(params.theta >= 0.0)) throw ValidationError("theta must be >= 0");
  require_finite(params.sigma, "sigma");
  if (!(params.sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
  if (params.n_particles < 1) throw ValidationError("n_particles must be >= 1");
  require_finite(params.dt, "dt");
  if (!(params.dt > 0.0)) throw ValidationError("dt must be > 0");
  require_finite(params.t_end, "t_end");
  if (!(params.t_end >= params.dt)) throw ValidationError("t_end must be >= dt");
  if (params.record_stride < 1) throw ValidationError("record_stride must be >= 1");
  require_finite(params.divergence_guard, "divergence_guard");
  if (!(params.divergence_guard > 0.0)) {
    throw ValidationError("divergence_guard must be > 0");
  }
  if (params.threads < 1) throw ValidationError("threads must be >= 1");
  return params;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace meanfield
