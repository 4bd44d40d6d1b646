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

#ifndef MEANFIELD_PARAMS_HPP
#define MEANFIELD_PARAMS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace meanfield {

/// Physical parameters of the dissipative mean-field model plus the
/// numerical controls shared by every integrator.
struct ModelParams {
  double alpha = 1.0;   ///< dissipation rate of the field, > 0
  double theta = 1.0;   ///< interaction strength, >= 0
  double sigma = 0.0;   ///< noise intensity, >= 0
  std::size_t n_particles = 1;
  double dt = 1e-3;
  double t_end = 1.0;
  std::uint64_t seed = 0;

  std::size_t record_stride = 10;     ///< steps between recorded snapshots
  double divergence_guard = 1e6;      ///< |x| beyond this aborts the run
  unsigned threads = 1;               ///< worker cap; results do not depend on it

  /// Number of whole steps covering [0, t_end].
  [[nodiscard]] std::size_t n_steps() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Returns `params` unchanged when every invariant holds, otherwise throws
/// ValidationError naming the first offending field.
const ModelParams& validate(const ModelParams& params);

/// Time-indexed sequence of snapshots together with the parameters that
/// produced it.
template <class Record>
struct Trajectory {
  std::vector<double> times;
  std::vector<Record> records;
  ModelParams meta;

  void push(double t, Record r) {
    times.push_back(t);
    records.push_back(std::move(r));
  }
  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] bool empty() const { return times.empty(); }
};

/// Checks the Trajectory invariants: same lengths, times[0] == 0, strictly
/// increasing times.
template <class Record>
[[nodiscard]] bool well_formed(const Trajectory<Record>& tr) {
  if (tr.times.size() != tr.records.size()) return false;
  if (tr.times.empty()) return true;
  if (tr.times.front() != 0.0) return false;
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    if (!(tr.times[i] > tr.times[i - 1])) return false;
  }
  return true;
}

/// Pairwise (cascade) summation over a fixed binary tree. The result depends
/// only on the values and their order, never on how the caller was
/// parallelised.
double pairwise_sum(std::span<const double> values);

}  // namespace meanfield

#endif  // MEANFIELD_PARAMS_HPP
