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

#ifndef MEANFIELD_RATE_FIT_HPP
#define MEANFIELD_RATE_FIT_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meanfield/error.hpp"

namespace meanfield {

/// Least-squares line through (log x, log y).
struct RateFit {
  std::vector<double> abscissae;
  std::vector<double> ordinates;
  std::vector<double> stderrs;  ///< Monte Carlo standard error of each ordinate
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Requires at least 4 points with positive coordinates.
RateFit fit_log_log(std::span<const double> x, std::span<const double> y,
                    std::span<const double> stderrs = {});

/// A rate experiment whose fit is too poor to report a slope.
class InconclusiveFitError : public InconclusiveError {
 public:
  InconclusiveFitError(const std::string& what, RateFit fit)
      : InconclusiveError(what), fit_(std::move(fit)) {}
  [[nodiscard]] const RateFit& fit() const { return fit_; }

 private:
  RateFit fit_;
};

/// Throws InconclusiveFitError when fit.r_squared < min_r2.
void require_fit_quality(const RateFit& fit, double min_r2, const std::string& experiment);

}  // namespace meanfield

#endif  // MEANFIELD_RATE_FIT_HPP
