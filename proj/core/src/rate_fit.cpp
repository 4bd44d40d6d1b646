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

#include "meanfield/rate_fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace meanfield {

RateFit fit_log_log(std::span<const double> x, std::span<const double> y,
                    std::span<const double> stderrs) {
  if (x.size() != y.size()) throw ValidationError("fit needs as many ordinates as abscissae");
  if (x.size() < 4) throw ValidationError("fit needs at least 4 points");
  if (!stderrs.empty() && stderrs.size() != x.size()) {
    throw ValidationError("one standard error per point is required");
  }
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ValidationError("log-log fit needs positive finite data");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit needs at least two distinct abscissae");
  RateFit fit;
  fit.abscissae.assign(x.begin(), x.end());
  fit.ordinates.assign(y.begin(), y.end());
  fit.stderrs.assign(stderrs.begin(), stderrs.end());
  if (fit.stderrs.empty()) fit.stderrs.assign(n, 0.0);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::min(1.0, sxy * sxy / (sxx * syy)) : 1.0;
  return fit;
}

void require_fit_quality(const RateFit& fit, double min_r2, const std::string& experiment) {
  if (fit.r_squared < min_r2) {
    std::ostringstream os;
    os << experiment << ": log-log fit has r^2 = " << fit.r_squared << " < " << min_r2
       << " (slope " << fit.slope << "); increase replicas or samples";
    throw InconclusiveFitError(os.str(), fit);
  }
}

}  // namespace meanfield
