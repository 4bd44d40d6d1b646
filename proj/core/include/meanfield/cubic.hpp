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

#ifndef MEANFIELD_CUBIC_HPP
#define MEANFIELD_CUBIC_HPP

#include <array>
#include <complex>

namespace meanfield {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Monic characteristic polynomial lambda^3 + c2 lambda^2 + c1 lambda + c0
/// of a 3x3 matrix, i.e. det(lambda I - A).
struct CharPoly {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  [[nodiscard]] std::complex<double> operator()(std::complex<double> z) const {
    return ((z + c2) * z + c1) * z + c0;
  }
};

CharPoly characteristic_polynomial(const Mat3& a);

/// Roots of a real monic cubic: trigonometric form when all three are real,
/// Cardano otherwise, each polished by Newton steps. A complex pair is
/// returned as (re + i im, re - i im) with im > 0. Order: descending real part.
std::array<std::complex<double>, 3> cubic_roots(const CharPoly& p);

/// |p(z)| divided by the sum of the magnitudes of its terms.
double relative_residual(const CharPoly& p, std::complex<double> z);

}  // namespace meanfield

#endif  // MEANFIELD_CUBIC_HPP
