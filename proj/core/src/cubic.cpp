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

#include "meanfield/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace meanfield {

namespace {

using cd = std::complex<double>;

cd derivative(const CharPoly& p, cd z) { return (3.0 * z + 2.0 * p.c2) * z + p.c1; }

// Newton steps that are kept only while the residual improves.
cd polish(const CharPoly& p, cd z) {
  double best = std::abs(p(z));
  for (int it = 0; it < 8 && best > 0.0; ++it) {
    const cd d = derivative(p, z);
    if (d == cd(0.0, 0.0)) break;
    const cd next = z - p(z) / d;
    const double r = std::abs(p(next));
    if (!(r < best)) break;
    z = next;
    best = r;
  }
  return z;
}

double polish_real(const CharPoly& p, double x) { return polish(p, cd(x, 0.0)).real(); }

}  // namespace

CharPoly characteristic_polynomial(const Mat3& a) {
  const double tr = a[0][0] + a[1][1] + a[2][2];
  const double minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] -
                        a[0][2] * a[2][0] + a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  return {-tr, minors, -det};
}

std::array<std::complex<double>, 3> cubic_roots(const CharPoly& poly) {
  const double a = poly.c2;
  const double b = poly.c1;
  const double c = poly.c0;
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  std::array<cd, 3> roots{};
  if (disc <= 0.0 && p < 0.0) {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
      roots[static_cast<std::size_t>(k)] = cd(polish_real(poly, t - shift), 0.0);
    }
  } else {
    double t = 0.0;
    if (p != 0.0 || q != 0.0) {
      const double sq = std::sqrt(std::max(disc, 0.0));
      const double u = std::cbrt(-0.5 * q - std::copysign(sq, q));
      t = u != 0.0 ? u - p / (3.0 * u) : std::cbrt(-q);
    }
    const double r0 = polish_real(poly, t - shift);
    // Deflate: p(z) = (z - r0)(z^2 + P z + Q).
    const double P = a + r0;
    const double Q = std::abs(r0) > 1.0 ? -c / r0 : b + P * r0;
    const double half = -0.5 * P;
    const double d = half * half - Q;
    roots[0] = cd(r0, 0.0);
    if (d < 0.0) {
      cd z = polish(poly, cd(half, std::sqrt(-d)));
      z = cd(z.real(), std::abs(z.imag()));
      roots[1] = z;
      roots[2] = std::conj(z);
    } else {
      const double s = std::sqrt(d);
      const double big = half >= 0.0 ? half + s : half - s;
      const double small = big != 0.0 ? Q / big : 0.0;
      roots[1] = cd(polish_real(poly, big), 0.0);
      roots[2] = cd(polish_real(poly, small), 0.0);
    }
  }
  std::stable_sort(roots.begin(), roots.end(), [](cd x, cd y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return roots;
}

double relative_residual(const CharPoly& p, std::complex<double> z) {
  const double r = std::abs(z);
  const double scale =
      r * r * r + std::abs(p.c2) * r * r + std::abs(p.c1) * r + std::abs(p.c0);
  const double res = std::abs(p(z));
  return scale > 0.0 ? res / scale : res;
}

}  // namespace meanfield
