// Copyright 2026 The modone Authors
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

#pragma once

#include <array>
#include <cmath>

#include "modone/core.hpp"

namespace modone {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// [[a, b], [c, d]]
struct Mat2 {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  double det() const { return a * d - b * c; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  // Inverse of a determinant-one matrix.
  Mat2 inverse() const { return {d, -b, -c, a}; }
  double max_abs_diff(const Mat2& o) const {
    return std::max(std::max(std::abs(a - o.a), std::abs(b - o.b)),
                    std::max(std::abs(c - o.c), std::abs(d - o.d)));
  }
};

inline Mat2 n_plus(double x) { return {1.0, x, 0.0, 1.0}; }
inline Mat2 n_minus(double x) { return {1.0, 0.0, x, 1.0}; }
inline Mat2 a_diag(double y) { return {y, 0.0, 0.0, 1.0 / y}; }
inline Mat2 rotation(double phi) {
  return {std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
}

// Element (g, xi) of SL(2,R) semidirect R^2 with (g,xi)(g',xi') = (gg', g xi' + xi).
struct GroupElement {
  Mat2 g;
  Vec2 xi;
};

inline GroupElement group_mul(const GroupElement& p, const GroupElement& q) {
  Vec2 gx = p.g * q.xi;
  return {p.g * q.g, {gx.x + p.xi.x, gx.y + p.xi.y}};
}

inline GroupElement group_inv(const GroupElement& p) {
  Mat2 gi = p.g.inverse();
  Vec2 v = gi * p.xi;
  return {gi, {-v.x, -v.y}};
}

struct IwasawaCoords {
  double x = 0.0;
  double y = 1.0;
  double phi = 0.0;  // in [0, 2 pi)
};

// g = n_plus(x) a(sqrt y) r(phi).
inline IwasawaCoords iwasawa(const Mat2& g) {
  if (std::abs(g.det() - 1.0) >= 1e-10) {
    throw InputError("iwasawa needs a determinant-one matrix, det=" + std::to_string(g.det()));
  }
  double r2 = g.c * g.c + g.d * g.d;
  IwasawaCoords out;
  out.y = 1.0 / r2;
  double phi = std::atan2(g.c, g.d);
  if (phi < 0) phi += kTwoPi;
  if (phi >= kTwoPi) phi -= kTwoPi;
  out.phi = phi;
  // Top row of n_plus(x) a(sqrt y) r(phi) gives x = (a c + b d) / (c^2 + d^2).
  out.x = (g.a * g.c + g.b * g.d) / r2;
  return out;
}

inline Mat2 from_iwasawa(const IwasawaCoords& w) {
  return n_plus(w.x) * a_diag(std::sqrt(w.y)) * rotation(w.phi);
}

}  // namespace modone
