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

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace modone {

using cplx = std::complex<double>;
using i128 = __int128;
using u128 = unsigned __int128;
using quad = __float128;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Raised when the configured working precision cannot certify a result.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised on malformed or contradictory user input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// e(x) = exp(2 pi i x); callers pass an already reduced phase.
inline cplx unit_phase(double x) {
  return {std::cos(kTwoPi * x), std::sin(kTwoPi * x)};
}

inline double frac(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

// floor for binary128 values of magnitude below 2^100.
inline quad floor_q(quad x) {
  i128 t = static_cast<i128>(x);
  quad tq = static_cast<quad>(t);
  if (tq > x) tq -= 1;
  return tq;
}

inline quad frac_q(quad x) {
  quad r = x - floor_q(x);
  return r >= 1 ? quad(0) : r;
}

inline quad abs_q(quad x) { return x < 0 ? -x : x; }

inline double to_double(quad x) { return static_cast<double>(x); }

// "%.3g" rendering for messages.
inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline int64_t mod_floor(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline i128 mod_floor(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace modone
