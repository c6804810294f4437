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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "modone/core.hpp"
#include "modone/extended_real.hpp"

namespace modone {

inline constexpr double kPhaseTolerance = 1e-12;

struct SequenceSpec {
  ExtendedReal alpha;
  ExtendedReal beta = ExtendedReal::from_integer(1);
  int64_t N = 1;
  std::optional<std::pair<int64_t, int64_t>> n_range;  // inclusive, default 1..N

  int64_t n_lo() const { return n_range ? n_range->first : 1; }
  int64_t n_hi() const { return n_range ? n_range->second : N; }

  void validate() const {
    if (N < 1) throw InputError("N must be >= 1, got " + std::to_string(N));
    if (beta.big() == 0) throw InputError("beta must be nonzero");
    if (n_hi() < n_lo()) throw InputError("empty n range");
    if (std::max(std::abs(n_lo()), std::abs(n_hi())) > 4'000'000'000LL)
      throw InputError("|n| above 4e9 is not supported");
  }
};

struct ModOnePoints {
  std::vector<double> values;
  SequenceSpec spec;
  double max_abs_error = 0.0;
};

// frac(a n^2 + b n + c) for one fixed multiplier k, in units of 2^-128.
// Wrapping u128 arithmetic reduces mod 1 exactly; only the coefficient
// truncation contributes error.
struct PhaseRow {
  u128 a = 0;
  u128 b = 0;
  u128 c = 0;
  double err_a = 0.0;
  double err_b = 0.0;
  double err_c = 0.0;

  u128 at(int64_t n) const {
    const u128 un = static_cast<u128>(static_cast<i128>(n));
    return a * (un * un) + b * un + c;
  }
  // First difference phase(n + 1) - phase(n) mod 1.
  u128 step(int64_t n) const { return a * static_cast<u128>(static_cast<i128>(2 * n + 1)) + b; }
  double error(int64_t n) const {
    const double m = std::abs(static_cast<double>(n));
    return m * m * err_a + m * err_b + err_c + 1e-30;
  }
  static double to_unit(u128 v) { return std::ldexp(static_cast<double>(static_cast<uint64_t>(v >> 64)), -64); }
};

// Fixed-point images of the three coefficients in
//   beta (n - alpha)^2 / (2N) = n^2 beta/(2N) + n (-alpha beta)/N + beta alpha^2/(2N).
class QuadraticPhase {
 public:
  QuadraticPhase(const ExtendedReal& alpha, const ExtendedReal& beta, int64_t N) : N_(N) {
    if (N < 1) throw InputError("N must be >= 1");
    const double ea = alpha.master_error();
    const double eb = beta.master_error();
    const double a = std::abs(alpha.value());
    const double b = std::abs(beta.value());
    const double tiny = std::ldexp(1.0, -120);
    beta_ = make_fixed(beta.big(), eb);
    lin_ = make_fixed(-alpha.big() * beta.big(), a * eb + b * ea + (a * b + 1) * tiny);
    cst_ = make_fixed(beta.big() * alpha.big() * alpha.big(),
                      a * a * eb + 2 * a * b * ea + (a * a * b + 1) * tiny);
    beta_integer_ = beta.rational() && beta.rational()->den == 1;
    beta_int_ = beta_integer_ ? beta.rational()->num : 0;
    const BigFloat two_n(2 * N);
    row_a_ = make_fixed(beta.big() / two_n, eb / (2.0 * N) + tiny);
    row_b_ = make_fixed(-alpha.big() * beta.big() / BigFloat(N), (a * eb + b * ea) / N + tiny);
    row_c_ = make_fixed(beta.big() * alpha.big() * alpha.big() / two_n,
                        (a * a * eb + 2 * a * b * ea) / (2.0 * N) + tiny);
  }

  // Coefficients of frac(k beta (n - alpha)^2 / (2N)) as a quadratic in n.
  PhaseRow row(int64_t k) const {
    const u128 uk = static_cast<u128>(static_cast<i128>(k));
    const double ak = std::abs(static_cast<double>(k));
    PhaseRow r;
    r.a = uk * row_a_.fraction;
    r.b = uk * row_b_.fraction;
    r.c = uk * row_c_.fraction;
    r.err_a = ak * (row_a_.error + std::ldexp(1.0, -128));
    r.err_b = ak * (row_b_.error + std::ldexp(1.0, -128));
    r.err_c = ak * (row_c_.error + std::ldexp(1.0, -128));
    return r;
  }

  // frac(beta (n - alpha)^2 / (2N)) and its error bound.
  ReducedPhase at(int64_t n) const { return scaled(n, 1); }

  // frac(k beta (n - alpha)^2 / (2N)).
  ReducedPhase scaled(int64_t n, int64_t k) const {
    const i128 two_n = 2 * static_cast<i128>(N_);
    ReducedPhase quad_term;
    i128 nn = static_cast<i128>(n) * n;
    if (beta_integer_) {
      // Exact: k beta n^2 mod 2N in 128-bit integers.
      i128 r = mod_floor(mod_floor(nn, two_n) * mod_floor(static_cast<i128>(k) * beta_int_, two_n),
                         two_n);
      quad_term.value = static_cast<double>(r) / static_cast<double>(two_n);
      quad_term.error = 1.2e-16;
    } else {
      quad_term = reduce_product(static_cast<i128>(k) * nn, beta_, 2 * N_);
    }
    ReducedPhase lin = reduce_product(static_cast<i128>(k) * n, lin_, N_);
    ReducedPhase cst = reduce_product(static_cast<i128>(k), cst_, 2 * N_);
    ReducedPhase out;
    out.value = add_mod1(add_mod1(quad_term.value, lin.value), cst.value);
    out.error = quad_term.error + lin.error + cst.error + 3.4e-16;
    return out;
  }

  int64_t N() const { return N_; }

 private:
  int64_t N_;
  FixedPoint beta_;
  FixedPoint lin_;
  FixedPoint cst_;
  bool beta_integer_ = false;
  int64_t beta_int_ = 0;
  FixedPoint row_a_;
  FixedPoint row_b_;
  FixedPoint row_c_;
};

inline ModOnePoints phi_values(const SequenceSpec& spec) {
  spec.validate();
  QuadraticPhase phase(spec.alpha, spec.beta, spec.N);
  ModOnePoints out;
  out.spec = spec;
  out.values.reserve(static_cast<size_t>(spec.n_hi() - spec.n_lo() + 1));
  double worst = 0.0;
  for (int64_t n = spec.n_lo(); n <= spec.n_hi(); ++n) {
    ReducedPhase r = phase.at(n);
    worst = std::max(worst, r.error);
    out.values.push_back(r.value);
  }
  if (worst > kPhaseTolerance) {
    throw PrecisionExhausted("phase error bound " + short_number(worst) +
                             " exceeds 1e-12; raise the working precision");
  }
  out.max_abs_error = worst;
  return out;
}

// frac(k (n - alpha)^2 / (2N)).
inline double frac_quadratic(int64_t n, int64_t k, int64_t N, const ExtendedReal& alpha) {
  if (std::abs(k) > 1'000'000'000LL || std::abs(n) > 1'000'000'000LL)
    throw InputError("frac_quadratic needs |k|, |n| <= 1e9");
  QuadraticPhase phase(alpha, ExtendedReal::from_integer(1), N);
  ReducedPhase r = phase.scaled(n, k);
  if (r.error > kPhaseTolerance)
    throw PrecisionExhausted("frac_quadratic error bound exceeds 1e-12");
  return r.value;
}

}  // namespace modone
