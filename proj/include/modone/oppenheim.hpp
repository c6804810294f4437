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
#include <cstdint>
#include <vector>

#include "modone/core.hpp"
#include "modone/extended_real.hpp"
#include "modone/interval_set.hpp"
#include "modone/parallel.hpp"
#include "modone/statistics.hpp"

namespace modone {

// Q(x) = beta/2 (x1^2 - x2^2) + x3 x4, shifted by xi = (alpha, alpha, 0, 0).
struct FormSpec {
  ExtendedReal alpha;
  ExtendedReal beta = ExtendedReal::from_integer(1);

  void validate() const {
    if (beta.big() == 0) throw InputError("beta must be nonzero");
  }
  bool alpha_half_integer() const {
    const BigFloat t = alpha.big() * 2;
    return t == floor(t);
  }
};

using Lattice4 = std::array<int64_t, 4>;

// Q_xi(x), evaluated with the working precision of alpha and beta.
inline double q_xi_value(const Lattice4& x, const FormSpec& spec) {
  spec.validate();
  const BigFloat a = spec.alpha.big();
  const BigFloat d1 = BigFloat(x[0]) - a;
  const BigFloat d2 = BigFloat(x[1]) - a;
  const BigFloat q = spec.beta.big() / 2 * (d1 * d1 - d2 * d2) + BigFloat(x[2]) * BigFloat(x[3]);
  return q.convert_to<double>();
}

struct LatticeOptions {
  bool include_diagonal = false;     // keep x1 = x2
  bool exclude_half_line = true;     // drop x1 + x2 = 2 alpha when alpha is in Z/2
};

struct LatticeCount {
  int64_t M = 0;
  std::vector<int64_t> counts;  // counts[t]: lattice points with x3 = M + t
  int64_t ambiguous = 0;        // Q within N * 1e-12 of an endpoint of A
  double value = 0.0;           // (1/M) sum_t counts[t] / (M + t)
};

namespace detail {

// Integers x4 with D + x3 x4 in the interval, by closed form then a check.
// Double arithmetic settles the run unless an end lands near an integer.
inline int64_t x4_run(quad D, int64_t x3, const Interval& iv, quad guard, int64_t& ambiguous) {
  {
    const double d = static_cast<double>(D);
    const double n = static_cast<double>(x3);
    const double tl = (iv.lo - d) / n;
    const double th = (iv.hi - d) / n;
    const double slack = 1e-9 * (1.0 + std::abs(tl) + std::abs(th));
    const double fl = std::floor(tl);
    const double fh = std::floor(th);
    if (tl - fl > slack && fl + 1.0 - tl > slack && th - fh > slack && fh + 1.0 - th > slack) {
      return fh > fl ? static_cast<int64_t>(fh - fl) : 0;
    }
  }
  const quad lo = quad(iv.lo);
  const quad hi = quad(iv.hi);
  const quad n = quad(x3);
  auto inside = [&](int64_t x4) {
    const quad q = D + n * quad(x4);
    if (q < lo || q > hi) return false;
    if (q == lo && !iv.closed_lo) return false;
    if (q == hi && !iv.closed_hi) return false;
    return true;
  };
  int64_t a = static_cast<int64_t>(floor_q((lo - D) / n)) - 1;
  int64_t b = static_cast<int64_t>(floor_q((hi - D) / n)) + 1;
  while (a <= b && !inside(a)) ++a;
  while (b >= a && !inside(b)) --b;
  for (int64_t x4 : {a - 1, a, b, b + 1}) {
    const quad q = D + n * quad(x4);
    if (abs_q(q - lo) < guard || abs_q(q - hi) < guard) ++ambiguous;
  }
  return a <= b ? b - a + 1 : 0;
}

}  // namespace detail

// sum over x in Z^4, x1 != x2, M <= x3 <= 2M, (x1/x3, x2/x3) in B1 x B2,
// Q_xi(x) in A, weighted 1/(M x3).
inline LatticeCount lattice_count_side(int64_t M, const IntervalSet& A, const IntervalSet& B1,
                                       const IntervalSet& B2, const FormSpec& spec,
                                       const LatticeOptions& opt = {}) {
  spec.validate();
  if (M < 1) throw InputError("M must be >= 1");
  const bool half = spec.alpha_half_integer();
  if (half) {
    for (const IntervalSet* B : {&B1, &B2}) {
      if (!B->empty() && B->inf() < 0.0) {
        throw InputError("alpha in Z/2 needs B1, B2 inside [0, inf)");
      }
    }
  }
  LatticeCount out;
  out.M = M;
  out.counts.assign(static_cast<size_t>(M + 1), 0);
  if (A.empty() || B1.empty() || B2.empty()) return out;
  const quad a = spec.alpha.value_q();
  const quad b = spec.beta.value_q();
  const int64_t two_alpha = half ? static_cast<int64_t>(floor_q(2 * a + quad(0.5))) : 0;
  struct Row {
    int64_t count = 0;
    int64_t ambiguous = 0;
  };
  std::vector<Row> rows = parallel_map<Row>(M + 1, [&](int64_t t) {
    const int64_t x3 = M + t;
    const ExtendedReal zero = ExtendedReal::from_integer(0);
    const std::vector<int64_t> I = index_range(B1, x3, zero, false);
    const std::vector<int64_t> J = index_range(B2, x3, zero, false);
    const quad guard = quad(x3) * quad(1e-12);
    Row r;
    for (int64_t x1 : I) {
      for (int64_t x2 : J) {
        if (x1 == x2 && !opt.include_diagonal) continue;
        if (half && opt.exclude_half_line && x1 + x2 == two_alpha && x1 != x2) continue;
        const quad D = b / 2 * quad(x1 - x2) * (quad(x1 + x2) - 2 * a);
        for (const Interval& iv : A.intervals()) r.count += detail::x4_run(D, x3, iv, guard, r.ambiguous);
      }
    }
    return r;
  });
  double s = 0.0;
  for (int64_t t = 0; t <= M; ++t) {
    out.counts[t] = rows[t].count;
    out.ambiguous += rows[t].ambiguous;
    s += static_cast<double>(rows[t].count) / static_cast<double>(M + t);
  }
  out.value = s / static_cast<double>(M);
  return out;
}

// (1/M) sum_{N=M}^{2M} R_2,N(A, B1, B2), from the pair-correlation counter.
inline LatticeCount pair_correlation_long_average(int64_t M, const IntervalSet& A, const IntervalSet& B1,
                                                  const IntervalSet& B2, const FormSpec& spec) {
  spec.validate();
  if (M < 1) throw InputError("M must be >= 1");
  LatticeCount out;
  out.M = M;
  out.counts.assign(static_cast<size_t>(M + 1), 0);
  std::vector<PairCorrelation> rows = parallel_map<PairCorrelation>(M + 1, [&](int64_t t) {
    SequenceSpec s;
    s.alpha = spec.alpha;
    s.beta = spec.beta;
    s.N = M + t;
    return pair_correlation_general(s, A, B1, B2, false);
  });
  double s = 0.0;
  for (int64_t t = 0; t <= M; ++t) {
    out.counts[t] = rows[t].pairs;
    out.ambiguous += rows[t].ambiguous;
    s += static_cast<double>(rows[t].pairs) / static_cast<double>(M + t);
  }
  out.value = s / static_cast<double>(M);
  return out;
}

inline double volume_side(const IntervalSet& A, const IntervalSet& B1, const IntervalSet& B2) {
  return A.total_length() * B1.total_length() * B2.total_length();
}

struct OppenheimReport {
  int64_t M = 0;
  double count_side = 0.0;
  double volume_side = 0.0;
  double relative_error = 0.0;
  int64_t ambiguous = 0;
};

inline OppenheimReport oppenheim_report(int64_t M, const IntervalSet& A, const IntervalSet& B1,
                                        const IntervalSet& B2, const FormSpec& spec) {
  const LatticeCount c = lattice_count_side(M, A, B1, B2, spec);
  OppenheimReport r;
  r.M = M;
  r.count_side = c.value;
  r.volume_side = volume_side(A, B1, B2);
  r.relative_error = r.volume_side != 0.0 ? std::abs(c.value - r.volume_side) / r.volume_side
                                          : std::abs(c.value);
  r.ambiguous = c.ambiguous;
  return r;
}

}  // namespace modone
