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
#include <cmath>
#include <cstdint>
#include <vector>

#include "modone/core.hpp"
#include "modone/extended_real.hpp"
#include "modone/numtheory.hpp"
#include "modone/parallel.hpp"
#include "modone/sequences.hpp"

namespace modone {

inline constexpr double kErdosTuranConstant = 3.0;
inline constexpr double kCloseGuard = 1e-10;

struct DiscrepancyReport {
  int64_t N = 0;
  double d_exact = 0.0;
  double et_bound = 0.0;
  int64_t m_used = 0;
  int64_t tau_N = 0;
  bool close_points = false;  // two points within 1e-10 (mod 1)
  bool bound_complete = true; // false when the sum over k stopped early
};

// sum_{n=1}^N e(k beta (n - alpha)^2 / (2N)) for a prepared phase.
inline cplx weyl_sum(const QuadraticPhase& phase, int64_t k) {
  if (k == 0) throw InputError("weyl_sum needs k != 0");
  const int64_t N = phase.N();
  const PhaseRow row = phase.row(k);
  if (row.error(N) > kPhaseTolerance) {
    throw PrecisionExhausted("Weyl sum phase error exceeds 1e-12 at k=" + std::to_string(k));
  }
  const cplx dd = unit_phase(PhaseRow::to_unit(2 * row.a));
  cplx acc = 0.0;
  for (int64_t n0 = 1; n0 <= N; n0 += 64) {
    cplx z = unit_phase(PhaseRow::to_unit(row.at(n0)));
    cplx dz = unit_phase(PhaseRow::to_unit(row.step(n0)));
    const int64_t stop = std::min(N, n0 + 63);
    for (int64_t n = n0; n <= stop; ++n) {
      acc += z;
      z *= dz;
      dz *= dd;
    }
  }
  return acc;
}

inline cplx weyl_sum(int64_t k, int64_t N, const ExtendedReal& alpha) {
  if (k == 0) throw InputError("weyl_sum needs k != 0");
  QuadraticPhase phase(alpha, ExtendedReal::from_integer(1), N);
  return weyl_sum(phase, k);
}

struct SortedDiscrepancy {
  double value = 0.0;
  bool close_points = false;
};

// D+ + D- from the order statistics, values reduced to [0, 1) first.
inline SortedDiscrepancy discrepancy_sorted_detail(std::vector<double> x) {
  if (x.empty()) throw InputError("discrepancy needs at least one point");
  for (double& v : x) {
    v -= std::floor(v);
    if (v >= 1.0) v = 0.0;
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double dp = 0.0;
  double dm = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    dp = std::max(dp, static_cast<double>(i + 1) / n - x[i]);
    dm = std::max(dm, x[i] - static_cast<double>(i) / n);
  }
  SortedDiscrepancy out;
  out.value = std::min(1.0, dp + dm);
  for (size_t i = 1; i < x.size(); ++i) {
    if (x[i] - x[i - 1] < kCloseGuard) out.close_points = true;
  }
  if (x.size() > 1 && x.front() + 1.0 - x.back() < kCloseGuard) out.close_points = true;
  return out;
}

inline double discrepancy_exact(const std::vector<double>& values) {
  return discrepancy_sorted_detail(values).value;
}

inline double discrepancy_exact(const ModOnePoints& points) { return discrepancy_exact(points.values); }

// C (1/m + (1/N) sum_{k=1}^m |S_k| / k).
inline double erdos_turan_bound(int64_t N, const ExtendedReal& alpha, int64_t m,
                                double C = kErdosTuranConstant) {
  if (N < 1) throw InputError("N must be >= 1");
  if (m < 1) throw InputError("m must be >= 1");
  QuadraticPhase phase(alpha, ExtendedReal::from_integer(1), N);
  std::vector<double> terms = parallel_map<double>(m, [&](int64_t i) {
    const int64_t k = i + 1;
    return std::abs(weyl_sum(phase, k)) / static_cast<double>(k);
  });
  double s = 0.0;
  for (double t : terms) s += t;
  return C * (1.0 / static_cast<double>(m) + s / static_cast<double>(N));
}

inline double erdos_turan_bound(int64_t N, const ExtendedReal& alpha) {
  return erdos_turan_bound(N, alpha, N);
}

// Full report with m = N unless given. With stop_when_exceeded the sum over k
// ends once the partial bound passes d_exact; every term is nonnegative, so
// d_exact <= partial <= full bound still holds, and et_bound is the partial.
inline DiscrepancyReport discrepancy_report(int64_t N, const ExtendedReal& alpha, int64_t m = 0,
                                            double C = kErdosTuranConstant,
                                            bool stop_when_exceeded = false) {
  if (N < 1) throw InputError("N must be >= 1");
  if (m == 0) m = N;
  if (m < 1) throw InputError("m must be >= 1");
  SequenceSpec spec;
  spec.alpha = alpha;
  spec.N = N;
  const ModOnePoints pts = phi_values(spec);
  const SortedDiscrepancy d = discrepancy_sorted_detail(pts.values);
  DiscrepancyReport r;
  r.N = N;
  r.d_exact = d.value;
  r.close_points = d.close_points;
  r.m_used = m;
  r.tau_N = divisor_count(N);
  if (!stop_when_exceeded) {
    r.et_bound = erdos_turan_bound(N, alpha, m, C);
    return r;
  }
  QuadraticPhase phase(alpha, ExtendedReal::from_integer(1), N);
  double s = 0.0;
  const double head = C / static_cast<double>(m);
  for (int64_t k = 1; k <= m; ++k) {
    s += std::abs(weyl_sum(phase, k)) / static_cast<double>(k);
    r.et_bound = head + C * s / static_cast<double>(N);
    if (r.et_bound >= r.d_exact && k < m) {
      r.bound_complete = false;
      return r;
    }
  }
  return r;
}

// d_N sqrt(N) / (log N (sqrt(log N) + tau(N))).
inline double discrepancy_shape_ratio(double d, int64_t N) {
  if (N < 2) throw InputError("shape ratio needs N >= 2");
  const double L = std::log(static_cast<double>(N));
  return d * std::sqrt(static_cast<double>(N)) / (L * (std::sqrt(L) + static_cast<double>(divisor_count(N))));
}

}  // namespace modone
