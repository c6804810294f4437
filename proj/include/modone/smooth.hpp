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
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "modone/numtheory.hpp"
#include "modone/parallel.hpp"
#include "modone/sequences.hpp"
#include "modone/statistics.hpp"
#include "modone/test_function.hpp"
#include "modone/theta.hpp"

namespace modone {

// Indices n with (n - alpha)/N in the support of h, their weights
// h((n - alpha)/N) and phases phi(n).
struct WeightedPoints {
  std::vector<int64_t> index;
  std::vector<double> weight;
  std::vector<double> value;
  double weight_l1 = 0.0;
};

inline WeightedPoints weighted_points(const SequenceSpec& spec, const TestFunction& h,
                                      bool with_values = true) {
  if (!h) throw InputError("missing weight function");
  WeightedPoints out;
  if (h.kind() == "zero") return out;
  if (!h.compact()) throw InputError("weight function h must be compactly supported");
  Window w = h.support_window(0.0);
  const quad a = spec.alpha.value_q();
  const quad n = quad(spec.N);
  const int64_t lo = static_cast<int64_t>(std::floor(static_cast<double>(a + quad(w.lo) * n))) - 1;
  const int64_t hi = static_cast<int64_t>(std::ceil(static_cast<double>(a + quad(w.hi) * n))) + 1;
  std::optional<QuadraticPhase> phase;
  if (with_values) phase.emplace(spec.alpha, spec.beta, spec.N);
  double worst = 0.0;
  for (int64_t i = lo; i <= hi; ++i) {
    const double x = static_cast<double>((quad(i) - a) / n);
    const double wt = h.real(x);
    if (wt == 0.0) continue;
    out.index.push_back(i);
    out.weight.push_back(wt);
    out.weight_l1 += std::abs(wt);
    if (with_values) {
      ReducedPhase r = phase->at(i);
      worst = std::max(worst, r.error);
      out.value.push_back(r.value);
    }
  }
  if (worst > kPhaseTolerance) {
    throw PrecisionExhausted("phase error bound exceeds 1e-12; raise the working precision");
  }
  return out;
}

// Weights 1 on the index range of `spec`.
inline WeightedPoints sharp_points(const SequenceSpec& spec) {
  ModOnePoints pts = phi_values(spec);
  WeightedPoints out;
  for (int64_t i = spec.n_lo(); i <= spec.n_hi(); ++i) out.index.push_back(i);
  out.weight.assign(out.index.size(), 1.0);
  out.value = std::move(pts.values);
  out.weight_l1 = static_cast<double>(out.index.size());
  return out;
}

namespace detail {

// (1/N) sum_m sum_{i,j} w1_i w2_j f(N (v_i - v_j + m)).
inline double smooth_core(int64_t N, const WeightedPoints& p1, const WeightedPoints& p2,
                          const TestFunction& f, double truncation = 1e-10) {
  if (p1.index.empty() || p2.index.empty()) return 0.0;
  if (!f) throw InputError("missing test function f");
  if (f.kind() == "zero") return 0.0;
  const double mass = std::max(1.0, p1.weight_l1 * p2.weight_l1);
  const double tol = std::min(1e-13, 0.25 * truncation * static_cast<double>(N) / mass);
  Window W = f.support_window(tol);
  if (!std::isfinite(W.lo) || !std::isfinite(W.hi)) {
    throw InputError("no tail bound is available for test function kind '" + f.kind() + "'");
  }
  if (W.width() <= 0) return 0.0;
  const double Nd = static_cast<double>(N);
  const double lo = W.lo / Nd;
  const double hi = W.hi / Nd;

  // Sort the second family by value; keep the weights aligned.
  std::vector<size_t> order(p2.value.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return p2.value[a] < p2.value[b]; });
  std::vector<double> v2(order.size());
  std::vector<double> w2(order.size());
  for (size_t k = 0; k < order.size(); ++k) {
    v2[k] = p2.value[order[k]];
    w2[k] = p2.weight[order[k]];
  }

  auto pair_sum = [&](double d) {
    // sum over m of f(N (d + m)) with N (d + m) in the window.
    double s = 0.0;
    const double m0 = std::ceil(lo - d);
    const double m1 = std::floor(hi - d);
    for (double m = m0; m <= m1; m += 1.0) s += f.real(Nd * (d + m));
    return s;
  };

  std::vector<double> rows = parallel_map<double>(static_cast<int64_t>(p1.value.size()), [&](int64_t i) {
    const double x = p1.value[i];
    double acc = 0.0;
    if (hi - lo >= 1.0 - 1e-9) {
      for (size_t j = 0; j < v2.size(); ++j) acc += w2[j] * pair_sum(x - v2[j]);
    } else {
      // v_j in x - [lo, hi] + Z.
      const double a0 = x - hi;
      const double b0 = x - lo;
      for (int64_t m = static_cast<int64_t>(std::floor(a0)) - 1; m <= static_cast<int64_t>(std::floor(b0)) + 1; ++m) {
        const double a = a0 - static_cast<double>(m);
        const double b = b0 - static_cast<double>(m);
        if (b < 0.0 || a >= 1.0) continue;
        auto first = std::lower_bound(v2.begin(), v2.end(), a - 1e-12);
        auto last = std::upper_bound(v2.begin(), v2.end(), b + 1e-12);
        for (auto it = first; it < last; ++it) {
          const size_t j = static_cast<size_t>(it - v2.begin());
          acc += w2[j] * pair_sum(x - v2[j]);
        }
      }
      // Distinct shifts see disjoint ranges since the window is under one period.
    }
    return p1.weight[i] * acc;
  });
  return ordered_sum(rows) / Nd;
}

}  // namespace detail

// (1/N) sum_m sum_{i,j} h((i - alpha)/N) h((j - alpha)/N) f(N (phi(i) - phi(j) + m)).
inline double smooth_pair_correlation(const SequenceSpec& spec, const TestFunction& f,
                                      const TestFunction& h) {
  if (spec.N < 1) throw InputError("N must be >= 1");
  WeightedPoints p = weighted_points(spec, h);
  return detail::smooth_core(spec.N, p, p, f);
}

inline double smooth_pair_correlation_cross(const SequenceSpec& spec, const TestFunction& f,
                                            const TestFunction& h1, const TestFunction& h2) {
  if (spec.N < 1) throw InputError("N must be >= 1");
  WeightedPoints p1 = weighted_points(spec, h1);
  WeightedPoints p2 = weighted_points(spec, h2);
  return detail::smooth_core(spec.N, p1, p2, f);
}

// Same sum with weight 1 on the index range of `spec` in place of h.
inline double smooth_pair_correlation_sharp(const SequenceSpec& spec, const TestFunction& f) {
  spec.validate();
  WeightedPoints p = sharp_points(spec);
  return detail::smooth_core(spec.N, p, p, f);
}

// |N^{-1/2} sum_n h((n - alpha)/N) e(k beta (n - alpha)^2 / (2N))|^2 for one k,
// by a two-term recurrence re-anchored on exact phases every 64 steps.
inline double weyl_square(const QuadraticPhase& phase, const WeightedPoints& p, int64_t k) {
  const PhaseRow row = phase.row(k);
  const size_t n = p.index.size();
  if (n == 0) return 0.0;
  const int64_t far = std::max(std::abs(p.index.front()), std::abs(p.index.back()));
  if (row.error(far) > kPhaseTolerance) {
    throw PrecisionExhausted("phase row error exceeds 1e-12 at k=" + std::to_string(k));
  }
  const cplx dd = unit_phase(PhaseRow::to_unit(2 * row.a));
  cplx acc = 0.0;
  size_t i = 0;
  while (i < n) {
    // Anchor at i; consecutive indices only.
    int64_t idx = p.index[i];
    cplx z = unit_phase(PhaseRow::to_unit(row.at(idx)));
    cplx dz = unit_phase(PhaseRow::to_unit(row.step(idx)));
    size_t stop = std::min(n, i + 64);
    for (; i < stop; ++i) {
      if (p.index[i] != idx) break;
      acc += p.weight[i] * z;
      z *= dz;
      dz *= dd;
      ++idx;
    }
  }
  return std::norm(acc) / static_cast<double>(phase.N());
}

struct QnTerms {
  std::vector<int64_t> k;      // k >= 1
  std::vector<double> weight;  // Re(nu(k/N) + nu(-k/N))
  std::vector<double> square;  // |S_k|^2 / N
};

// The k-terms of Q_N with k and -k folded together (h real gives
// S_{-k} = conj(S_k)).
inline QnTerms q_n_terms(const SequenceSpec& spec, const TestFunction& nu, const TestFunction& h) {
  if (spec.N < 1) throw InputError("N must be >= 1");
  QnTerms out;
  if (!nu || nu.kind() == "zero") return out;
  WeightedPoints p = weighted_points(spec, h, false);
  if (p.index.empty()) return out;
  Window W = nu.support_window(1e-15);
  const double Nd = static_cast<double>(spec.N);
  const int64_t kmax = static_cast<int64_t>(std::floor(std::max(std::abs(W.lo), std::abs(W.hi)) * Nd));
  QuadraticPhase phase(spec.alpha, spec.beta, spec.N);
  for (int64_t k = 1; k <= kmax; ++k) {
    const double x = static_cast<double>(k) / Nd;
    const double wt = (nu(x) + nu(-x)).real();
    if (wt == 0.0) continue;
    out.k.push_back(k);
    out.weight.push_back(wt);
  }
  out.square = parallel_map<double>(static_cast<int64_t>(out.k.size()),
                                    [&](int64_t i) { return weyl_square(phase, p, out.k[i]); });
  return out;
}

// Q_N(nu, h) = (1/N) sum_{k != 0} nu(k/N) |N^{-1/2} sum_n h((n - alpha)/N) e(k (n - alpha)^2 / (2N))|^2.
inline double q_n_direct(const SequenceSpec& spec, const TestFunction& nu, const TestFunction& h) {
  QnTerms t = q_n_terms(spec, nu, h);
  double s = 0.0;
  for (size_t i = 0; i < t.k.size(); ++i) s += t.weight[i] * t.square[i];
  return s / static_cast<double>(spec.N);
}

// Theta point k beta/N + i/N^2, phi = 0, xi = (0, alpha).
inline ThetaPoint q_n_theta_point(int64_t k, const SequenceSpec& spec) {
  ThetaPoint p = q_n_point(k, spec.N, spec.alpha.value_q());
  p.x = quad(k) * spec.beta.value_q() / quad(spec.N);
  return p;
}

// The same sum through theta sums: (1/N) sum_{k != 0} nu(k/N) |Theta_h(k/N + i/N^2, 0, (0, alpha))|^2.
inline double q_n_theta(const SequenceSpec& spec, const TestFunction& nu, const TestFunction& h) {
  if (spec.N < 1) throw InputError("N must be >= 1");
  if (!nu || nu.kind() == "zero" || h.kind() == "zero") return 0.0;
  Window W = nu.support_window(1e-15);
  const double Nd = static_cast<double>(spec.N);
  const int64_t klo = static_cast<int64_t>(std::ceil(W.lo * Nd));
  const int64_t khi = static_cast<int64_t>(std::floor(W.hi * Nd));
  ThetaEvaluator theta(h);
  theta.transformed(0.0);
  std::vector<double> terms = parallel_map<double>(khi - klo + 1, [&](int64_t i) {
    const int64_t k = klo + i;
    if (k == 0) return 0.0;
    const cplx v = nu(static_cast<double>(k) / Nd);
    if (v == 0.0) return 0.0;
    return (v * std::norm(theta(q_n_theta_point(k, spec)))).real();
  });
  return ordered_sum(terms) / Nd;
}

struct DivisorDecomposition {
  double main = 0.0;         // sigma = gcd(k, N) <= N^delta
  double tail = 0.0;         // q_n_direct - main
  double direct = 0.0;       // q_n_direct
  double main_theta = NAN;   // main through theta sums, when requested
  std::vector<std::pair<int64_t, double>> by_sigma;  // contribution of each divisor
};

inline DivisorDecomposition q_n_divisor_decomposition(const SequenceSpec& spec, const TestFunction& nu,
                                                      const TestFunction& h, double delta,
                                                      bool with_theta = false) {
  if (!(delta > 0 && delta < 1)) throw InputError("delta must lie in (0, 1)");
  QnTerms t = q_n_terms(spec, nu, h);
  const double Nd = static_cast<double>(spec.N);
  const double cut = std::pow(Nd, delta);
  DivisorDecomposition out;
  std::vector<int64_t> divs = divisors(spec.N);
  std::vector<double> per(divs.size(), 0.0);
  for (size_t i = 0; i < t.k.size(); ++i) {
    const int64_t sigma = std::gcd(t.k[i], spec.N);
    const double c = t.weight[i] * t.square[i] / Nd;
    per[static_cast<size_t>(std::lower_bound(divs.begin(), divs.end(), sigma) - divs.begin())] += c;
    out.direct += c;
  }
  for (size_t d = 0; d < divs.size(); ++d) {
    out.by_sigma.emplace_back(divs[d], per[d]);
    if (static_cast<double>(divs[d]) <= cut) out.main += per[d];
  }
  out.tail = out.direct - out.main;
  if (with_theta) {
    Window W = nu.support_window(1e-15);
    const int64_t kmax = static_cast<int64_t>(std::floor(std::max(std::abs(W.lo), std::abs(W.hi)) * Nd));
    ThetaEvaluator theta(h);
    theta.transformed(0.0);
    std::vector<double> terms = parallel_map<double>(2 * kmax + 1, [&](int64_t i) {
      const int64_t k = i - kmax;
      if (k == 0) return 0.0;
      if (static_cast<double>(std::gcd(k, spec.N)) > cut) return 0.0;
      const cplx v = nu(static_cast<double>(k) / Nd);
      if (v == 0.0) return 0.0;
      return (v * std::norm(theta(q_n_theta_point(k, spec)))).real();
    });
    out.main_theta = ordered_sum(terms) / Nd;
  }
  return out;
}

struct WindowAverage {
  double value = 0.0;
  int64_t terms = 0;
  std::vector<std::string> warnings;
};

// (1/M^eta) sum_{M <= N <= M + M^eta} stat(N).
template <class Stat>
WindowAverage window_average_sharp(Stat&& stat, int64_t M, double eta) {
  if (M < 2) throw InputError("window average needs M >= 2");
  if (!(eta > 0 && eta <= 1)) throw InputError("eta must lie in (0, 1]");
  WindowAverage out;
  if (!(eta > 17.0 / 18.0)) out.warnings.push_back("eta outside (17/18, 1]");
  const double L = std::pow(static_cast<double>(M), eta);
  const int64_t hi = static_cast<int64_t>(std::floor(static_cast<double>(M) + L));
  std::vector<double> v = parallel_map<double>(hi - M + 1, [&](int64_t i) { return stat(M + i); });
  out.terms = static_cast<int64_t>(v.size());
  out.value = ordered_sum(v) / L;
  return out;
}

// (1/M^eta) sum_N psi((N - M)/M^eta) stat(N).
template <class Stat>
WindowAverage window_average_smooth(Stat&& stat, int64_t M, double eta, const TestFunction& psi) {
  if (M < 2) throw InputError("window average needs M >= 2");
  if (!(eta > 0 && eta <= 1)) throw InputError("eta must lie in (0, 1]");
  if (!psi.compact()) throw InputError("window weight psi must be compactly supported");
  WindowAverage out;
  if (!(eta > 17.0 / 18.0)) out.warnings.push_back("eta outside (17/18, 1]");
  const double L = std::pow(static_cast<double>(M), eta);
  Window w = psi.support_window(0.0);
  const int64_t lo = std::max<int64_t>(1, static_cast<int64_t>(std::floor(static_cast<double>(M) + w.lo * L)));
  const int64_t hi = static_cast<int64_t>(std::ceil(static_cast<double>(M) + w.hi * L));
  std::vector<double> v = parallel_map<double>(hi - lo + 1, [&](int64_t i) {
    const int64_t N = lo + i;
    const double wt = psi.real((static_cast<double>(N) - static_cast<double>(M)) / L);
    return wt == 0.0 ? 0.0 : wt * stat(N);
  });
  out.terms = hi - lo + 1;
  out.value = ordered_sum(v) / L;
  return out;
}

}  // namespace modone
