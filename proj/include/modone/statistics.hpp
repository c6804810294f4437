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
#include <functional>
#include <vector>

#include "modone/core.hpp"
#include "modone/interval_set.hpp"
#include "modone/sequences.hpp"

namespace modone {

// Image of a set of reals in R/Z as disjoint pieces of [0, 1].
class CircleSet {
 public:
  CircleSet() = default;

  // (A / scale) + Z.
  static CircleSet image(const IntervalSet& A, double scale) {
    CircleSet out;
    IntervalSet acc;
    for (const Interval& i : A.intervals()) {
      const double s = i.lo / scale;
      const double t = i.hi / scale;
      if (t - s >= 1.0) {
        out.full_ = true;
        return out;
      }
      const double fl = std::floor(s);
      const double s1 = s - fl;
      const double t1 = t - fl;
      if (t1 <= 1.0) {
        acc.add({s1, std::min(t1, 1.0), i.closed_lo, i.closed_hi});
        if (t1 == 1.0 && i.closed_hi) acc.add({0.0, 0.0, true, true});
      } else {
        acc.add({s1, 1.0, i.closed_lo, false});
        acc.add({0.0, t1 - 1.0, true, i.closed_hi});
      }
    }
    out.pieces_ = acc.intervals();
    // A closed point at 1 is the point 0.
    for (Interval& p : out.pieces_) {
      if (p.lo == 1.0) p = {0.0, 0.0, true, true};
    }
    IntervalSet again;
    for (const Interval& p : out.pieces_) again.add(p);
    out.pieces_ = again.intervals();
    out.wrap_joined_ = !out.pieces_.empty() && out.pieces_.front().lo == 0.0 &&
                       out.pieces_.front().closed_lo && out.pieces_.back().hi == 1.0;
    return out;
  }

  bool full() const { return full_; }
  const std::vector<Interval>& pieces() const { return pieces_; }
  bool contains_zero() const {
    if (full_) return true;
    return !pieces_.empty() && pieces_.front().lo == 0.0 && pieces_.front().closed_lo;
  }
  // The points 0 and 1 are one point of the circle; when pieces meet there
  // it is not a boundary.
  bool wrap_joined() const { return wrap_joined_; }

 private:
  bool full_ = false;
  bool wrap_joined_ = false;
  std::vector<Interval> pieces_;
};

// Counts of sorted values in [0, 1), periodically extended.
class PeriodicCounter {
 public:
  explicit PeriodicCounter(std::vector<double> sorted) : v_(std::move(sorted)) {}

  size_t size() const { return v_.size(); }
  const std::vector<double>& values() const { return v_; }

  // #{(j, m) : lo <(=) v_j + m <(=) hi}.
  int64_t count(double lo, bool lo_incl, double hi, bool hi_incl) const {
    if (hi < lo) return 0;
    int64_t total = 0;
    const int64_t m0 = static_cast<int64_t>(std::floor(lo));
    const int64_t m1 = static_cast<int64_t>(std::floor(hi));
    for (int64_t m = m0; m <= m1; ++m) {
      const double a = lo - static_cast<double>(m);
      const double b = hi - static_cast<double>(m);
      auto first = lo_incl ? std::lower_bound(v_.begin(), v_.end(), a)
                           : std::upper_bound(v_.begin(), v_.end(), a);
      auto last = hi_incl ? std::upper_bound(v_.begin(), v_.end(), b)
                          : std::lower_bound(v_.begin(), v_.end(), b);
      if (last > first) total += last - first;
    }
    return total;
  }

  // Same for the interval [x + off_lo, x + off_hi]. The integer shift is
  // applied to the offsets first so that x + 0 is exactly x.
  int64_t count_around(double x, double off_lo, bool lo_incl, double off_hi, bool hi_incl) const {
    if (off_hi < off_lo) return 0;
    int64_t total = 0;
    const int64_t m0 = static_cast<int64_t>(std::floor(x + off_lo));
    const int64_t m1 = static_cast<int64_t>(std::floor(x + off_hi));
    for (int64_t m = m0 - 1; m <= m1 + 1; ++m) {
      const double a = x + (off_lo - static_cast<double>(m));
      const double b = x + (off_hi - static_cast<double>(m));
      if (b < 0.0 || a >= 1.0) continue;
      auto first = lo_incl ? std::lower_bound(v_.begin(), v_.end(), a)
                           : std::upper_bound(v_.begin(), v_.end(), a);
      auto last = hi_incl ? std::upper_bound(v_.begin(), v_.end(), b)
                          : std::lower_bound(v_.begin(), v_.end(), b);
      if (last > first) total += last - first;
    }
    return total;
  }

  // #{j : circle distance from v_j to x is below g}.
  int64_t near(double x, double g) const { return count(x - g, false, x + g, false); }

 private:
  std::vector<double> v_;
};

struct PairCount {
  int64_t pairs = 0;      // ordered pairs i != j
  int64_t ambiguous = 0;  // differences within the guard band of an endpoint
};

// Ordered pairs (i in I, j in J, i != j) with v_i - v_j in C.
// `self` marks the i that also belong to J (their own value is then in J).
inline PairCount count_circle_pairs(const std::vector<double>& vi, const std::vector<char>& self,
                                    const PeriodicCounter& J, const CircleSet& C,
                                    double guard = kBoundaryGuard) {
  PairCount out;
  if (C.full()) {
    for (size_t i = 0; i < vi.size(); ++i) {
      out.pairs += static_cast<int64_t>(J.size()) - (self[i] ? 1 : 0);
    }
    return out;
  }
  const bool zero = C.contains_zero();
  const auto& pieces = C.pieces();
  for (size_t i = 0; i < vi.size(); ++i) {
    const double x = vi[i];
    for (const Interval& p : pieces) {
      // v_i - v_j in [s, t) <=> v_j in (v_i - t, v_i - s].
      out.pairs += J.count_around(x, -p.hi, p.closed_hi, -p.lo, p.closed_lo);
    }
    if (self[i] && zero) out.pairs -= 1;
    for (size_t k = 0; k < pieces.size(); ++k) {
      const Interval& p = pieces[k];
      const bool skip_lo = p.lo == 0.0 && C.wrap_joined();
      const bool skip_hi = p.hi == 1.0 && C.wrap_joined();
      for (int side = 0; side < 2; ++side) {
        if ((side == 0 && skip_lo) || (side == 1 && skip_hi)) continue;
        const double e = side == 0 ? p.lo : p.hi;
        if (side == 1 && p.hi == p.lo) continue;
        int64_t hits = J.near(x - e, guard);
        // The exact zero difference of i with itself is not ambiguous.
        if (self[i]) {
          double d = std::abs(e - std::round(e));
          if (d < guard) hits -= 1;
        }
        out.ambiguous += hits;
      }
    }
  }
  return out;
}

struct PairCorrelation {
  double value = 0.0;
  int64_t pairs = 0;
  int64_t ambiguous = 0;
  int64_t N = 0;
};

struct CorrelationHistogram {
  std::vector<double> bin_edges;
  std::vector<int64_t> counts;
  int64_t N = 0;
  int64_t ambiguous = 0;

  double density(size_t k) const {
    return static_cast<double>(counts[k]) /
           (static_cast<double>(N) * (bin_edges[k + 1] - bin_edges[k]));
  }
};

namespace detail {

inline PairCorrelation correlate(const std::vector<double>& values, const IntervalSet& A, int64_t N) {
  PairCorrelation out;
  out.N = N;
  if (A.empty() || values.empty()) return out;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  PeriodicCounter J(std::move(sorted));
  std::vector<char> self(values.size(), 1);
  PairCount c = count_circle_pairs(values, self, J, CircleSet::image(A, static_cast<double>(N)));
  out.pairs = c.pairs;
  out.ambiguous = c.ambiguous;
  out.value = static_cast<double>(c.pairs) / static_cast<double>(N);
  return out;
}

}  // namespace detail

// R_2(A) = #{(i, j) : i != j, phi(i) - phi(j) in A/N + Z} / N over the index
// range of `spec` (default 1..N).
inline PairCorrelation pair_correlation(const SequenceSpec& spec, const IntervalSet& A) {
  spec.validate();
  if (spec.N < 2) throw InputError("pair correlation needs N >= 2");
  if (A.empty()) return PairCorrelation{0.0, 0, 0, spec.N};
  return detail::correlate(phi_values(spec).values, A, spec.N);
}

inline CorrelationHistogram pair_correlation_histogram(const SequenceSpec& spec,
                                                       const std::vector<double>& edges) {
  spec.validate();
  if (spec.N < 2) throw InputError("pair correlation needs N >= 2");
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
    throw InputError("histogram needs at least two increasing bin edges");
  ModOnePoints pts = phi_values(spec);
  std::vector<double> sorted = pts.values;
  std::sort(sorted.begin(), sorted.end());
  PeriodicCounter J(std::move(sorted));
  std::vector<char> self(pts.values.size(), 1);
  CorrelationHistogram h;
  h.bin_edges = edges;
  h.N = spec.N;
  for (size_t k = 0; k + 1 < edges.size(); ++k) {
    if (!(edges[k + 1] > edges[k])) throw InputError("histogram bins must have positive width");
    PairCount c = count_circle_pairs(pts.values, self, J,
                                     CircleSet::image(IntervalSet::half_open(edges[k], edges[k + 1]),
                                                      static_cast<double>(spec.N)));
    h.counts.push_back(c.pairs);
    h.ambiguous += c.ambiguous;
  }
  return h;
}

inline std::vector<double> uniform_edges(double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw InputError("need bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (int k = 0; k <= bins; ++k) e[k] = lo + (hi - lo) * k / bins;
  return e;
}

// Integers i with i/N in B, or (i - alpha)/N in B when `shifted`.
inline std::vector<int64_t> index_range(const IntervalSet& B, int64_t N, const ExtendedReal& alpha,
                                        bool shifted) {
  std::vector<int64_t> out;
  const quad a = shifted ? alpha.value_q() : quad(0);
  const quad n = quad(N);
  for (const Interval& iv : B.intervals()) {
    const int64_t lo = static_cast<int64_t>(std::floor(static_cast<double>(quad(iv.lo) * n + a))) - 1;
    const int64_t hi = static_cast<int64_t>(std::ceil(static_cast<double>(quad(iv.hi) * n + a))) + 1;
    for (int64_t i = lo; i <= hi; ++i) {
      const quad x = (quad(i) - a) / n;
      bool in = x > quad(iv.lo) && x < quad(iv.hi);
      if (x == quad(iv.lo)) in = iv.closed_lo;
      if (x == quad(iv.hi)) in = iv.closed_hi;
      if (in) out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// #{(i, j) : i != j, phi(i) - phi(j) in A/N + Z, (i/N, j/N) in B1 x B2} / N,
// with (i - alpha)/N, (j - alpha)/N in place of i/N, j/N when `shifted`.
inline PairCorrelation pair_correlation_general(const SequenceSpec& spec, const IntervalSet& A,
                                                const IntervalSet& B1, const IntervalSet& B2,
                                                bool shifted) {
  if (spec.N < 1) throw InputError("N must be >= 1");
  PairCorrelation out;
  out.N = spec.N;
  if (A.empty()) return out;
  std::vector<int64_t> I = index_range(B1, spec.N, spec.alpha, shifted);
  std::vector<int64_t> J = index_range(B2, spec.N, spec.alpha, shifted);
  if (I.empty() || J.empty()) return out;
  QuadraticPhase phase(spec.alpha, spec.beta, spec.N);
  double worst = 0.0;
  auto value = [&](int64_t n) {
    ReducedPhase r = phase.at(n);
    worst = std::max(worst, r.error);
    return r.value;
  };
  std::vector<double> vi(I.size());
  for (size_t k = 0; k < I.size(); ++k) vi[k] = value(I[k]);
  std::vector<double> vj(J.size());
  for (size_t k = 0; k < J.size(); ++k) vj[k] = value(J[k]);
  if (worst > kPhaseTolerance) {
    throw PrecisionExhausted("phase error bound exceeds 1e-12; raise the working precision");
  }
  std::vector<char> self(I.size(), 0);
  for (size_t k = 0; k < I.size(); ++k) self[k] = std::binary_search(J.begin(), J.end(), I[k]);
  std::sort(vj.begin(), vj.end());
  PeriodicCounter counter(std::move(vj));
  PairCount c = count_circle_pairs(vi, self, counter, CircleSet::image(A, static_cast<double>(spec.N)));
  out.pairs = c.pairs;
  out.ambiguous = c.ambiguous;
  out.value = static_cast<double>(c.pairs) / static_cast<double>(spec.N);
  return out;
}

struct GapSample {
  std::vector<double> sorted_values;
  std::vector<double> scaled_gaps;  // N (theta_j - theta_{j-1}), theta_0 = theta_N - 1
  bool wraparound = true;
  int64_t N = 0;

  // Fraction of scaled gaps <= s.
  double cdf(double s) const {
    std::vector<double> g = scaled_gaps;
    std::sort(g.begin(), g.end());
    return static_cast<double>(std::upper_bound(g.begin(), g.end(), s) - g.begin()) /
           static_cast<double>(g.size());
  }
};

inline GapSample gap_distribution(const SequenceSpec& spec) {
  spec.validate();
  ModOnePoints pts = phi_values(spec);
  GapSample out;
  out.N = static_cast<int64_t>(pts.values.size());
  out.sorted_values = std::move(pts.values);
  std::sort(out.sorted_values.begin(), out.sorted_values.end());
  const size_t n = out.sorted_values.size();
  out.scaled_gaps.resize(n);
  const double scale = static_cast<double>(n);
  for (size_t j = 0; j < n; ++j) {
    const double prev = j == 0 ? out.sorted_values[n - 1] - 1.0 : out.sorted_values[j - 1];
    out.scaled_gaps[j] = scale * (out.sorted_values[j] - prev);
  }
  return out;
}

// Empirical CDF of the scaled gaps on a grid.
inline std::vector<std::pair<double, double>> gap_cdf(const GapSample& g, const std::vector<double>& grid) {
  std::vector<double> s = g.scaled_gaps;
  std::sort(s.begin(), s.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double x : grid) {
    double f = static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) /
               static_cast<double>(s.size());
    out.emplace_back(x, f);
  }
  return out;
}

// sup over [lo, hi] of |F_emp - F| with F continuous and increasing.
inline double gap_cdf_distance(const GapSample& g, const std::function<double(double)>& F,
                               double lo = 0.0, double hi = 6.0) {
  std::vector<double> s = g.scaled_gaps;
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  auto emp_right = [&](double x) {
    return static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) / n;
  };
  auto emp_left = [&](double x) {
    return static_cast<double>(std::lower_bound(s.begin(), s.end(), x) - s.begin()) / n;
  };
  double d = std::max(std::abs(emp_right(lo) - F(lo)), std::abs(emp_left(hi) - F(hi)));
  d = std::max(d, std::abs(emp_right(hi) - F(hi)));
  auto first = std::lower_bound(s.begin(), s.end(), lo);
  auto last = std::upper_bound(s.begin(), s.end(), hi);
  for (auto it = first; it != last; ++it) {
    const double x = *it;
    const double fx = F(x);
    d = std::max(d, std::abs(emp_left(x) - fx));
    d = std::max(d, std::abs(emp_right(x) - fx));
  }
  return d;
}

// Histogram of scaled gaps; density = count / (N * width).
inline CorrelationHistogram gap_histogram(const GapSample& g, const std::vector<double>& edges) {
  CorrelationHistogram h;
  h.bin_edges = edges;
  h.N = g.N;
  h.counts.assign(edges.size() - 1, 0);
  for (double x : g.scaled_gaps) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    if (it == edges.begin() || it == edges.end()) continue;
    h.counts[static_cast<size_t>(it - edges.begin()) - 1] += 1;
  }
  return h;
}

}  // namespace modone
