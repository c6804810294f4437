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
#include <map>
#include <mutex>
#include <random>
#include <vector>

#include "modone/core.hpp"
#include "modone/group.hpp"
#include "modone/numtheory.hpp"
#include "modone/test_function.hpp"

namespace modone {

// (tau = x + i y, phi; xi). Coordinates are binary128 so that phases
// 1/2 (n - xi2)^2 x + n xi1 keep full double accuracy after reduction mod 1.
struct ThetaPoint {
  quad x = 0;
  quad y = 1;
  double phi = 0.0;
  quad xi1 = 0;
  quad xi2 = 0;

  static ThetaPoint make(double x, double y, double phi, double xi1, double xi2) {
    if (!(y > 0)) throw InputError("theta point needs Im tau > 0");
    return {quad(x), quad(y), phi, quad(xi1), quad(xi2)};
  }
};

inline quad sqrt_q(quad v) {
  if (v <= 0) return 0;
  quad s = std::sqrt(static_cast<double>(v));
  s = (s + v / s) / 2;
  s = (s + v / s) / 2;
  return s;
}

// ((a, b), (c, d)) in SL(2, Z) with translation (ab/2, cd/2) + m.
struct GammaTilde {
  int64_t a = 1;
  int64_t b = 0;
  int64_t c = 0;
  int64_t d = 1;
  int64_t m1 = 0;
  int64_t m2 = 0;

  void validate() const {
    i128 det = static_cast<i128>(a) * d - static_cast<i128>(b) * c;
    if (det != 1) throw InputError("Gamma-tilde element needs determinant 1");
  }
  GammaTilde operator*(const GammaTilde& o) const {
    // Translation of the product: M v' + v, recomputed with the
    // (ab/2, cd/2) normalization of the product matrix.
    GammaTilde p;
    p.a = a * o.a + b * o.c;
    p.b = a * o.b + b * o.d;
    p.c = c * o.a + d * o.c;
    p.d = c * o.b + d * o.d;
    // Twice the translations are integers.
    i128 v1 = static_cast<i128>(a) * (static_cast<i128>(o.a) * o.b + 2 * o.m1) +
              static_cast<i128>(b) * (static_cast<i128>(o.c) * o.d + 2 * o.m2) +
              static_cast<i128>(a) * b + 2 * static_cast<i128>(m1);
    i128 v2 = static_cast<i128>(c) * (static_cast<i128>(o.a) * o.b + 2 * o.m1) +
              static_cast<i128>(d) * (static_cast<i128>(o.c) * o.d + 2 * o.m2) +
              static_cast<i128>(c) * d + 2 * static_cast<i128>(m2);
    i128 r1 = v1 - static_cast<i128>(p.a) * p.b;
    i128 r2 = v2 - static_cast<i128>(p.c) * p.d;
    if (r1 % 2 != 0 || r2 % 2 != 0)
      throw InputError("product leaves Gamma-tilde (parity mismatch)");
    p.m1 = static_cast<int64_t>(r1 / 2);
    p.m2 = static_cast<int64_t>(r2 / 2);
    return p;
  }
};

inline ThetaPoint gamma_tilde_apply(const GammaTilde& g, const ThetaPoint& p) {
  const quad a = g.a, b = g.b, c = g.c, d = g.d;
  const quad nr = a * p.x + b, ni = a * p.y;
  const quad dr = c * p.x + d, di = c * p.y;
  const quad den = dr * dr + di * di;
  ThetaPoint out;
  out.x = (nr * dr + ni * di) / den;
  out.y = (ni * dr - nr * di) / den;
  double phi = p.phi + std::atan2(static_cast<double>(di), static_cast<double>(dr));
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0) phi += kTwoPi;
  out.phi = phi;
  out.xi1 = a * p.xi1 + b * p.xi2 + a * b / 2 + quad(g.m1);
  out.xi2 = c * p.xi1 + d * p.xi2 + c * d / 2 + quad(g.m2);
  return out;
}

struct ThetaOptions {
  double term_tolerance = 1e-13;
  int64_t max_terms = 50'000'000;
};

// Theta sum with an already transformed f_phi.
inline cplx theta_sum_transformed(const TestFunction& f_phi, const ThetaPoint& p,
                                  const ThetaOptions& opt = {}) {
  const quad sy = sqrt_q(p.y);
  const double y4 = std::sqrt(static_cast<double>(sy));
  Window w = f_phi.support_window(opt.term_tolerance / std::max(1.0, y4));
  if (w.width() <= 0 && !w.compact) return 0.0;
  const quad lo = p.xi2 + quad(w.lo) / sy;
  const quad hi = p.xi2 + quad(w.hi) / sy;
  const int64_t n_lo = static_cast<int64_t>(floor_q(lo));
  const int64_t n_hi = static_cast<int64_t>(floor_q(hi)) + 1;
  if (n_hi - n_lo > opt.max_terms) {
    throw InputError("theta sum needs more than " + std::to_string(opt.max_terms) +
                     " terms at this point (y too small)");
  }
  cplx acc = 0.0;
  for (int64_t n = n_lo; n <= n_hi; ++n) {
    const quad t = quad(n) - p.xi2;
    const double arg = static_cast<double>(t * sy);
    const cplx fv = f_phi(arg);
    if (fv == 0.0) continue;
    const quad ph = frac_q(t * t * p.x / 2 + quad(n) * p.xi1);
    acc += fv * unit_phase(static_cast<double>(ph));
  }
  return y4 * acc;
}

// Caches f_phi per angle so that repeated sums at related points reuse the
// quadrature nodes and decay windows.
class ThetaEvaluator {
 public:
  explicit ThetaEvaluator(TestFunction f, ThetaOptions opt = {}) : f_(std::move(f)), opt_(opt) {}

  const TestFunction& transformed(double phi) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(phi);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(phi, f_.apply_u_phi(phi)).first->second;
  }

  cplx operator()(const ThetaPoint& p) const { return theta_sum_transformed(transformed(p.phi), p, opt_); }
  const TestFunction& base() const { return f_; }

 private:
  TestFunction f_;
  ThetaOptions opt_;
  mutable std::mutex mu_;
  mutable std::map<double, TestFunction> cache_;
};

// y^{1/4} sum_n f_phi((n - xi2) y^{1/2}) e(1/2 (n - xi2)^2 x + n xi1).
inline cplx theta_sum(const TestFunction& f, const ThetaPoint& p, const ThetaOptions& opt = {}) {
  return theta_sum_transformed(f.apply_u_phi(p.phi), p, opt);
}

inline cplx theta_cross(const TestFunction& f, const TestFunction& g, const ThetaPoint& p,
                        const ThetaOptions& opt = {}) {
  return theta_sum(f, p, opt) * std::conj(theta_sum(g, p, opt));
}

// sup_x (1 + |x|)^A |f(x)|, by dense sampling of the decay window with local
// refinement around the largest samples.
inline double weighted_sup(const TestFunction& f, double A) {
  Window w = f.support_window(1e-14);
  if (w.width() <= 0) return 0.0;
  double lo = w.lo;
  double hi = w.hi;
  if (!w.compact) {
    // Extend until the weight no longer lifts the tail above the bulk.
    double ext = 0.5 * (hi - lo);
    lo -= ext;
    hi += ext;
  }
  const int n = std::clamp(static_cast<int>((hi - lo) * (8.0 + 8.0 * f.impl()->envelope_frequency())) + 2001, 2001, 400001);
  const double step = (hi - lo) / (n - 1);
  auto g = [&](double x) { return std::pow(1.0 + std::abs(x), A) * std::abs(f(x)); };
  std::vector<std::pair<double, double>> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    double x = lo + step * i;
    samples.emplace_back(g(x), x);
  }
  std::partial_sort(samples.begin(), samples.begin() + std::min<size_t>(8, samples.size()),
                    samples.end(), std::greater<>());
  double best = samples.front().first;
  for (size_t k = 0; k < std::min<size_t>(8, samples.size()); ++k) {
    double x0 = samples[k].second;
    for (int i = -50; i <= 50; ++i) best = std::max(best, g(x0 + step * i / 50.0));
  }
  return best;
}

struct CuspApproximation {
  double main = 0.0;
  double error_bound = 0.0;
  int64_t m0 = 0;
  double sup_constant = 0.0;  // sup (1 + |x|)^A |f_phi(x)|, squared gives C_{A,f_phi}
};

// Nearest integer to v; an exact half goes to the even neighbour.
inline int64_t nearest_integer_even(quad v) {
  quad fl = floor_q(v);
  quad diff = v - fl;
  int64_t base = static_cast<int64_t>(fl);
  if (diff < quad(0.5)) return base;
  if (diff > quad(0.5)) return base + 1;
  return (base % 2 == 0) ? base : base + 1;
}

// main = y^{1/2} |f_phi(y^{1/2}(m0 - xi2))|^2 with an explicit bound on
// ||Theta|^2 - main|: with |f_phi(x)| <= S (1 + |x|)^{-A}, the remaining terms
// sum to at most R = 2 S [(1 + s/2)^{-A} + (1 + s/2)^{1-A} / (s (A - 1))],
// s = y^{1/2}, and ||Theta|^2 - main| <= s (2 |T0| R + R^2).
// A positive `sup` skips the scan for S (pass weighted_sup(f_phi, A)).
inline CuspApproximation theta_cusp_approx(const TestFunction& f, const ThetaPoint& p, double A,
                                           double sup = -1.0) {
  if (!(A > 1)) throw InputError("cusp approximation needs A > 1");
  if (static_cast<double>(p.y) < 0.5) throw InputError("cusp approximation needs y >= 1/2");
  TestFunction fphi = f.apply_u_phi(p.phi);
  CuspApproximation out;
  out.m0 = nearest_integer_even(p.xi2);
  const double s = static_cast<double>(sqrt_q(p.y));
  const cplx t0 = fphi(static_cast<double>((quad(out.m0) - p.xi2) * sqrt_q(p.y)));
  out.main = s * std::norm(t0);
  out.sup_constant = (sup > 0 ? sup : weighted_sup(fphi, A)) * (1.0 + 1e-6);
  const double S = out.sup_constant;
  const double R = 2.0 * S * (std::pow(1.0 + s / 2.0, -A) + std::pow(1.0 + s / 2.0, 1.0 - A) / (s * (A - 1.0)));
  out.error_bound = s * (2.0 * std::abs(t0) * R + R * R);
  return out;
}

struct CuspLift {
  ThetaPoint point;     // (a/n' + i sigma^2, pi/2, (b alpha, -k alpha_sigma))
  GammaTilde element;   // maps the original point to `point` up to integer xi shifts
  BezoutSolution bezout;
};

// For n' = N / sigma and gcd(k, n') = 1, the point (k/n' + i/N^2, 0, (0, alpha))
// is carried by gamma = ((a, b), (n', -k)), a k + b n' = -1, to
// (a/n' + sigma^2 i, pi/2, (b alpha, -k alpha)) when n' is even (b even) and to
// (a/n' + sigma^2 i, pi/2, (b alpha, -k (alpha + 1/2))) when n' is odd (a even).
inline CuspLift cusp_lift(int64_t k, int64_t N, int64_t sigma, quad alpha,
                          const BezoutSolution* override_bezout = nullptr) {
  if (sigma < 1 || N % sigma != 0) throw InputError("cusp_lift needs sigma | N");
  const int64_t np = N / sigma;
  const bool even = np % 2 == 0;
  BezoutSolution bz = override_bezout ? *override_bezout
                                      : bezout_with_parity(k, np, even ? Parity::b_even : Parity::a_even);
  if (!is_valid_bezout(bz.a, bz.b, k, np, even ? Parity::b_even : Parity::a_even))
    throw InputError("cusp_lift: Bezout pair does not satisfy the parity constraint");
  CuspLift out;
  out.bezout = bz;
  out.element = GammaTilde{bz.a, bz.b, np, -k, 0, 0};
  out.point.x = quad(bz.a) / quad(np);
  out.point.y = quad(sigma) * quad(sigma);
  out.point.phi = kPi / 2;
  out.point.xi1 = quad(bz.b) * alpha;
  out.point.xi2 = even ? -quad(k) * alpha : -quad(k) * (alpha + quad(0.5));
  return out;
}

inline ThetaPoint q_n_point(int64_t k, int64_t N, quad alpha) {
  ThetaPoint p;
  p.x = quad(k) / quad(N);
  p.y = 1 / (quad(N) * quad(N));
  p.phi = 0.0;
  p.xi1 = 0;
  p.xi2 = alpha;
  return p;
}

// Random SL(2, Z) element with entries bounded by `bound`, translation parts in (-5, 5).
inline GammaTilde random_gamma_tilde(std::mt19937_64& rng, int64_t bound) {
  if (bound < 1) throw InputError("random_gamma_tilde needs bound >= 1");
  std::uniform_int_distribution<int64_t> u(-bound, bound);
  for (;;) {
    const int64_t a = u(rng);
    const int64_t c = u(rng);
    if (std::gcd(a, c) != 1) continue;
    int64_t b = 0;
    int64_t d = 0;
    if (c == 0) {
      d = a;  // a = +-1
      b = u(rng);
    } else {
      d = mod_inverse(mod_floor(a, std::abs(c)), std::abs(c)) * (c > 0 ? 1 : -1);
      if (std::abs(c) == 1) d = 0;
      while ((a * d - 1) % c != 0) d += 1;
      b = (a * d - 1) / c;
      const int64_t t = u(rng) % 3;
      b += t * a;
      d += t * c;
    }
    if (std::abs(b) > bound || std::abs(d) > bound) continue;
    GammaTilde g{a, b, c, d, u(rng) % 5, u(rng) % 5};
    if (a * d - b * c != 1) continue;
    return g;
  }
}

struct ThetaVerifyReport {
  int points = 0;
  int elements = 0;
  int checked = 0;                   // pairs actually compared
  double max_invariance_dev = 0.0;   // max ||Theta(g p)|^2 - |Theta(p)|^2| / max(|Theta(p)|^2, 1e-3)
  double torus_integral = 0.0;       // midpoint rule over a 64 x 64 xi grid
  double l2_norm_sq = 0.0;
  double max_unitarity_dev = 0.0;    // max | ||U^phi f|| - ||f|| | over the four test angles
  int cusp_checked = 0;
  int cusp_violations = 0;           // grid points where the bound fails
};

// Invariance of |Theta_f|^2 at random points under random Gamma-tilde
// elements, the xi-torus integral, unitarity of U^phi and the cusp bound.
// Points whose image lands within the singular angle band are skipped unless
// f is Gaussian (exact U^phi there).
inline ThetaVerifyReport theta_verify(const TestFunction& f, int points, int elements, uint64_t seed,
                                      int64_t entry_bound = 20) {
  if (points < 1 || elements < 1) throw InputError("theta_verify needs at least one point and element");
  ThetaVerifyReport r;
  r.points = points;
  r.elements = elements;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ThetaEvaluator theta(f);
  for (int i = 0; i < points; ++i) {
    const ThetaPoint p = ThetaPoint::make(2 * u(rng) - 1, 0.3 + 1.5 * u(rng), 0.2 + 2.7 * u(rng), u(rng), u(rng));
    const double base = std::norm(theta(p));
    for (int j = 0; j < elements; ++j) {
      const ThetaPoint q = gamma_tilde_apply(random_gamma_tilde(rng, entry_bound), p);
      if (f.kind() != "gaussian" && std::abs(std::sin(q.phi)) < std::sin(kSingularAngleBand)) continue;
      if (static_cast<double>(q.y) < 1e-4) continue;
      const double moved = std::norm(theta(q));
      r.max_invariance_dev = std::max(r.max_invariance_dev, std::abs(moved - base) / std::max(base, 1e-3));
      ++r.checked;
    }
  }
  const int n = 64;
  double acc = 0.0;
  const double x = 2 * u(rng) - 1;
  const double y = 0.5 + u(rng);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) acc += std::norm(theta(ThetaPoint::make(x, y, 0.9, (i + 0.5) / n, (j + 0.5) / n)));
  }
  r.torus_integral = acc / (double(n) * n);
  r.l2_norm_sq = f.l2_norm_sq();
  const double norm = std::sqrt(r.l2_norm_sq);
  for (double phi : {kPi / 6, kPi / 4, kPi / 3, kPi / 2}) {
    r.max_unitarity_dev = std::max(r.max_unitarity_dev, std::abs(std::sqrt(f.apply_u_phi(phi).l2_norm_sq()) - norm));
  }
  for (double phi : {0.0, kPi / 2}) {
    const double sup = weighted_sup(f.apply_u_phi(phi), 2.0);
    for (double yy : {0.5, 0.8, 2.0, 10.0, 100.0, 1e3, 1e4}) {
      for (double xi2 : {0.0, 0.23, 0.5, 0.81}) {
        const ThetaPoint p = ThetaPoint::make(0.37, yy, phi, 0.61, xi2);
        const CuspApproximation c = theta_cusp_approx(f, p, 2.0, sup);
        ++r.cusp_checked;
        if (std::abs(std::norm(theta(p)) - c.main) > c.error_bound) ++r.cusp_violations;
      }
    }
  }
  return r;
}

}  // namespace modone
