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

#include <boost/random/sobol.hpp>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "modone/core.hpp"
#include "modone/extended_real.hpp"
#include "modone/group.hpp"
#include "modone/numtheory.hpp"
#include "modone/parallel.hpp"
#include "modone/test_function.hpp"
#include "modone/theta.hpp"

namespace modone {

// Point of H(Z)\H(R) in coordinates (u, xi1, xi2) for the matrix
// [[1, u, xi1], [0, 1, xi2], [0, 0, 1]], with an optional fiber v.
struct HeisenbergPoint {
  double u = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double v = 0.0;
};

namespace detail {

inline double unit_frac(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

inline double unit_frac(quad x) {
  double r = static_cast<double>(x - floor_q(x));
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace detail

// Left multiplication by the integer element (m, (p, q)).
inline HeisenbergPoint heisenberg_act(int64_t m, int64_t p, int64_t q, const HeisenbergPoint& h) {
  HeisenbergPoint out = h;
  out.u = h.u + static_cast<double>(m);
  out.xi1 = h.xi1 + static_cast<double>(m) * h.xi2 + static_cast<double>(p);
  out.xi2 = h.xi2 + static_cast<double>(q);
  return out;
}

// Representative in [0,1)^3.
inline HeisenbergPoint heisenberg_reduce(double u, double xi1, double xi2, double v = 0.0) {
  const double m = -std::floor(u);
  HeisenbergPoint out;
  out.v = v;
  out.u = detail::unit_frac(u);
  out.xi2 = detail::unit_frac(xi2);
  out.xi1 = detail::unit_frac(xi1 + m * xi2);
  return out;
}

inline HeisenbergPoint heisenberg_reduce(const HeisenbergPoint& h) {
  return heisenberg_reduce(h.u, h.xi1, h.xi2, h.v);
}

// Quad-precision entry point for coordinates with large integer parts.
inline HeisenbergPoint heisenberg_reduce_q(quad u, quad xi1, quad xi2, double v = 0.0) {
  const quad m = -floor_q(u);
  HeisenbergPoint out;
  out.v = v;
  out.u = detail::unit_frac(u);
  out.xi2 = detail::unit_frac(xi2);
  out.xi1 = detail::unit_frac(xi1 + m * xi2);
  return out;
}

struct SectionCoords {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

// g = n_plus(u) a(v) n_minus(w) read off from the entries:
// u = beta/delta, v = 1/delta, w = gamma/delta. Empty when delta <= 0 or
// the point is outside v0 <= v <= v1, |w| <= eps.
inline std::optional<SectionCoords> section_coords(const Mat2& g, double eps, double v0, double v1) {
  if (!(g.d > 0)) return std::nullopt;
  SectionCoords s{g.b / g.d, 1.0 / g.d, g.c / g.d};
  if (s.v < v0 || s.v > v1 || std::abs(s.w) > eps) return std::nullopt;
  return s;
}

inline std::optional<SectionCoords> section_coords(const GroupElement& p, double eps, double v0, double v1) {
  return section_coords(p.g, eps, v0, v1);
}

inline Mat2 from_section(double u, double v, double w) { return n_plus(u) * a_diag(v) * n_minus(w); }

// (x, y, phi) with n_plus(x) a(sqrt y) r(phi) = n_plus(u) a(v) n_minus(w).
inline IwasawaCoords section_to_iwasawa(double u, double v, double w) {
  const double s = 1.0 + w * w;
  IwasawaCoords out;
  out.x = u + w * v * v / s;
  out.y = v * v / s;
  out.phi = std::atan(w);
  return out;
}

// a(1/M) r(-pi/2) n_minus(x) = [[x/M, 1/M], [-M, 0]].
inline Mat2 horocycle_matrix(double M, double x) { return {x / M, 1.0 / M, -M, 0.0}; }

struct SectionPoint {
  int64_t c = 0;
  int64_t d = 0;
  int64_t a = 0;
  int64_t b = 0;
  double u = 0.0;         // a/c
  double v = 0.0;         // M/c
  double x_center = 0.0;  // M^2 d/c
  double w_lo = 0.0;      // admissible w within the x range
  double w_hi = 0.0;
  HeisenbergPoint point;  // reduced (u, [[a,b],[c,d]] eta) with fiber v
};

// a, b with a d - b c = 1 for c >= 1, gcd(c, d) = 1, 0 <= a < c.
inline std::pair<int64_t, int64_t> complete_bottom_row(int64_t c, int64_t d) {
  if (c < 1 || std::gcd(c, d) != 1) throw InputError("bottom row needs c >= 1 and gcd(c, d) = 1");
  const int64_t a = mod_inverse(mod_floor(d, c), c);
  const i128 num = static_cast<i128>(a) * d - 1;
  return {a, static_cast<int64_t>(num / c)};
}

// Reduced Heisenberg point attached to [[a,b],[c,d]] acting on eta.
inline HeisenbergPoint attached_point(int64_t a, int64_t b, int64_t c, int64_t d, quad eta1, quad eta2, double v) {
  const quad xi1 = quad(a) * eta1 + quad(b) * eta2;
  const quad xi2 = quad(c) * eta1 + quad(d) * eta2;
  return heisenberg_reduce_q(quad(a) / quad(c), xi1, xi2, v);
}

// All coprime (c, d) with v0 <= M/c <= v1 whose x-interval
// [M^2 d/c - eps, M^2 d/c + eps] meets [x_lo, x_hi], ordered by x_center.
inline std::vector<SectionPoint> horocycle_section_hits(double M, double eta1, double eta2, double v0, double v1,
                                                        double eps, double x_lo, double x_hi) {
  if (!(M > 0)) throw InputError("M must be positive");
  if (!(v0 >= 0.25 && v0 < v1)) throw InputError("section needs 1/4 <= v0 < v1");
  if (!(eps > 0 && eps < 1.0 / 32)) throw InputError("thickening needs 0 < eps < 1/32");
  if (!(x_lo <= x_hi)) throw InputError("empty x range");
  std::vector<SectionPoint> out;
  if (M / v0 < 1.0) return out;
  const int64_t c_lo = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(M / v1)) - 1);
  const int64_t c_hi = static_cast<int64_t>(std::floor(M / v0)) + 1;
  const double M2 = M * M;
  for (int64_t c = c_lo; c <= c_hi; ++c) {
    const double v = M / static_cast<double>(c);
    if (v < v0 || v > v1) continue;
    const int64_t d_lo = static_cast<int64_t>(std::floor((x_lo - eps) * c / M2)) - 1;
    const int64_t d_hi = static_cast<int64_t>(std::ceil((x_hi + eps) * c / M2)) + 1;
    for (int64_t d = d_lo; d <= d_hi; ++d) {
      if (std::gcd(c, d) != 1) continue;
      const double xc = M2 * static_cast<double>(d) / static_cast<double>(c);
      const double lo = std::max(x_lo, xc - eps);
      const double hi = std::min(x_hi, xc + eps);
      if (lo > hi) continue;
      auto [a, b] = complete_bottom_row(c, d);
      SectionPoint s;
      s.c = c;
      s.d = d;
      s.a = a;
      s.b = b;
      s.u = static_cast<double>(a) / static_cast<double>(c);
      s.v = v;
      s.x_center = xc;
      s.w_lo = lo - xc;
      s.w_hi = hi - xc;
      s.point = attached_point(a, b, c, d, quad(eta1), quad(eta2), v);
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end(), [](const SectionPoint& p, const SectionPoint& q) { return p.x_center < q.x_center; });
  return out;
}

// Real trigonometric polynomial a0 + sum_k (cos_k cos 2 pi k t + sin_k sin 2 pi k t).
struct TrigPoly {
  double a0 = 1.0;
  std::vector<double> cos_k;
  std::vector<double> sin_k;

  double operator()(double t) const {
    double s = a0;
    for (size_t k = 0; k < cos_k.size(); ++k) s += cos_k[k] * std::cos(kTwoPi * (k + 1) * t);
    for (size_t k = 0; k < sin_k.size(); ++k) s += sin_k[k] * std::sin(kTwoPi * (k + 1) * t);
    return s;
  }
  double mean() const { return a0; }
};

// Weight in the fiber variable v: a smooth compactly supported function,
// the indicator of [lo, hi], or absent (constant 1).
struct FiberWeight {
  std::optional<TestFunction> smooth;
  double lo = 0.0;
  double hi = INFINITY;

  static FiberWeight absent() { return {}; }
  static FiberWeight indicator(double lo, double hi) { return {std::nullopt, lo, hi}; }
  static FiberWeight smooth_weight(const TestFunction& f) {
    if (!f.compact()) throw InputError("fiber weight must be compactly supported");
    Window w = f.support_window(0.0);
    return {f, w.lo, w.hi};
  }
  double operator()(double v) const {
    if (smooth) return smooth->real(v);
    return (v >= lo && v <= hi) ? 1.0 : 0.0;
  }
  bool bounded() const { return std::isfinite(hi); }
  // int w(v) v^-3 dv.
  double moment() const {
    if (!bounded()) throw InputError("fiber weight has unbounded support");
    if (lo <= 0) throw InputError("fiber weight support must stay away from v = 0");
    if (!smooth) return 0.5 * (1.0 / (lo * lo) - 1.0 / (hi * hi));
    const TestFunction& f = *smooth;
    return integrate([&](double v) { return f.real(v) / (v * v * v); }, lo, hi, 64);
  }
};

// Function f(v, u, xi) on (0, inf) x H(Z)\H(R). Only kinds that are
// invariant under the integer Heisenberg group are constructible.
class TestObservable {
 public:
  enum class Kind { constant, separable, theta_modulus };

  static TestObservable constant(double value, FiberWeight w = FiberWeight::absent()) {
    TestObservable o(Kind::constant, std::move(w));
    o.value_ = value;
    o.check_invariance();
    return o;
  }
  // w(v) g(u) h(xi2).
  static TestObservable separable(FiberWeight w, TrigPoly g_u, TrigPoly h_xi2) {
    TestObservable o(Kind::separable, std::move(w));
    o.g_ = std::move(g_u);
    o.h_ = std::move(h_xi2);
    o.check_invariance();
    return o;
  }
  // w(v) |Theta_f(u + i v^2, 0, (xi1 + u/2, xi2))|^2. The u/2 shift makes
  // the modulus invariant under (1, (0, 0)) as well as the half-shifted
  // generator of the theta group.
  static TestObservable theta_modulus(const TestFunction& f, FiberWeight w = FiberWeight::absent(),
                                      double v_default = 1.0) {
    TestObservable o(Kind::theta_modulus, std::move(w));
    o.theta_ = std::make_shared<ThetaEvaluator>(f);
    o.theta_->transformed(0.0);
    o.v_default_ = v_default;
    o.norm_sq_ = f.l2_norm_sq();
    o.check_invariance();
    return o;
  }

  Kind kind() const { return kind_; }
  const FiberWeight& fiber() const { return w_; }

  // Value on the quotient at fiber v (v <= 0 means the default fiber).
  double on_quotient(const HeisenbergPoint& h) const {
    switch (kind_) {
      case Kind::constant:
        return value_;
      case Kind::separable:
        return g_(h.u) * h_(h.xi2);
      case Kind::theta_modulus: {
        const double v = h.v > 0 ? h.v : v_default_;
        ThetaPoint p = ThetaPoint::make(h.u, v * v, 0.0, h.xi1 + 0.5 * h.u, h.xi2);
        return std::norm((*theta_)(p));
      }
    }
    return 0.0;
  }
  double operator()(const HeisenbergPoint& h) const {
    const double wv = h.v > 0 ? w_(h.v) : 1.0;
    return wv == 0.0 ? 0.0 : wv * on_quotient(h);
  }

  // int f(v, .) d mu_H at fiber v.
  double haar_integral(double v = 0.0, int qmc_log2 = 16) const {
    switch (kind_) {
      case Kind::constant:
        return value_;
      case Kind::separable:
        return g_.mean() * h_.mean();
      case Kind::theta_modulus:
        return qmc_quotient_integral(v, qmc_log2);
    }
    return 0.0;
  }

  // ||f||_2^2 of the theta kind's window function.
  double theta_norm_sq() const { return norm_sq_; }

  std::string descriptor() const {
    std::string k = kind_ == Kind::constant ? "constant" : kind_ == Kind::separable ? "separable" : "theta_modulus";
    if (w_.bounded()) k += " v in [" + std::to_string(w_.lo) + ", " + std::to_string(w_.hi) + "]";
    return k;
  }

  // Largest deviation |f(gamma h) - f(h)| over `points` random points and
  // `elements` random integer Heisenberg elements.
  double invariance_defect(int points, int elements, uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> small(-5, 5);
    std::vector<std::array<int64_t, 3>> els;
    for (int e = 0; e < elements; ++e) els.push_back({small(rng), small(rng), small(rng)});
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
      HeisenbergPoint h{unit(rng), unit(rng), unit(rng), 0.25 + 1.75 * unit(rng)};
      const double base = on_quotient(h);
      for (const auto& g : els) {
        const double moved = on_quotient(heisenberg_act(g[0], g[1], g[2], h));
        worst = std::max(worst, std::abs(moved - base) / std::max(1.0, std::abs(base)));
      }
    }
    return worst;
  }

 private:
  TestObservable(Kind k, FiberWeight w) : kind_(k), w_(std::move(w)) {}

  void check_invariance() const {
    const double defect = invariance_defect(24, 4, 0x5eed);
    if (defect > 1e-10) {
      throw InputError("observable is not invariant under the integer Heisenberg group (defect " +
                       std::to_string(defect) + ")");
    }
  }

  // Sobol points over [0,1)^3, fixed sequence so results are reproducible.
  double qmc_quotient_integral(double v, int log2n) const {
    const int64_t n = int64_t{1} << log2n;
    boost::random::sobol gen(3);
    gen.discard(3);  // skip the origin
    std::vector<HeisenbergPoint> pts(static_cast<size_t>(n));
    const double scale = std::ldexp(1.0, -64);
    for (int64_t i = 0; i < n; ++i) {
      const double a = static_cast<double>(gen()) * scale;
      const double b = static_cast<double>(gen()) * scale;
      const double c = static_cast<double>(gen()) * scale;
      pts[static_cast<size_t>(i)] = {a, b, c, v};
    }
    std::vector<double> vals = parallel_map<double>(n, [&](int64_t i) { return on_quotient(pts[static_cast<size_t>(i)]); });
    return ordered_sum(vals) / static_cast<double>(n);
  }

  Kind kind_;
  FiberWeight w_;
  double value_ = 1.0;
  TrigPoly g_;
  TrigPoly h_;
  std::shared_ptr<ThetaEvaluator> theta_;
  double v_default_ = 1.0;
  double norm_sq_ = 0.0;
};

struct EquidistributionResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
  int64_t terms = 0;
  std::string observable;
};

// (1/M^2) sum_{(c,d)=1} nu(d/c) f(M/c, a/c, [[a,b],[c,d]] eta), with nu(-d/c)
// in place of nu(d/c) when `reflect_nu` is set.
inline EquidistributionResult equidist_lhs(double M, double eta1, double eta2, const TestFunction& nu,
                                           const TestObservable& f, bool reflect_nu = false) {
  if (!(M > 0)) throw InputError("M must be positive");
  if (!nu.compact()) throw InputError("nu must be compactly supported");
  if (!f.fiber().bounded()) throw InputError("observable needs compact support in v");
  EquidistributionResult out;
  out.observable = f.descriptor();
  const double vlo = std::max(f.fiber().lo, 1e-300);
  const double vhi = f.fiber().hi;
  if (vlo > M) return out;
  Window nw = nu.support_window(0.0);
  const int64_t c_lo = std::max<int64_t>(1, static_cast<int64_t>(std::floor(M / vhi)));
  const int64_t c_hi = static_cast<int64_t>(std::ceil(M / vlo));
  const quad e1 = quad(eta1);
  const quad e2 = quad(eta2);
  struct Row {
    double sum = 0.0;
    int64_t terms = 0;
  };
  std::vector<Row> rows = parallel_map<Row>(c_hi - c_lo + 1, [&](int64_t i) {
    Row r;
    const int64_t c = c_lo + i;
    const double v = M / static_cast<double>(c);
    const double wv = f.fiber()(v);
    if (wv == 0.0) return r;
    const double cd = static_cast<double>(c);
    const int64_t d_lo = static_cast<int64_t>(std::floor((reflect_nu ? -nw.hi : nw.lo) * cd));
    const int64_t d_hi = static_cast<int64_t>(std::ceil((reflect_nu ? -nw.lo : nw.hi) * cd));
    for (int64_t d = d_lo; d <= d_hi; ++d) {
      if (std::gcd(c, d) != 1) continue;
      const double t = static_cast<double>(d) / cd;
      const double nv = nu.real(reflect_nu ? -t : t);
      if (nv == 0.0) continue;
      auto [a, b] = complete_bottom_row(c, d);
      HeisenbergPoint h = attached_point(a, b, c, d, e1, e2, v);
      r.sum += nv * wv * f.on_quotient(h);
      ++r.terms;
    }
    return r;
  });
  for (const Row& r : rows) {
    out.lhs += r.sum;
    out.terms += r.terms;
  }
  out.lhs /= M * M;
  return out;
}

// (6/pi^2) nu^(0) int int f(v, u, xi) v^-3 d mu_H dv.
inline double equidist_rhs(const TestFunction& nu, const TestObservable& f) {
  const double nu0 = nu.integral().real();
  const double c = 6.0 / (kPi * kPi) * nu0;
  if (f.kind() != TestObservable::Kind::theta_modulus) return c * f.fiber().moment() * f.haar_integral();
  // Tensor rule: Gauss nodes in v, quasi Monte Carlo on the quotient.
  const FiberWeight& w = f.fiber();
  if (!w.bounded() || w.lo <= 0) throw InputError("observable needs compact support in v away from 0");
  const GaussRule& gr = GaussRule::instance();
  const double mid = 0.5 * (w.lo + w.hi);
  const double half = 0.5 * (w.hi - w.lo);
  double s = 0.0;
  for (int i = 0; i < GaussRule::kPoints; ++i) {
    const double v = mid + half * gr.nodes[i];
    const double wv = w(v);
    if (wv == 0.0) continue;
    s += half * gr.weights[i] * wv / (v * v * v) * f.haar_integral(v, 12);
  }
  return c * s;
}

inline EquidistributionResult equidistribution(double M, double eta1, double eta2, const TestFunction& nu,
                                               const TestObservable& f) {
  EquidistributionResult out = equidist_lhs(M, eta1, eta2, nu, f);
  out.rhs = equidist_rhs(nu, f);
  out.relative_error = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  return out;
}

// (1/phi(c)) sum_{(c,d)=1} nu(d/c) f(a/c, b alpha + a/2, d alpha + c/2)
// against nu^(0) int f d mu_H, for observables without fiber dependence.
inline EquidistributionResult conjecture_experiment(int64_t c, const ExtendedReal& alpha, const TestFunction& nu,
                                                    const TestObservable& f) {
  if (c < 2) throw InputError("c must be >= 2");
  if (f.fiber().bounded()) throw InputError("the experiment needs an observable without fiber dependence");
  if (!nu.compact()) throw InputError("nu must be compactly supported");
  Window nw = nu.support_window(0.0);
  const quad al = alpha.value_q();
  const double cd = static_cast<double>(c);
  const int64_t d_lo = static_cast<int64_t>(std::floor(nw.lo * cd));
  const int64_t d_hi = static_cast<int64_t>(std::ceil(nw.hi * cd));
  std::vector<double> terms = parallel_map<double>(d_hi - d_lo + 1, [&](int64_t i) {
    const int64_t d = d_lo + i;
    if (std::gcd(c, d) != 1) return 0.0;
    const double nv = nu.real(static_cast<double>(d) / cd);
    if (nv == 0.0) return 0.0;
    auto [a, b] = complete_bottom_row(c, d);
    const quad xi1 = quad(b) * al + quad(a) / 2;
    const quad xi2 = quad(d) * al + quad(c) / 2;
    return nv * f.on_quotient(heisenberg_reduce_q(quad(a) / quad(c), xi1, xi2));
  });
  EquidistributionResult out;
  out.observable = f.descriptor();
  out.lhs = ordered_sum(terms) / static_cast<double>(euler_phi(c));
  out.rhs = nu.integral().real() * f.haar_integral();
  out.relative_error = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  out.terms = d_hi - d_lo + 1;
  return out;
}

}  // namespace modone
