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

#include <fftw3.h>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include "modone/core.hpp"
#include "modone/interval_set.hpp"
#include "modone/quadrature.hpp"
#include "modone/test_function.hpp"

namespace modone {

class ConstructionFailed : public std::runtime_error {
 public:
  explicit ConstructionFailed(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Beurling's function: B(x) >= sgn(x), exponential type 2 pi, int (B - sgn) = 1.
inline double beurling(double z) {
  if (z == 0.0) return 1.0;
  const double s = std::sin(kPi * z);
  const double c = 2.0 * s * s / (kPi * kPi);
  if (z > 0) return 1.0 + c * (1.0 / z - boost::math::trigamma(z + 1.0));
  // trigamma(-z) = trigamma(1 - z) + 1/z^2, with the 1/z^2 part folded into sinc^2.
  const double sinc = std::abs(z) < 1e-8 ? 1.0 : s / (kPi * z);
  return -1.0 + 2.0 * sinc * sinc + c * (boost::math::trigamma(1.0 - z) + 1.0 / z);
}

// Fourier transform of the unit bump exp(1 - 1/(1 - x^2)) on (-1, 1), tabulated
// on [0, 120] and taken as zero beyond (it is below 1e-20 there).
class UnitBumpTransform {
 public:
  static const UnitBumpTransform& instance() {
    static const UnitBumpTransform t;
    return t;
  }
  double operator()(double t) const {
    t = std::abs(t);
    if (t >= kMax) return 0.0;
    return (*spline_)(t);
  }
  double at_zero() const { return zero_; }

 private:
  static constexpr double kMax = 120.0;
  static constexpr double kStep = 0.004;

  UnitBumpTransform() {
    // Nodes on [0, 1] fine enough for frequency 120.
    const GaussRule& gr = GaussRule::instance();
    const int panels = 320;
    std::vector<double> x;
    std::vector<double> w;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) / panels;
      for (int i = 0; i < GaussRule::kPoints; ++i) {
        const double xi = mid + 0.5 / panels * gr.nodes[i];
        const double v = xi < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - xi * xi)) : 0.0;
        if (v == 0.0) continue;
        x.push_back(xi);
        w.push_back(2.0 * 0.5 / panels * gr.weights[i] * v);  // even integrand
      }
    }
    const int n = static_cast<int>(kMax / kStep) + 1;
    std::vector<double> vals(n, 0.0);
    // cos(2 pi x t_j) by rotation, re-anchored every 128 steps.
    for (size_t k = 0; k < x.size(); ++k) {
      const cplx rot = unit_phase(x[k] * kStep);
      cplx z;
      for (int j = 0; j < n; ++j) {
        if (j % 128 == 0) z = unit_phase(x[k] * kStep * j);
        vals[j] += w[k] * z.real();
        z *= rot;
      }
    }
    zero_ = vals[0];
    spline_ = std::make_unique<Spline>(vals.begin(), vals.end(), 0.0, kStep, 0.0, 0.0);
  }

  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  std::unique_ptr<Spline> spline_;
  double zero_ = 0.0;
};

}  // namespace detail

// Smooth one-sided approximants of chi_A with compactly supported Fourier
// side: nu_minus^ <= chi_A <= nu_plus^, nu_pm supported in [-1/eps, 1/eps].
// f_minus, f_plus are nu_minus^, nu_plus^ in closed form.
struct Approximants {
  TestFunction nu_minus;
  TestFunction nu_plus;
  TestFunction f_minus;
  TestFunction f_plus;
  double epsilon = 0.0;
  double delta = 0.0;      // Beurling-Selberg type
  double min_phi = 1.0;    // min over A of the smoothing factor
  double reach = 0.0;      // f_pm below 1e-20 outside [inf A - reach, sup A + reach]
  int verified_points = 0;
};

namespace detail {

struct ApproximantShape {
  IntervalSet A;
  double eps = 0.0;
  double delta = 0.0;
  double scale = 1.0;  // 1 / min_A phi for the majorant

  // |w^|^2 / w^(0)^2 for the bump w of radius eps/2.
  double phi(double x) const {
    const UnitBumpTransform& b = UnitBumpTransform::instance();
    const double r = b(0.5 * eps * x) / b.at_zero();
    return r * r;
  }
  double selberg_plus(double x) const {
    double s = 0.0;
    for (const Interval& i : A.intervals()) s += 0.5 * (beurling(delta * (x - i.lo)) + beurling(delta * (i.hi - x)));
    return s;
  }
  double selberg_minus(double x) const {
    double s = 0.0;
    for (const Interval& i : A.intervals()) s -= 0.5 * (beurling(delta * (i.lo - x)) + beurling(delta * (x - i.hi)));
    return s;
  }
  double minus(double x) const { return selberg_minus(x) * phi(x); }
  double plus(double x) const { return selberg_plus(x) * phi(x) * scale; }
};

// nu(t) = int F(x) e(x t) dx for |t| <= L when F^ is supported in [-L, L]:
// the Poisson-sampled sum Delta sum_n F(n Delta) e(n Delta t) with
// 1/Delta >= 2L + 1 has no aliases there. The sum is taken by one FFT onto a
// grid that ends exactly at +-L.
inline TestFunction inverse_transform_band_limited(const std::function<double(double)>& F, double L,
                                                   double reach, double grid_step) {
  size_t K = 1;
  while (static_cast<double>(K) < (2.0 * L + 1.0) / grid_step) K <<= 1;
  // Delta = J / (K L) <= 1 / (2L + 1) makes t_J = J / (K Delta) = L.
  int64_t J = static_cast<int64_t>(std::floor(static_cast<double>(K) * L / (2.0 * L + 1.0)));
  double Delta = static_cast<double>(J) / (static_cast<double>(K) * L);
  int64_t n0 = static_cast<int64_t>(std::ceil(reach / Delta));
  while (static_cast<size_t>(2 * n0 + 1) > K) {
    K <<= 1;
    J = static_cast<int64_t>(std::floor(static_cast<double>(K) * L / (2.0 * L + 1.0)));
    Delta = static_cast<double>(J) / (static_cast<double>(K) * L);
    n0 = static_cast<int64_t>(std::ceil(reach / Delta));
  }
  static std::mutex plan_mu;  // FFTW planning is not thread safe
  fftw_complex* buf = fftw_alloc_complex(K);
  if (!buf) throw ConstructionFailed("FFT buffer allocation failed");
  for (size_t i = 0; i < K; ++i) buf[i][0] = buf[i][1] = 0.0;
  for (int64_t n = -n0; n <= n0; ++n) {
    const size_t slot = static_cast<size_t>(mod_floor(n, static_cast<int64_t>(K)));
    buf[slot][0] += Delta * F(static_cast<double>(n) * Delta);
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mu);
    plan = fftw_plan_dft_1d(static_cast<int>(K), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<cplx> vals(static_cast<size_t>(2 * J + 1));
  for (int64_t j = -J; j <= J; ++j) {
    const size_t slot = static_cast<size_t>(mod_floor(j, static_cast<int64_t>(K)));
    vals[static_cast<size_t>(j + J)] = cplx(buf[slot][0], buf[slot][1]);
  }
  {
    std::lock_guard<std::mutex> lock(plan_mu);
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return TestFunction::sampled(-L, L, vals, reach / 3.0);
}

}  // namespace detail

inline Approximants build_approximants(const IntervalSet& A, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw InputError("epsilon must lie in (0, 1)");
  if (A.empty()) throw InputError("approximants need a nonempty set A");
  auto shape = std::make_shared<detail::ApproximantShape>();
  shape->A = A;
  shape->eps = epsilon;
  shape->delta = 1.0 / epsilon - epsilon;
  const double L = 1.0 / epsilon;

  // Smallest smoothing factor on A (phi is even and decreasing on the range
  // used; the sampled minimum also covers the endpoints).
  double mn = 1.0;
  for (const Interval& i : A.intervals()) {
    for (int k = 0; k <= 2000; ++k) mn = std::min(mn, shape->phi(i.lo + (i.hi - i.lo) * k / 2000.0));
  }
  if (!(mn > 0.5)) {
    throw ConstructionFailed("epsilon too large for this A: smoothing factor drops to " +
                             std::to_string(mn) + " on A");
  }
  shape->scale = 1.0 / mn;

  // phi < 1e-20 once eps |x| / 2 > 60.
  const double reach = 120.0 / epsilon;
  const double lo = A.inf() - reach;
  const double hi = A.sup() + reach;

  Approximants out;
  out.epsilon = epsilon;
  out.delta = shape->delta;
  out.min_phi = mn;
  out.reach = reach;
  const double band = L;
  out.f_minus = TestFunction::compact_callable([shape](double x) { return shape->minus(x); }, lo, hi,
                                               "approximant_minus", band);
  out.f_plus = TestFunction::compact_callable([shape](double x) { return shape->plus(x); }, lo, hi,
                                              "approximant_plus", band);

  // Grid check of f_minus <= chi_A <= f_plus, denser near the endpoints.
  std::vector<double> pts;
  const double span = A.sup() - A.inf();
  for (int k = 0; k <= 20000; ++k) pts.push_back(A.inf() - span - 4.0 + (3.0 * span + 8.0) * k / 20000.0);
  for (int k = 0; k <= 8000; ++k) pts.push_back(lo + (hi - lo) * k / 8000.0);
  for (const Interval& i : A.intervals()) {
    for (double e : {i.lo, i.hi}) {
      for (int k = -50; k <= 50; ++k) pts.push_back(e + k * 1e-3);
      pts.push_back(std::nextafter(e, -INFINITY));
      pts.push_back(std::nextafter(e, INFINITY));
    }
  }
  const double slack = 1e-14;
  for (double x : pts) {
    const double chi = A.contains(x) ? 1.0 : 0.0;
    const double m = shape->minus(x);
    const double p = shape->plus(x);
    if (m > chi + slack || p < chi - slack) {
      throw ConstructionFailed("approximant check failed at x=" + std::to_string(x) +
                               " (minus=" + std::to_string(m) + ", plus=" + std::to_string(p) + ")");
    }
  }
  out.verified_points = static_cast<int>(pts.size());

  // Spline spacing eps/1000 on the nu side, widened when the FFT would pass 2^23 points.
  const double grid = std::max(1e-3 * epsilon, (2.0 * L + 1.0) / static_cast<double>(1 << 23));
  out.nu_minus = detail::inverse_transform_band_limited([shape](double x) { return shape->minus(x); }, L,
                                                        reach + span, grid);
  out.nu_plus = detail::inverse_transform_band_limited([shape](double x) { return shape->plus(x); }, L,
                                                       reach + span, grid);
  return out;
}

}  // namespace modone
