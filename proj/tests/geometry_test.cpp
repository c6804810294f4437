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

#include "modone/geometry.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace modone {
namespace {

double circle_gap(double a, double b) {
  double d = a - b;
  d -= std::floor(d + 0.5);
  return std::abs(d);
}

Mat2 random_sl2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Mat2 g{u(rng), u(rng), u(rng), 0.0};
  while (std::abs(g.a) < 0.1) g.a = u(rng);
  g.d = (1.0 + g.b * g.c) / g.a;
  return g;
}

GroupElement random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  return {random_sl2(rng), {u(rng), u(rng)}};
}

TEST(GroupLaw, TranslationsAdd) {
  GroupElement p{Mat2{}, {0.3, -1.2}};
  GroupElement q{Mat2{}, {2.5, 0.7}};
  GroupElement r = group_mul(p, q);
  EXPECT_DOUBLE_EQ(r.xi.x, 2.8);
  EXPECT_DOUBLE_EQ(r.xi.y, -0.5);
  EXPECT_EQ(r.g.max_abs_diff(Mat2{}), 0.0);
}

TEST(GroupLaw, InverseAndAssociativity) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    GroupElement p = random_element(rng);
    GroupElement e = group_mul(p, group_inv(p));
    EXPECT_LT(e.g.max_abs_diff(Mat2{}), 1e-12);
    EXPECT_LT(std::max(std::abs(e.xi.x), std::abs(e.xi.y)), 1e-12);
    GroupElement q = random_element(rng);
    GroupElement r = random_element(rng);
    GroupElement lhs = group_mul(group_mul(p, q), r);
    GroupElement rhs = group_mul(p, group_mul(q, r));
    EXPECT_LT(lhs.g.max_abs_diff(rhs.g), 1e-10);
    EXPECT_NEAR(lhs.xi.x, rhs.xi.x, 1e-10);
    EXPECT_NEAR(lhs.xi.y, rhs.xi.y, 1e-10);
  }
}

TEST(GroupLaw, DiagonalTimesUnipotent) {
  GroupElement p{a_diag(1.7), {}};
  GroupElement q{n_plus(0.4), {}};
  Mat2 g = group_mul(p, q).g;
  EXPECT_LT(g.max_abs_diff(Mat2{1.7, 1.7 * 0.4, 0.0, 1.0 / 1.7}), 1e-15);
}

// [[1,u,x1],[0,1,x2],[0,0,1]] products, written out.
std::array<double, 3> heis_mul(std::array<double, 3> g, std::array<double, 3> h) {
  return {g[0] + h[0], h[1] + g[0] * h[2] + g[1], g[2] + h[2]};
}

TEST(Heisenberg, ReducedPointIsFixed) {
  HeisenbergPoint h = heisenberg_reduce(0.3, 0.4, 0.9);
  EXPECT_DOUBLE_EQ(h.u, 0.3);
  EXPECT_DOUBLE_EQ(h.xi1, 0.4);
  EXPECT_DOUBLE_EQ(h.xi2, 0.9);
}

TEST(Heisenberg, ShiftInUMatchesMatrixProduct) {
  HeisenbergPoint h = heisenberg_reduce(1.3, 0.4, 0.9);
  auto m = heis_mul({-1.0, 0.0, 0.0}, {1.3, 0.4, 0.9});
  EXPECT_NEAR(h.u, 0.3, 1e-15);
  EXPECT_NEAR(h.xi2, 0.9, 1e-15);
  EXPECT_NEAR(h.xi1, m[1] - std::floor(m[1]), 1e-15);
  EXPECT_NEAR(h.xi1, 0.5, 1e-15);
  HeisenbergPoint g = heisenberg_act(-1, 0, 0, {1.3, 0.4, 0.9, 0.0});
  EXPECT_NEAR(g.xi1, m[1], 1e-15);
}

TEST(Heisenberg, ReductionIsIdempotentAndInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_int_distribution<int> z(-9, 9);
  for (int i = 0; i < 10000; ++i) {
    HeisenbergPoint h = heisenberg_reduce(u(rng), u(rng), u(rng));
    EXPECT_GE(h.u, 0.0);
    EXPECT_LT(h.u, 1.0);
    EXPECT_GE(h.xi1, 0.0);
    EXPECT_LT(h.xi1, 1.0);
    HeisenbergPoint r = heisenberg_reduce(h);
    ASSERT_EQ(r.u, h.u);
    ASSERT_EQ(r.xi1, h.xi1);
    ASSERT_EQ(r.xi2, h.xi2);
    HeisenbergPoint moved = heisenberg_reduce(heisenberg_act(z(rng), z(rng), z(rng), h));
    EXPECT_LT(circle_gap(moved.u, h.u), 1e-12);
    EXPECT_LT(circle_gap(moved.xi1, h.xi1), 1e-12);
    EXPECT_LT(circle_gap(moved.xi2, h.xi2), 1e-12);
  }
}

TEST(Section, CoordinatesOfSectionPoint) {
  auto s = section_coords(n_plus(0.2) * a_diag(0.5), 1.0 / 64, 0.25, 1.0);
  ASSERT_TRUE(s.has_value());
  EXPECT_NEAR(s->u, 0.2, 1e-15);
  EXPECT_NEAR(s->v, 0.5, 1e-15);
  EXPECT_EQ(s->w, 0.0);
}

TEST(Section, RoundTripInBox) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uu(-5.0, 5.0);
  std::uniform_real_distribution<double> vv(0.25, 3.0);
  std::uniform_real_distribution<double> ww(-1.0 / 32, 1.0 / 32);
  for (int i = 0; i < 1000; ++i) {
    const double u = uu(rng), v = vv(rng), w = ww(rng);
    auto s = section_coords(from_section(u, v, w), 1.0 / 32, 0.25, 3.0);
    ASSERT_TRUE(s.has_value());
    EXPECT_NEAR(s->u, u, 1e-12);
    EXPECT_NEAR(s->v, v, 1e-12);
    EXPECT_NEAR(s->w, w, 1e-12);
  }
}

TEST(Section, Rejections) {
  EXPECT_FALSE(section_coords(a_diag(2.0) * n_minus(0.5), 1.0 / 32, 0.25, 4.0).has_value());
  EXPECT_FALSE(section_coords(rotation(kPi / 2), 1.0 / 32, 0.25, 4.0).has_value());
  EXPECT_FALSE(section_coords(a_diag(-0.5), 1.0 / 32, 0.25, 4.0).has_value());
}

TEST(Section, IwasawaChangeOfVariables) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uu(-2.0, 2.0);
  std::uniform_real_distribution<double> vv(0.3, 3.0);
  std::uniform_real_distribution<double> ww(-0.9, 0.9);
  for (int i = 0; i < 200; ++i) {
    const double u = uu(rng), v = vv(rng), w = ww(rng);
    IwasawaCoords c = section_to_iwasawa(u, v, w);
    Mat2 lhs = n_plus(c.x) * a_diag(std::sqrt(c.y)) * rotation(c.phi);
    EXPECT_LT(lhs.max_abs_diff(from_section(u, v, w)), 1e-12);
    // Central differences for the 3x3 Jacobian of (x, y, phi) in (u, v, w).
    const double h = 1e-5;
    double J[3][3];
    const double base[3] = {u, v, w};
    for (int k = 0; k < 3; ++k) {
      double p[3] = {base[0], base[1], base[2]};
      double m[3] = {base[0], base[1], base[2]};
      p[k] += h;
      m[k] -= h;
      IwasawaCoords cp = section_to_iwasawa(p[0], p[1], p[2]);
      IwasawaCoords cm = section_to_iwasawa(m[0], m[1], m[2]);
      J[0][k] = (cp.x - cm.x) / (2 * h);
      J[1][k] = (cp.y - cm.y) / (2 * h);
      J[2][k] = (cp.phi - cm.phi) / (2 * h);
    }
    const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                       J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                       J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    EXPECT_NEAR(det, 2.0 * c.y * c.y / (v * v * v), 1e-8);
  }
}

TEST(Section, ThickenedSectionMeetsNoTranslate) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> z(-10, 10);
  std::uniform_real_distribution<double> uu(-20.0, 20.0);
  std::uniform_real_distribution<double> vv(0.25, 4.0);
  const double eps = 1.0 / 32 - 1e-3;
  std::uniform_real_distribution<double> ww(-eps, eps);
  int checked = 0;
  while (checked < 20000) {
    int a = z(rng), b = z(rng), c = z(rng), d = z(rng);
    if (c == 0 || a * d - b * c != 1) continue;
    Mat2 gamma{double(a), double(b), double(c), double(d)};
    Mat2 h = from_section(uu(rng), vv(rng), ww(rng));
    ASSERT_FALSE(section_coords(gamma * h, eps, 0.25, 4.0).has_value()) << a << " " << b << " " << c << " " << d;
    ++checked;
  }
}

// Bottom rows (c, d) of translates gamma with gamma g(x) in the box, by
// trying every c up to a generous bound and the d nearest c x / M^2.
std::set<std::pair<int64_t, int64_t>> scan_translates(double M, double x, double v0, double v1, double eps) {
  std::set<std::pair<int64_t, int64_t>> found;
  const Mat2 g = horocycle_matrix(M, x);
  const int64_t cmax = static_cast<int64_t>(std::ceil(2.0 * M / v0)) + 2;
  for (int64_t c = 1; c <= cmax; ++c) {
    const int64_t d0 = static_cast<int64_t>(std::llround(static_cast<double>(c) * x / (M * M)));
    for (int64_t d = d0 - 1; d <= d0 + 1; ++d) {
      if (std::gcd(c, d) != 1) continue;
      // Any top row works: membership depends on the bottom row only.
      Mat2 gamma{0.0, 0.0, double(c), double(d)};
      Mat2 t = gamma * g;
      if (section_coords(t, eps, v0, v1)) found.insert({c, d});
    }
  }
  return found;
}

void compare_with_scan(double M, double x_lo, double x_hi, double step, double v0, double v1, double eps) {
  auto hits = horocycle_section_hits(M, 0.5, std::sqrt(2.0), v0, v1, eps, x_lo, x_hi);
  std::set<std::pair<int64_t, int64_t>> seen;
  const int64_t n = static_cast<int64_t>(std::floor((x_hi - x_lo) / step));
  for (int64_t i = 0; i <= n; ++i) {
    const double x = x_lo + step * static_cast<double>(i);
    auto found = scan_translates(M, x, v0, v1, eps);
    std::set<std::pair<int64_t, int64_t>> predicted;
    bool near_edge = false;
    for (const SectionPoint& s : hits) {
      const double w = x - s.x_center;
      if (std::abs(std::abs(w) - eps) < 1e-9) near_edge = true;
      if (std::abs(w) <= eps) predicted.insert({s.c, s.d});
    }
    if (!near_edge) ASSERT_EQ(found, predicted) << "M=" << M << " x=" << x;
    seen.insert(found.begin(), found.end());
  }
  for (const SectionPoint& s : hits) {
    if (s.w_hi - s.w_lo > 2 * step) EXPECT_TRUE(seen.count({s.c, s.d})) << "M=" << M << " c=" << s.c << " d=" << s.d;
  }
}

TEST(HorocycleHits, MatrixIsTheLiftedHorocycle) {
  for (double x : {-3.7, 0.0, 12.25}) {
    Mat2 direct = a_diag(1.0 / 7.0) * rotation(-kPi / 2) * n_minus(x);
    EXPECT_LT(direct.max_abs_diff(horocycle_matrix(7.0, x)), 1e-14);
  }
}

TEST(HorocycleHits, MatchesGridScanSmallExample) {
  auto hits = horocycle_section_hits(10, 0.5, std::sqrt(2.0), 5, 10, 1.0 / 64, 0, 200);
  ASSERT_FALSE(hits.empty());
  for (const SectionPoint& s : hits) EXPECT_TRUE(s.c == 1 || s.c == 2);
  compare_with_scan(10, 0, 200, 1.0 / 64 / 50, 5, 10, 1.0 / 64);
}

TEST(HorocycleHits, MatchesFineGridScanUpToM20) {
  const double eps = 1.0 / 64;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int M = 1; M <= 20; ++M) {
    const double M2 = double(M) * M;
    // One window at a random place, one around a predicted hit.
    const double r = M2 * unit(rng);
    compare_with_scan(M, r, r + 0.02, 1e-4 * eps, 0.25, 1.0, eps);
    auto all = horocycle_section_hits(M, 0.5, std::sqrt(2.0), 0.25, 1.0, eps, 0, M2);
    ASSERT_FALSE(all.empty()) << "M=" << M;
    const SectionPoint& s = all[all.size() / 2];
    compare_with_scan(M, s.x_center - 0.01, s.x_center + 0.01, 1e-4 * eps, 0.25, 1.0, eps);
  }
}

TEST(HorocycleHits, EmptyWhenSectionAboveM) {
  EXPECT_TRUE(horocycle_section_hits(3, 0.5, 1.0, 4, 8, 0.01, -100, 100).empty());
}

TEST(HorocycleHits, AttachedPointIndependentOfBezoutChoice) {
  const double e1 = 0.5, e2 = std::sqrt(2.0);
  for (const SectionPoint& s : horocycle_section_hits(17, e1, e2, 0.25, 1.0, 1.0 / 64, 0, 289)) {
    EXPECT_EQ(s.a * s.d - s.b * s.c, 1);
    for (int64_t t : {-3, 1, 5}) {
      HeisenbergPoint q = attached_point(s.a + t * s.c, s.b + t * s.d, s.c, s.d, quad(e1), quad(e2), s.v);
      EXPECT_LT(circle_gap(q.u, s.point.u), 1e-12);
      EXPECT_LT(circle_gap(q.xi1, s.point.xi1), 1e-12);
      EXPECT_LT(circle_gap(q.xi2, s.point.xi2), 1e-12);
    }
  }
}

TEST(Observable, InvariantUnderIntegerHeisenbergGroup) {
  TestObservable sep = TestObservable::separable(FiberWeight::absent(), TrigPoly{1.0, {0.5}, {0.1}},
                                                 TrigPoly{0.5, {0.2, 0.1}, {}});
  EXPECT_LT(sep.invariance_defect(1000, 10, 1), 1e-10);
  TestObservable th = TestObservable::theta_modulus(TestFunction::bump(1.0, 0.0, 1.0));
  EXPECT_LT(th.invariance_defect(1000, 10, 2), 1e-10);
}

TEST(Observable, PlainThetaModulusNeedsTheHalfShift) {
  // Without the u/2 shift in xi1 the u -> u + 1 generator changes |Theta|^2.
  ThetaEvaluator ev(TestFunction::bump(1.0, 0.0, 1.0));
  const double u = 0.3, x1 = 0.2, x2 = 0.37, y = 0.8;
  const double a = std::norm(ev(ThetaPoint::make(u, y, 0.0, x1, x2)));
  const double b = std::norm(ev(ThetaPoint::make(u + 1, y, 0.0, x1 + x2, x2)));
  EXPECT_GT(std::abs(a - b), 1e-3);
}

TEST(Equidistribution, RhsClosedForms) {
  const TestFunction nu = TestFunction::bump(1.0, 0.5, 0.5);
  const double nu0 = nu.integral().real();
  TestObservable one = TestObservable::constant(1.0, FiberWeight::indicator(0.5, 1.0));
  EXPECT_NEAR(equidist_rhs(nu, one), 6.0 / (kPi * kPi) * 1.5 * nu0, 1e-14);
  const TestFunction wv = TestFunction::bump(1.0, 0.75, 0.25);
  TestObservable sep = TestObservable::separable(FiberWeight::smooth_weight(wv), TrigPoly{0.7, {0.5}, {}},
                                                 TrigPoly{1.3, {}, {0.4}});
  const double mom = integrate([&](double v) { return wv.real(v) / (v * v * v); }, 0.5, 1.0, 400);
  EXPECT_NEAR(equidist_rhs(nu, sep), 6.0 / (kPi * kPi) * nu0 * mom * 0.7 * 1.3, 1e-12);
}

TEST(Equidistribution, ThetaObservableIntegratesToNorm) {
  const TestFunction f = TestFunction::bump(1.0, 0.0, 1.0);
  TestObservable th = TestObservable::theta_modulus(f);
  for (double v : {0.5, 1.0, 1.7}) EXPECT_NEAR(th.haar_integral(v), f.l2_norm_sq(), 1e-3) << "v=" << v;
}

TEST(Equidistribution, EmptyWhenFiberAboveM) {
  TestObservable one = TestObservable::constant(1.0, FiberWeight::indicator(60.0, 80.0));
  EXPECT_EQ(equidist_lhs(50, 0.5, std::sqrt(2.0), TestFunction::bump(1.0, 0.5, 0.5), one).lhs, 0.0);
}

TEST(Equidistribution, SeparableObservableConverges) {
  const TestFunction nu = TestFunction::bump(1.0, 0.5, 0.5);
  TestObservable sep = TestObservable::separable(FiberWeight::smooth_weight(TestFunction::bump(1.0, 0.75, 0.25)),
                                                 TrigPoly{1.0, {0.5}, {}}, TrigPoly{1.0, {0.3}, {0.2}});
  EquidistributionResult r500 = equidistribution(500, 0.5, std::sqrt(2.0), nu, sep);
  EXPECT_LT(r500.relative_error, 0.05);
  EquidistributionResult r100 = equidistribution(100, 0.5, std::sqrt(2.0), nu, sep);
  EquidistributionResult r1000 = equidistribution(1000, 0.5, std::sqrt(2.0), nu, sep);
  EXPECT_LT(r1000.relative_error, r100.relative_error);
  // Reflected nu gives the same limit.
  EquidistributionResult refl = equidist_lhs(500, 0.5, std::sqrt(2.0), nu, sep, true);
  EXPECT_NEAR(refl.lhs, r500.rhs, 0.05 * r500.rhs);
}

TEST(Equidistribution, SharpFiberWindow) {
  const TestFunction nu = TestFunction::bump(1.0, 0.5, 0.5);
  TestObservable one = TestObservable::constant(1.0, FiberWeight::indicator(0.5, 1.0));
  EquidistributionResult r = equidistribution(500, 0.5, std::sqrt(2.0), nu, one);
  EXPECT_NEAR(r.lhs, 6.0 / (kPi * kPi) * 1.5 * nu.integral().real(), 0.02 * r.rhs);
}

TEST(Equidistribution, ThetaObservableConverges) {
  const TestFunction nu = TestFunction::bump(1.0, 0.5, 0.5);
  TestObservable th = TestObservable::theta_modulus(TestFunction::bump(1.0, 0.0, 1.0),
                                                    FiberWeight::smooth_weight(TestFunction::bump(1.0, 0.75, 0.25)));
  EXPECT_LT(equidistribution(500, 0.5, std::sqrt(2.0), nu, th).relative_error, 0.05);
}

TEST(ConjectureExperiment, ConstantObservableApproachesMass) {
  const TestFunction nu = TestFunction::bump(1.0, 0.5, 0.5);
  TestObservable one = TestObservable::constant(1.0);
  const ExtendedReal a = ExtendedReal::parse("sqrt:2");
  double prev = 1.0;
  for (int64_t c : {101, 1009, 10007}) {
    EquidistributionResult r = conjecture_experiment(c, a, nu, one);
    double direct = 0.0;
    for (int64_t d = 0; d <= c; ++d)
      if (std::gcd(c, d) == 1) direct += nu.real(double(d) / double(c));
    EXPECT_NEAR(r.lhs, direct / double(euler_phi(c)), 1e-12);
    EXPECT_LT(r.relative_error, prev);
    prev = r.relative_error;
  }
}

TEST(ConjectureExperiment, RationalAlphaIsVisiblyWorse) {
  const TestFunction nu = TestFunction::bump(1.0, 0.5, 0.5);
  TestObservable sep = TestObservable::separable(FiberWeight::absent(), TrigPoly{1.0, {0.5}, {}},
                                                 TrigPoly{1.0, {0.3}, {0.2}});
  EquidistributionResult good = conjecture_experiment(5003, ExtendedReal::parse("sqrt:2"), nu, sep);
  EquidistributionResult bad = conjecture_experiment(5003, ExtendedReal::from_integer(0), nu, sep);
  RecordProperty("relative_error_sqrt2", std::to_string(good.relative_error));
  RecordProperty("relative_error_zero", std::to_string(bad.relative_error));
  EXPECT_GT(bad.relative_error, 0.1);
  EXPECT_GT(bad.relative_error, 10 * good.relative_error);
}

}  // namespace
}  // namespace modone
