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

#include "modone/theta.hpp"

#include <gtest/gtest.h>

#include <random>

namespace modone {
namespace {

GammaTilde random_gamma(std::mt19937_64& rng, int64_t bound) { return random_gamma_tilde(rng, bound); }

TEST(Iwasawa, Examples) {
  IwasawaCoords id = iwasawa({1, 0, 0, 1});
  EXPECT_NEAR(id.x, 0, 1e-15);
  EXPECT_NEAR(id.y, 1, 1e-15);
  EXPECT_NEAR(id.phi, 0, 1e-15);
  IwasawaCoords rot = iwasawa({0, -1, 1, 0});
  EXPECT_NEAR(rot.x, 0, 1e-15);
  EXPECT_NEAR(rot.y, 1, 1e-15);
  EXPECT_NEAR(rot.phi, kPi / 2, 1e-15);
  EXPECT_THROW(iwasawa({2, 0, 0, 1}), InputError);
}

TEST(Iwasawa, RoundTripOfGeneratorProducts) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Mat2 g;
    for (int k = 0; k < 10; ++k) {
      switch (rng() % 4) {
        case 0: g = g * n_plus(u(rng)); break;
        case 1: g = g * n_minus(u(rng)); break;
        case 2: g = g * a_diag(std::exp(0.5 * u(rng))); break;
        default: g = g * rotation(3 * u(rng)); break;
      }
    }
    IwasawaCoords w = iwasawa(g);
    EXPECT_LT(from_iwasawa(w).max_abs_diff(g), 1e-12);
    EXPECT_GE(w.phi, 0.0);
    EXPECT_LT(w.phi, kTwoPi);
  }
}

TEST(GammaTilde, ActionMatchesIwasawaOfProduct) {
  // The action on (tau, phi) is left multiplication on n+(x) a(sqrt y) r(phi).
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    GammaTilde g = random_gamma(rng, 9);
    ThetaPoint p = ThetaPoint::make(0.3 * trial / 100.0 - 0.1, 0.2 + trial * 0.01, 0.1 * (trial % 60), 0, 0);
    ThetaPoint q = gamma_tilde_apply(g, p);
    Mat2 m = Mat2{double(g.a), double(g.b), double(g.c), double(g.d)} *
             from_iwasawa({double(p.x), double(p.y), p.phi});
    IwasawaCoords w = iwasawa(m);
    EXPECT_NEAR(double(q.x), w.x, 1e-10);
    EXPECT_NEAR(double(q.y), w.y, 1e-10);
    double dphi = std::remainder(q.phi - w.phi, kTwoPi);
    EXPECT_NEAR(dphi, 0.0, 1e-10);
  }
}

TEST(GammaTilde, IdentityAndComposition) {
  ThetaPoint p = ThetaPoint::make(0.2, 0.7, 1.0, 0.3, -0.4);
  ThetaPoint q = gamma_tilde_apply(GammaTilde{}, p);
  EXPECT_EQ(double(q.x), double(p.x));
  EXPECT_EQ(double(q.y), double(p.y));
  EXPECT_EQ(q.phi, p.phi);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    GammaTilde g1 = random_gamma(rng, 12);
    GammaTilde g2 = random_gamma(rng, 12);
    ThetaPoint a = gamma_tilde_apply(g1, gamma_tilde_apply(g2, p));
    ThetaPoint b = gamma_tilde_apply(g1 * g2, p);
    EXPECT_NEAR(double(a.x), double(b.x), 1e-10);
    EXPECT_NEAR(double(a.y), double(b.y), 1e-10);
    EXPECT_NEAR(std::remainder(a.phi - b.phi, kTwoPi), 0.0, 1e-10);
    EXPECT_NEAR(double(a.xi1), double(b.xi1), 1e-10);
    EXPECT_NEAR(double(a.xi2), double(b.xi2), 1e-10);
  }
}

TEST(ThetaSum, SingleTermDominatesInTheCusp) {
  TestFunction g = TestFunction::gaussian();
  ThetaPoint p = ThetaPoint::make(0, 1e4, 0, 0, 0);
  cplx t = theta_sum(g, p);
  EXPECT_NEAR(t.real(), 10.0, 1e-12);
  EXPECT_NEAR(t.imag(), 0.0, 1e-15);
}

TEST(ThetaSum, JacobiInversionForGaussian) {
  // sum_n exp(-pi n^2 y) = y^{-1/2} sum_n exp(-pi n^2 / y) gives
  // Theta(i y) = Theta(i / y) for the self-dual Gaussian at phi = 0.
  TestFunction g = TestFunction::gaussian();
  for (double y : {0.05, 0.3, 1.0, 2.5}) {
    cplx a = theta_sum(g, ThetaPoint::make(0, y, 0, 0, 0));
    cplx b = theta_sum(g, ThetaPoint::make(0, 1 / y, 0, 0, 0));
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12) << y;
  }
}

void check_invariance(const TestFunction& f, uint64_t seed, int elements, int points,
                      double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ThetaEvaluator theta(f);
  int checked = 0;
  for (int i = 0; i < points; ++i) {
    ThetaPoint p = ThetaPoint::make(2 * u(rng) - 1, 0.3 + 1.5 * u(rng), 0.2 + 2.7 * u(rng),
                                    u(rng), u(rng));
    double base = std::norm(theta(p));
    for (int j = 0; j < elements; ++j) {
      GammaTilde g = random_gamma(rng, 20);
      ThetaPoint q = gamma_tilde_apply(g, p);
      double s = std::abs(std::sin(q.phi));
      if (f.kind() != "gaussian" && s < std::sin(kSingularAngleBand)) continue;
      if (double(q.y) < 1e-4) continue;
      double moved = std::norm(theta(q));
      EXPECT_NEAR(moved, base, tol * std::max(base, 1e-3)) << i << " " << j;
      ++checked;
    }
  }
  EXPECT_GT(checked, elements * points / 2);
}

TEST(ThetaSum, InvarianceGaussian) {
  check_invariance(TestFunction::gaussian(1.0, 0.2, 0.8), 21, 20, 20, 1e-6);
}

TEST(ThetaSum, InvarianceBump) {
  check_invariance(TestFunction::bump(1.0, 0.3, 0.9), 22, 5, 6, 1e-6);
}

double torus_integral(const TestFunction& f, double x, double y, double phi, int n1, int n2,
                      const TestFunction* g = nullptr) {
  ThetaEvaluator tf(f);
  double sum = 0.0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      ThetaPoint p = ThetaPoint::make(x, y, phi, (i + 0.5) / n1, (j + 0.5) / n2);
      if (g) {
        sum += (tf(p) * std::conj(theta_sum(*g, p))).real();
      } else {
        sum += std::norm(tf(p));
      }
    }
  }
  return sum / (double(n1) * n2);
}

TEST(ThetaSum, TorusIntegralIsL2Norm) {
  TestFunction g = TestFunction::gaussian(1.0, 0.1, 0.7);
  EXPECT_NEAR(torus_integral(g, 0.37, 0.8, 0.9, 64, 64), g.l2_norm_sq(), 1e-6);
  TestFunction b = TestFunction::bump(1.0, 0.0, 0.8);
  EXPECT_NEAR(torus_integral(b, -0.2, 1.3, 0.0, 64, 64), b.l2_norm_sq(), 1e-6);
  EXPECT_NEAR(torus_integral(b, 0.61, 2.0, kPi / 2, 48, 48), b.l2_norm_sq(), 1e-6);
}

TEST(ThetaCross, TorusIntegralIsInnerProduct) {
  TestFunction g = TestFunction::gaussian(1.0, 0.1, 0.7);
  TestFunction b = TestFunction::bump(1.0, 0.0, 0.8);
  EXPECT_NEAR(torus_integral(g, 0.37, 0.8, 0.0, 64, 64, &b), g.inner(b).real(), 1e-6);
  ThetaPoint p = ThetaPoint::make(0.1, 0.9, 0.0, 0.3, 0.2);
  EXPECT_NEAR(std::abs(theta_cross(g, g, p) - std::norm(theta_sum(g, p))), 0.0, 1e-12);
}

TEST(ThetaCross, Invariance) {
  TestFunction g = TestFunction::gaussian(1.0, 0.1, 0.7);
  TestFunction h = TestFunction::gaussian(0.5, -0.3, 1.2);
  std::mt19937_64 rng(31);
  ThetaPoint p = ThetaPoint::make(0.21, 0.66, 0.4, 0.15, 0.72);
  cplx base = theta_cross(g, h, p);
  for (int j = 0; j < 10; ++j) {
    ThetaPoint q = gamma_tilde_apply(random_gamma(rng, 20), p);
    EXPECT_LT(std::abs(theta_cross(g, h, q) - base), 1e-6 * std::abs(base));
  }
}

TEST(ThetaSum, CuspLiftMatchesOriginalPoint) {
  TestFunction h = TestFunction::bump(1.0, 0.5, 1.0);
  ThetaEvaluator th(h);
  const quad alpha = std::sqrt(2.0);
  for (int64_t N : {6, 7, 12, 15}) {
    for (int64_t sigma : divisors(N)) {
      int64_t np = N / sigma;
      for (int64_t k = -np; k <= np; ++k) {
        if (k == 0 || std::gcd(k, np) != 1) continue;
        if (np == 1 && std::abs(k) != 1) continue;
        double lhs = std::norm(th(q_n_point(k * sigma, N, alpha)));
        CuspLift lift = cusp_lift(k, N, sigma, alpha);
        double rhs = std::norm(th(lift.point));
        EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, lhs)) << N << " " << sigma << " " << k;
        // A second valid Bezout representative differs by a Gamma-tilde element.
        BezoutSolution alt = lift.bezout;
        // (a, b) -> (a + 2 n', b - 2 k) keeps both parities.
        alt.a += 2 * np;
        alt.b -= 2 * k;
        CuspLift lift2 = cusp_lift(k, N, sigma, alpha, &alt);
        EXPECT_NEAR(std::norm(th(lift2.point)), rhs, 1e-8 * std::max(1.0, rhs));
      }
    }
  }
}

TEST(CuspApprox, TieGoesToEven) {
  EXPECT_EQ(nearest_integer_even(quad(0.5)), 0);
  EXPECT_EQ(nearest_integer_even(quad(1.5)), 2);
  EXPECT_EQ(nearest_integer_even(quad(-0.5)), 0);
  EXPECT_EQ(nearest_integer_even(quad(2.4)), 2);
  EXPECT_EQ(nearest_integer_even(quad(-2.6)), -3);
  TestFunction g = TestFunction::gaussian();
  CuspApproximation c = theta_cusp_approx(g, ThetaPoint::make(0, 1e4, 0, 0, 0.5), 2.0);
  EXPECT_EQ(c.m0, 0);
}

TEST(CuspApprox, BoundHoldsOnYGrid) {
  TestFunction g = TestFunction::gaussian(1.0, 0.2, 0.9);
  TestFunction b = TestFunction::bump(1.0, 0.1, 0.7);
  for (const TestFunction* f : {&g, &b}) {
    for (double phi : {0.0, kPi / 2, 2.2}) {
      const double sup = weighted_sup(f->apply_u_phi(phi), 2.0);
      for (double y : {0.5, 0.8, 2.0, 10.0, 100.0, 1e3, 1e4}) {
        for (double xi2 : {0.0, 0.23, 0.5, 0.81}) {
          ThetaPoint p = ThetaPoint::make(0.37, y, phi, 0.61, xi2);
          CuspApproximation c = theta_cusp_approx(*f, p, 2.0, sup);
          double direct = std::norm(theta_sum(*f, p));
          EXPECT_LE(std::abs(direct - c.main), c.error_bound) << phi << " " << y << " " << xi2;
        }
      }
    }
  }
  EXPECT_THROW(theta_cusp_approx(g, ThetaPoint::make(0, 0.4, 0, 0, 0), 2.0), InputError);
  EXPECT_THROW(theta_cusp_approx(g, ThetaPoint::make(0, 1, 0, 0, 0), 1.0), InputError);
}


TEST(ThetaVerify, GaussianPassesAllChecks) {
  const TestFunction g = TestFunction::gaussian(1.0, 0.2, 0.8);
  const ThetaVerifyReport r = theta_verify(g, 20, 20, 7);
  EXPECT_EQ(r.checked, 400);
  EXPECT_LT(r.max_invariance_dev, 1e-6);
  EXPECT_NEAR(r.torus_integral, r.l2_norm_sq, 1e-6);
  EXPECT_LT(r.max_unitarity_dev, 1e-6);
  EXPECT_EQ(r.cusp_violations, 0);
  EXPECT_GT(r.cusp_checked, 0);
  const ThetaVerifyReport again = theta_verify(g, 20, 20, 7);
  EXPECT_EQ(again.max_invariance_dev, r.max_invariance_dev);
  EXPECT_EQ(again.torus_integral, r.torus_integral);
}

}  // namespace
}  // namespace modone
