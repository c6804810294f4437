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

#include <boost/math/quadrature/gauss.hpp>

namespace modone {

// Full 20-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  static constexpr int kPoints = 20;
  std::array<double, kPoints> nodes{};
  std::array<double, kPoints> weights{};

  static const GaussRule& instance() {
    static const GaussRule rule = [] {
      GaussRule r;
      using G = boost::math::quadrature::gauss<double, kPoints>;
      const auto& x = G::abscissa();
      const auto& w = G::weights();
      int k = 0;
      for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        r.nodes[k] = -x[i];
        r.weights[k] = w[i];
        ++k;
        r.nodes[k] = x[i];
        r.weights[k] = w[i];
        ++k;
      }
      return r;
    }();
    return rule;
  }
};

// Composite Gauss-Legendre over [a, b] with equal panels.
template <class F>
auto integrate(F&& f, double a, double b, int panels) -> decltype(f(a)) {
  using R = decltype(f(a));
  const GaussRule& g = GaussRule::instance();
  R total{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    R part{};
    for (int i = 0; i < GaussRule::kPoints; ++i) part += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
    total += part * (0.5 * h);
  }
  return total;
}

}  // namespace modone
