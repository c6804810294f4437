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

// Pair correlation and gaps of (n - sqrt 2)^2 / (2N) mod 1 against the
// Poisson values, plus the exact discrepancy at the same N.
#include <cstdio>
#include <cstdlib>

#include "modone/modone.hpp"

int main(int argc, char** argv) {
  using namespace modone;
  const int64_t N = argc > 1 ? std::atoll(argv[1]) : 5000;
  SequenceSpec spec;
  spec.alpha = ExtendedReal::parse(argc > 2 ? argv[2] : "sqrt:2");
  spec.N = N;
  try {
    const CorrelationHistogram h = pair_correlation_histogram(spec, uniform_edges(0.0, 4.0, 8));
    std::printf("pair correlation, N = %lld\n", static_cast<long long>(N));
    for (size_t k = 0; k < h.counts.size(); ++k) {
      std::printf("  [%.2f, %.2f)  %.4f\n", h.bin_edges[k], h.bin_edges[k + 1], h.density(k));
    }
    const GapSample g = gap_distribution(spec);
    std::printf("gap CDF distance from 1 - exp(-s) on [0, 6]: %.4f\n",
                gap_cdf_distance(g, [](double s) { return 1.0 - std::exp(-s); }));
    const DiscrepancyReport d = discrepancy_report(N, spec.alpha, std::min<int64_t>(N, 2000));
    std::printf("discrepancy %.5f, Erdos-Turan bound (m = %lld) %.5f\n", d.d_exact,
                static_cast<long long>(d.m_used), d.et_bound);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  return 0;
}
