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
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "modone/core.hpp"
#include "modone/extended_real.hpp"

namespace modone {

struct Convergent {
  int64_t p = 0;
  int64_t q = 1;
};

struct ContinuedFraction {
  std::vector<int64_t> partial_quotients;
  std::vector<Convergent> convergents;
  bool terminated = false;  // exact rational fully expanded
};

namespace detail {

inline bool checked_mul_add(int64_t a, int64_t x, int64_t y, int64_t& out) {
  i128 v = static_cast<i128>(a) * x + y;
  if (v > INT64_MAX || v < INT64_MIN) return false;
  out = static_cast<int64_t>(v);
  return true;
}

// Appends a quotient; returns false once convergents no longer fit in 64 bits.
inline bool push_quotient(ContinuedFraction& cf, int64_t a) {
  int64_t p = 0;
  int64_t q = 0;
  if (cf.convergents.empty()) {
    p = a;
    q = 1;
  } else {
    const Convergent& c1 = cf.convergents.back();
    int64_t p0 = 1;
    int64_t q0 = 0;
    if (cf.convergents.size() >= 2) {
      p0 = cf.convergents[cf.convergents.size() - 2].p;
      q0 = cf.convergents[cf.convergents.size() - 2].q;
    }
    if (!checked_mul_add(a, c1.p, p0, p) || !checked_mul_add(a, c1.q, q0, q)) return false;
  }
  cf.partial_quotients.push_back(a);
  cf.convergents.push_back({p, q});
  return true;
}

}  // namespace detail

// Expansion of an exact rational.
inline ContinuedFraction continued_fraction(int64_t num, int64_t den, int depth) {
  if (depth < 1) throw InputError("continued fraction depth must be >= 1");
  if (den == 0) throw InputError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  ContinuedFraction cf;
  while (static_cast<int>(cf.partial_quotients.size()) < depth) {
    int64_t a = floor_div(num, den);
    if (!detail::push_quotient(cf, a)) break;
    int64_t r = num - a * den;
    if (r == 0) {
      cf.terminated = true;
      break;
    }
    num = den;
    den = r;
  }
  return cf;
}

// Expansion of x, certified against the error bound of its master value:
// each quotient is the common floor of the interval [x - err, x + err]
// pushed through the Gauss map.
inline ContinuedFraction continued_fraction(const ExtendedReal& x, int depth) {
  if (depth < 1) throw InputError("continued fraction depth must be >= 1");
  if (const auto& r = x.rational()) return continued_fraction(r->num, r->den, depth);

  using boost::multiprecision::floor;
  // Interval arithmetic slack for the 110-digit operations themselves.
  const BigFloat ulp = boost::multiprecision::pow(BigFloat(10), -105);
  BigFloat err = BigFloat(x.master_error()) + ulp;
  BigFloat lo = x.big() - err;
  BigFloat hi = x.big() + err;
  ContinuedFraction cf;
  while (static_cast<int>(cf.partial_quotients.size()) < depth) {
    BigFloat fl = floor(lo);
    if (fl != floor(hi)) {
      throw PrecisionExhausted("continued fraction quotient " +
                               std::to_string(cf.partial_quotients.size()) +
                               " is ambiguous at " + std::to_string(x.digits()) + " digits");
    }
    if (abs(fl) > BigFloat(INT64_MAX / 2)) break;
    if (!detail::push_quotient(cf, fl.convert_to<int64_t>())) break;
    BigFloat flo = lo - fl;
    BigFloat fhi = hi - fl;
    if (flo <= 0) {
      throw PrecisionExhausted("continued fraction remainder indistinguishable from zero at " +
                               std::to_string(x.digits()) + " digits");
    }
    BigFloat nlo = 1 / fhi;
    BigFloat nhi = 1 / flo;
    lo = nlo * (1 - ulp);
    hi = nhi * (1 + ulp);
  }
  return cf;
}

// Convergents of x with denominator at most q_max.
inline std::vector<Convergent> convergents_up_to(const ExtendedReal& x, int64_t q_max) {
  int depth = 8;
  for (;;) {
    ContinuedFraction cf = continued_fraction(x, depth);
    std::vector<Convergent> out;
    bool exceeded = false;
    for (const auto& c : cf.convergents) {
      if (c.q > q_max) {
        exceeded = true;
        break;
      }
      out.push_back(c);
    }
    if (exceeded || cf.terminated || static_cast<int>(cf.partial_quotients.size()) < depth)
      return out;
    depth *= 2;
  }
}

struct DiophantineEstimate {
  double kappa = 2.0;      // reported estimate
  double slope = 0.0;      // least-squares slope before the Dirichlet floor
  double max_ratio = 0.0;  // largest single-convergent log ratio
  int points = 0;
};

// Fits log(1/|x - p/q|) = kappa log q + c over the convergents with
// 2 <= q <= q_max. The additive constant absorbs C in |x - p/q| > C/q^kappa,
// which a single-convergent ratio cannot separate from kappa at finite q.
// Every irrational admits infinitely many p/q within 1/q^2, so the estimate
// is floored at 2.
inline DiophantineEstimate diophantine_type_details(const ExtendedReal& x, int64_t q_max) {
  if (x.rational()) throw InputError("diophantine type requested for a rational value");
  std::vector<Convergent> conv = convergents_up_to(x, q_max);
  std::vector<double> lx;
  std::vector<double> ly;
  DiophantineEstimate out;
  for (const auto& c : conv) {
    if (c.q < 2) continue;
    BigFloat diff = abs(x.big() - BigFloat(c.p) / BigFloat(c.q));
    if (diff <= BigFloat(x.master_error()) * 4) {
      throw PrecisionExhausted("approximation error of convergent below working precision");
    }
    double lq = std::log(static_cast<double>(c.q));
    double le = -boost::multiprecision::log(diff).convert_to<double>();
    lx.push_back(lq);
    ly.push_back(le);
    out.max_ratio = std::max(out.max_ratio, le / lq);
  }
  out.points = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    out.slope = out.max_ratio;
  } else {
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    out.slope = sxx > 0 ? sxy / sxx : out.max_ratio;
  }
  out.kappa = std::max(2.0, out.slope);
  return out;
}

inline double diophantine_type_estimate(const ExtendedReal& x, int64_t q_max) {
  return diophantine_type_details(x, q_max).kappa;
}

enum class Parity { b_even, a_even };

struct BezoutSolution {
  int64_t a = 0;
  int64_t b = 0;
  int64_t k = 0;
  int64_t n = 1;
  Parity parity = Parity::b_even;
};

inline bool is_valid_bezout(int64_t a, int64_t b, int64_t k, int64_t n, Parity parity) {
  i128 lhs = static_cast<i128>(a) * k + static_cast<i128>(b) * n;
  if (lhs != -1) return false;
  return parity == Parity::b_even ? (b % 2 == 0) : (a % 2 == 0);
}

// Solution of a k + b n = -1 with the constrained entry even. A b-even
// solution exists iff k is odd and an a-even solution iff n is odd. Among
// valid solutions the one with the smallest |a| is returned, ties to a >= 0.
inline BezoutSolution bezout_with_parity(int64_t k, int64_t n, Parity parity) {
  if (n < 1) throw InputError("bezout_with_parity needs n >= 1");
  if (std::gcd(k, n) != 1) {
    throw InputError("bezout_with_parity needs gcd(k, n) = 1, got k=" + std::to_string(k) +
                     ", n=" + std::to_string(n));
  }
  if (parity == Parity::b_even && k % 2 == 0) {
    throw InputError("no solution with b even: k=" + std::to_string(k) + " is even");
  }
  if (parity == Parity::a_even && n % 2 == 0) {
    throw InputError("no solution with a even: n=" + std::to_string(n) + " is even");
  }
  // Extended Euclid on (k mod n, n) in 128-bit to keep products exact.
  i128 r0 = mod_floor(static_cast<i128>(k), static_cast<i128>(n));
  i128 r1 = n;
  i128 s0 = 1;
  i128 s1 = 0;
  while (r1 != 0) {
    i128 qt = r0 / r1;
    i128 t = r0 - qt * r1;
    r0 = r1;
    r1 = t;
    t = s0 - qt * s1;
    s0 = s1;
    s1 = t;
  }
  // s0 * k == 1 (mod n); a0 in [0, n) solves a k == -1 (mod n).
  i128 a0 = mod_floor(-s0, static_cast<i128>(n));
  if (n == 1) a0 = 0;
  // Valid a form a progression a0 + n t with the parity condition selecting
  // every t or every other t; examine the candidates around zero.
  BezoutSolution best;
  bool found = false;
  for (i128 t = -3; t <= 2; ++t) {
    i128 a = a0 + static_cast<i128>(n) * t;
    i128 num = -1 - a * k;
    if (num % n != 0) continue;
    i128 b = num / n;
    bool ok = parity == Parity::b_even ? (b % 2 == 0) : (a % 2 == 0);
    if (!ok) continue;
    i128 abs_a = a < 0 ? -a : a;
    i128 best_abs = best.a < 0 ? -static_cast<i128>(best.a) : static_cast<i128>(best.a);
    if (!found || abs_a < best_abs || (abs_a == best_abs && a > best.a)) {
      best.a = static_cast<int64_t>(a);
      best.b = static_cast<int64_t>(b);
      found = true;
    }
  }
  if (!found) throw InputError("no Bezout solution with requested parity");
  best.k = k;
  best.n = n;
  best.parity = parity;
  return best;
}

struct FareyPair {
  int64_t c = 0;
  int64_t d = 0;
  bool operator==(const FareyPair&) const = default;
  auto operator<=>(const FareyPair&) const = default;
};

// Coprime (c, d) with M/v1 <= c <= M/v0 and |d| <= L c, ordered by c then d.
inline std::vector<FareyPair> farey_band(double M, double v0, double v1, double L) {
  if (!(M > 0)) throw InputError("farey_band needs M > 0");
  if (!(v0 >= 0.25 && v0 < v1)) throw InputError("farey_band needs 1/4 <= v0 < v1");
  if (!(L >= 1)) throw InputError("farey_band needs L >= 1");
  int64_t c_lo = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(M / v1)));
  int64_t c_hi = static_cast<int64_t>(std::floor(M / v0));
  // Guard the endpoints against rounding of the quotient.
  while (c_lo > 1 && (c_lo - 1) * v1 >= M) --c_lo;
  while (c_lo * v1 < M) ++c_lo;
  while ((c_hi + 1) * v0 <= M) ++c_hi;
  while (c_hi >= 1 && c_hi * v0 > M) --c_hi;
  std::vector<FareyPair> out;
  for (int64_t c = c_lo; c <= c_hi; ++c) {
    int64_t dmax = static_cast<int64_t>(std::floor(L * static_cast<double>(c)));
    for (int64_t d = -dmax; d <= dmax; ++d) {
      if (std::gcd(c, d) == 1) out.push_back({c, d});
    }
  }
  return out;
}

struct PrimePower {
  int64_t p = 0;
  int exponent = 0;
};

inline std::vector<PrimePower> factorize(int64_t n) {
  if (n < 1) throw InputError("factorize needs n >= 1");
  std::vector<PrimePower> out;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline int64_t divisor_count(int64_t n) {
  int64_t t = 1;
  for (const auto& f : factorize(n)) t *= f.exponent + 1;
  return t;
}

inline int64_t euler_phi(int64_t n) {
  int64_t r = n;
  for (const auto& f : factorize(n)) r = r / f.p * (f.p - 1);
  return r;
}

inline std::vector<int64_t> divisors(int64_t n) {
  if (n < 1) throw InputError("divisors needs n >= 1");
  std::vector<int64_t> lo;
  std::vector<int64_t> hi;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    lo.push_back(d);
    if (d != n / d) hi.push_back(n / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

// Inverse of k modulo n (gcd(k, n) = 1), in [0, n).
inline int64_t mod_inverse(int64_t k, int64_t n) {
  if (n == 1) return 0;
  i128 r0 = mod_floor(static_cast<i128>(k), static_cast<i128>(n));
  i128 r1 = n;
  i128 s0 = 1;
  i128 s1 = 0;
  while (r1 != 0) {
    i128 q = r0 / r1;
    i128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw InputError("no modular inverse");
  return static_cast<int64_t>(mod_floor(s0, static_cast<i128>(n)));
}

}  // namespace modone
