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
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "modone/core.hpp"

namespace modone {

// Master representation for irrational parameters. 110 decimal digits leave
// headroom above the default working precision of 64 digits.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<110>, boost::multiprecision::et_off>;

inline constexpr int kDefaultDigits = 64;
inline constexpr int kMaxDigits = 100;

struct Rational {
  int64_t num = 0;
  int64_t den = 1;
};

// value = whole + fraction / 2^128, with an absolute error bound.
struct FixedPoint {
  int64_t whole = 0;
  u128 fraction = 0;
  double error = 0.0;
};

inline FixedPoint make_fixed(const BigFloat& v, double error) {
  using boost::multiprecision::floor;
  using boost::multiprecision::ldexp;
  BigFloat fl = floor(v);
  if (abs(fl) > BigFloat(4.0e18)) {
    throw PrecisionExhausted("value too large for fixed-point reduction");
  }
  FixedPoint out;
  out.whole = fl.convert_to<int64_t>();
  BigFloat f = v - fl;
  BigFloat hi = floor(ldexp(f, 64));
  BigFloat lo = floor(ldexp(f, 128) - ldexp(hi, 64));
  uint64_t h = hi.convert_to<uint64_t>();
  uint64_t l = lo.convert_to<uint64_t>();
  out.fraction = (static_cast<u128>(h) << 64) | l;
  // Truncation of the last binary digit.
  BigFloat rest = ldexp(f, 128) - ldexp(hi, 64) - lo;
  bool exact = rest == 0;
  out.error = error + (exact ? 0.0 : std::ldexp(1.0, -128));
  return out;
}

// An irrational or rational parameter given symbolically ("sqrt:2", "golden",
// "pi", "liouville:4", "7/3", "1.25", optionally "pi-3" style integer
// offsets on named constants). Carries the extended-precision master, a
// double mirror, a binary128 mirror and a fixed-point image for exact
// modular reductions.
class ExtendedReal {
 public:
  ExtendedReal() : ExtendedReal(BigFloat(0), "0", kDefaultDigits, Rational{0, 1}) {}

  static ExtendedReal from_integer(int64_t v) {
    return ExtendedReal(BigFloat(v), std::to_string(v), kDefaultDigits, Rational{v, 1});
  }

  static ExtendedReal from_rational(int64_t p, int64_t q, int digits = kDefaultDigits) {
    if (q == 0) throw InputError("zero denominator in rational '" + std::to_string(p) + "/0'");
    if (q < 0) {
      p = -p;
      q = -q;
    }
    return ExtendedReal(BigFloat(p) / BigFloat(q),
                        std::to_string(p) + "/" + std::to_string(q), digits, Rational{p, q});
  }

  static ExtendedReal from_big(const BigFloat& v, std::string text, int digits = kDefaultDigits) {
    return ExtendedReal(v, std::move(text), digits, std::nullopt);
  }

  // Plain doubles are exact dyadic rationals; the value is taken literally.
  static ExtendedReal from_double(double v) {
    return ExtendedReal(BigFloat(v), "double:" + std::to_string(v), kMaxDigits, std::nullopt,
                        true);
  }

  static ExtendedReal parse(const std::string& raw, int digits = kDefaultDigits);

  const BigFloat& big() const { return big_; }
  double value() const { return d_; }
  quad value_q() const { return q_; }
  const FixedPoint& fixed() const { return fixed_; }
  const std::optional<Rational>& rational() const { return rational_; }
  const std::string& text() const { return text_; }
  int digits() const { return digits_; }

  // Absolute error bound of the master value.
  double master_error() const { return master_error_; }

  // Bound on |x| used by error propagation.
  double magnitude() const { return std::abs(d_); }

  // Decimal rendering of the master at the working precision.
  std::string decimal(int digits = -1) const {
    int n = digits < 0 ? digits_ : digits;
    return big_.str(n, std::ios_base::fmtflags(0));
  }

  FixedPoint fixed_of(const BigFloat& derived, double rel_scale) const {
    return make_fixed(derived, master_error_ * rel_scale);
  }

 private:
  ExtendedReal(BigFloat v, std::string text, int digits, std::optional<Rational> rat,
               bool exact_binary = false)
      : big_(std::move(v)), text_(std::move(text)), digits_(digits), rational_(rat) {
    digits_ = std::clamp(digits_, 8, kMaxDigits);
    if (rational_ && !exact_binary) {
      // p/q is exact in binary only for power-of-two q.
      int64_t q = rational_->den;
      bool dyadic = (q & (q - 1)) == 0;
      using boost::multiprecision::abs;
      master_error_ = dyadic ? 0.0 : std::max(abs(big_).convert_to<double>(), 1e-300) * 1e-105;
    } else if (!exact_binary) {
      // Round the master to the working precision.
      std::string s = big_.str(digits_, std::ios_base::scientific);
      big_ = BigFloat(s);
      using boost::multiprecision::abs;
      master_error_ = std::max(abs(big_).convert_to<double>(), 1e-300) * std::pow(10.0, 1 - digits_);
    } else {
      master_error_ = 0.0;
    }
    d_ = big_.convert_to<double>();
    BigFloat r1 = big_ - BigFloat(d_);
    double d1 = r1.convert_to<double>();
    BigFloat r2 = r1 - BigFloat(d1);
    double d2 = r2.convert_to<double>();
    q_ = static_cast<quad>(d_) + static_cast<quad>(d1) + static_cast<quad>(d2);
    fixed_ = make_fixed(big_, master_error_);
  }

  BigFloat big_;
  std::string text_;
  int digits_;
  std::optional<Rational> rational_;
  double master_error_ = 0.0;
  double d_ = 0.0;
  quad q_ = 0;
  FixedPoint fixed_;
};

namespace detail {

inline bool parse_int64(const std::string& s, int64_t& out) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0) return false;
  out = v;
  return true;
}

inline bool is_decimal_literal(const std::string& s) {
  if (s.empty()) return false;
  bool digit = false;
  bool dot = false;
  bool exp = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if ((c == '-' || c == '+') && (i == 0 || s[i - 1] == 'e' || s[i - 1] == 'E')) {
    } else if (c == '.' && !dot && !exp) {
      dot = true;
    } else if ((c == 'e' || c == 'E') && digit && !exp) {
      exp = true;
    } else {
      return false;
    }
  }
  return digit;
}

// Decimal literal as an exact rational when it fits in 64 bits.
inline std::optional<Rational> decimal_as_rational(const std::string& s) {
  if (s.find_first_of("eE") != std::string::npos) return std::nullopt;
  auto dot = s.find('.');
  std::string digits = s;
  int64_t den = 1;
  if (dot != std::string::npos) {
    std::string tail = s.substr(dot + 1);
    if (tail.size() > 17) return std::nullopt;
    digits = s.substr(0, dot) + tail;
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
  }
  if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
  int64_t num = 0;
  if (!parse_int64(digits, num)) return std::nullopt;
  return Rational{num, den};
}

inline BigFloat named_constant(const std::string& name, int digits) {
  using boost::multiprecision::sqrt;
  if (name == "golden") return (1 + sqrt(BigFloat(5))) / 2;
  if (name == "pi") return boost::math::constants::pi<BigFloat>();
  if (name == "e") return boost::math::constants::e<BigFloat>();
  if (name.rfind("sqrt:", 0) == 0) {
    std::string arg = name.substr(5);
    if (!is_decimal_literal(arg)) throw InputError("bad sqrt argument in '" + name + "'");
    BigFloat v(arg);
    if (v < 0) throw InputError("negative sqrt argument in '" + name + "'");
    return sqrt(v);
  }
  if (name.rfind("liouville:", 0) == 0) {
    int64_t terms = 0;
    if (!parse_int64(name.substr(10), terms) || terms < 1 || terms > 5)
      throw InputError("liouville:J needs 1 <= J <= 5, got '" + name + "'");
    BigFloat sum = 0;
    int64_t fact = 1;
    for (int64_t j = 1; j <= terms; ++j) {
      fact *= j;
      if (fact > digits + 8)
        throw PrecisionExhausted("liouville term 10^-" + std::to_string(fact) +
                                 " is below working precision");
      sum += boost::multiprecision::pow(BigFloat(10), -static_cast<int>(fact));
    }
    return sum;
  }
  throw InputError("unknown real token '" + name + "' (expected decimal, p/q, sqrt:k, golden, pi, e, liouville:J)");
}

}  // namespace detail

inline ExtendedReal ExtendedReal::parse(const std::string& raw, int digits) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty real value");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    int64_t p = 0;
    int64_t q = 0;
    if (!detail::parse_int64(s.substr(0, slash), p) || !detail::parse_int64(s.substr(slash + 1), q))
      throw InputError("bad rational '" + raw + "'");
    return from_rational(p, q, digits);
  }
  if (detail::is_decimal_literal(s)) {
    if (auto r = detail::decimal_as_rational(s)) {
      ExtendedReal out(BigFloat(s), s, digits, r);
      return out;
    }
    return ExtendedReal(BigFloat(s), s, digits, std::nullopt);
  }

  bool negate = false;
  std::string body = s;
  if (body[0] == '-') {
    negate = true;
    body = body.substr(1);
  }
  // Integer offset suffix on a named constant: "pi-3", "sqrt:2+1".
  int64_t offset = 0;
  auto pos = body.find_last_of("+-");
  if (pos != std::string::npos && pos > 0) {
    if (!detail::parse_int64(body.substr(pos), offset))
      throw InputError("bad integer offset in '" + raw + "'");
    body = body.substr(0, pos);
  }
  BigFloat v = detail::named_constant(body, digits);
  if (negate) v = -v;
  v += offset;
  return ExtendedReal(v, s, digits, std::nullopt);
}

// frac(t * X / D) for integer t, fixed-point X and modulus D > 0, with an
// absolute error bound. The integer part of t * X is reduced modulo D in
// exact integer arithmetic, so the only rounding is the final division.
struct ReducedPhase {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

struct U256 {
  u128 lo = 0;
  u128 hi = 0;
};

inline U256 mul_u128(u128 a, u128 b) {
  uint64_t a0 = static_cast<uint64_t>(a), a1 = static_cast<uint64_t>(a >> 64);
  uint64_t b0 = static_cast<uint64_t>(b), b1 = static_cast<uint64_t>(b >> 64);
  u128 p00 = static_cast<u128>(a0) * b0;
  u128 p01 = static_cast<u128>(a0) * b1;
  u128 p10 = static_cast<u128>(a1) * b0;
  u128 p11 = static_cast<u128>(a1) * b1;
  u128 mid = (p00 >> 64) + static_cast<uint64_t>(p01) + static_cast<uint64_t>(p10);
  U256 r;
  r.lo = static_cast<uint64_t>(p00) | (mid << 64);
  r.hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  return r;
}

inline u128 mulmod_u128(u128 a, u128 b, u128 m) {
  // Operands are reduced below m < 2^63, so the product fits in 126 bits.
  return (a % m) * (b % m) % m;
}

}  // namespace detail

inline ReducedPhase reduce_product(i128 t, const FixedPoint& x, int64_t modulus) {
  const u128 d = static_cast<u128>(modulus);
  const bool negative = t < 0;
  const u128 ut = negative ? static_cast<u128>(-t) : static_cast<u128>(t);

  // t * whole, reduced mod d.
  u128 whole_mod = static_cast<u128>(mod_floor(static_cast<int64_t>(x.whole), modulus));
  u128 j = detail::mulmod_u128(ut, whole_mod, d);
  detail::U256 p = detail::mul_u128(ut, x.fraction);
  j = (j + p.hi % d) % d;
  double f = std::ldexp(static_cast<double>(static_cast<uint64_t>(p.lo >> 64)), -64) +
             std::ldexp(static_cast<double>(static_cast<uint64_t>(p.lo)), -128);
  double v = (static_cast<double>(j) + f) / static_cast<double>(modulus);
  if (v >= 1.0) v = 0.0;
  if (negative) v = (v == 0.0) ? 0.0 : 1.0 - v;
  if (v >= 1.0) v = 0.0;
  ReducedPhase out;
  out.value = v;
  out.error = static_cast<double>(ut) * x.error / static_cast<double>(modulus) + 4.0e-16;
  return out;
}

inline double add_mod1(double a, double b) {
  double s = a + b;
  if (s >= 1.0) s -= 1.0;
  if (s >= 1.0) s = 0.0;
  return s;
}

}  // namespace modone
