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
#include <sstream>
#include <string>
#include <vector>

#include "modone/core.hpp"

namespace modone {

// Guard band for deciding interval membership of computed differences.
inline constexpr double kBoundaryGuard = 1e-10;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = true;
  bool closed_hi = false;

  double length() const { return hi - lo; }
  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !closed_lo) return false;
    if (x == hi && !closed_hi) return false;
    return true;
  }
};

// Finite union of bounded intervals. Half-open [lo, hi) unless stated.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> list) {
    for (const Interval& i : list) add(i);
  }

  static IntervalSet half_open(double lo, double hi) { return IntervalSet{{lo, hi, true, false}}; }
  static IntervalSet closed(double lo, double hi) { return IntervalSet{{lo, hi, true, true}}; }
  // (lo, hi], the convention for index ranges B.
  static IntervalSet open_closed(double lo, double hi) { return IntervalSet{{lo, hi, false, true}}; }

  // "a:b" is [a, b); bracket forms "[a,b]", "(a,b]", "[a,b)", "(a,b)". Pieces
  // are joined with 'U' or ';'. "empty" is the empty set.
  static IntervalSet parse(const std::string& text) {
    IntervalSet out;
    std::string t;
    for (char ch : text) {
      if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    }
    if (t.empty() || t == "empty") return out;
    size_t pos = 0;
    while (pos <= t.size()) {
      size_t next = t.find_first_of("U;", pos);
      std::string piece = t.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      out.add(parse_piece(piece, text));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return out;
  }

  void add(const Interval& i) {
    if (!std::isfinite(i.lo) || !std::isfinite(i.hi)) throw InputError("interval endpoints must be finite");
    if (i.lo > i.hi) throw InputError("interval with lo > hi");
    if (i.lo == i.hi && !(i.closed_lo && i.closed_hi)) return;
    intervals_.push_back(i);
    normalize();
  }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  double total_length() const {
    double s = 0.0;
    for (const Interval& i : intervals_) s += i.length();
    return s;
  }
  double inf() const { return intervals_.empty() ? 0.0 : intervals_.front().lo; }
  double sup() const { return intervals_.empty() ? 0.0 : intervals_.back().hi; }

  bool contains(double x) const {
    for (const Interval& i : intervals_) {
      if (i.contains(x)) return true;
    }
    return false;
  }
  // Distance from x to the nearest endpoint.
  double boundary_distance(double x) const {
    double d = INFINITY;
    for (const Interval& i : intervals_) d = std::min({d, std::abs(x - i.lo), std::abs(x - i.hi)});
    return d;
  }

  // -A; [lo, hi) becomes (-hi, -lo].
  IntervalSet negated() const {
    IntervalSet out;
    for (const Interval& i : intervals_) out.intervals_.push_back({-i.hi, -i.lo, i.closed_hi, i.closed_lo});
    out.normalize();
    return out;
  }
  IntervalSet scaled(double s) const {
    if (!(s > 0)) throw InputError("interval scale must be positive");
    IntervalSet out;
    for (const Interval& i : intervals_) out.intervals_.push_back({i.lo * s, i.hi * s, i.closed_lo, i.closed_hi});
    out.normalize();
    return out;
  }

  std::string to_string() const {
    if (intervals_.empty()) return "empty";
    std::ostringstream os;
    os.precision(17);
    for (size_t k = 0; k < intervals_.size(); ++k) {
      const Interval& i = intervals_[k];
      if (k) os << "U";
      os << (i.closed_lo ? '[' : '(') << i.lo << ',' << i.hi << (i.closed_hi ? ']' : ')');
    }
    return os.str();
  }

 private:
  static Interval parse_piece(const std::string& p, const std::string& whole) {
    auto bad = [&]() { return InputError("cannot parse interval '" + whole + "' (use a:b or [a,b))"); };
    auto num = [&](const std::string& s) {
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        throw bad();
      }
      if (used != s.size()) throw bad();
      return v;
    };
    if (p.empty()) throw bad();
    if (p.front() == '[' || p.front() == '(') {
      if (p.size() < 5 || (p.back() != ']' && p.back() != ')')) throw bad();
      size_t comma = p.find(',');
      if (comma == std::string::npos) throw bad();
      Interval i{num(p.substr(1, comma - 1)), num(p.substr(comma + 1, p.size() - comma - 2)),
                 p.front() == '[', p.back() == ']'};
      return i;
    }
    size_t colon = p.find(':');
    if (colon == std::string::npos || colon == 0) throw bad();
    return Interval{num(p.substr(0, colon)), num(p.substr(colon + 1)), true, false};
  }

  void normalize() {
    std::sort(intervals_.begin(), intervals_.end(), [](const Interval& x, const Interval& y) {
      if (x.lo != y.lo) return x.lo < y.lo;
      return x.closed_lo && !y.closed_lo;
    });
    std::vector<Interval> merged;
    for (const Interval& i : intervals_) {
      if (!merged.empty()) {
        Interval& m = merged.back();
        bool touch = i.lo < m.hi || (i.lo == m.hi && (m.closed_hi || i.closed_lo));
        if (touch) {
          if (i.hi > m.hi) {
            m.hi = i.hi;
            m.closed_hi = i.closed_hi;
          } else if (i.hi == m.hi) {
            m.closed_hi = m.closed_hi || i.closed_hi;
          }
          continue;
        }
      }
      merged.push_back(i);
    }
    intervals_ = std::move(merged);
  }

  std::vector<Interval> intervals_;
};

}  // namespace modone
