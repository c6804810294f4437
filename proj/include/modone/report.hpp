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

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "modone/core.hpp"
#include "modone/discrepancy.hpp"
#include "modone/extended_real.hpp"
#include "modone/geometry.hpp"
#include "modone/interval_set.hpp"
#include "modone/oppenheim.hpp"
#include "modone/parallel.hpp"
#include "modone/sequences.hpp"
#include "modone/smooth.hpp"
#include "modone/statistics.hpp"
#include "modone/theta.hpp"

namespace modone {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "modone/1";

enum class OutputFormat { json, csv };

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"paircorr", "gaps",      "smooth",      "qn",        "theta-verify",
                                                 "equidist", "conjecture", "discrepancy", "oppenheim", "report"};
  return names;
}

struct RunConfig {
  std::string command;
  std::string alpha = "sqrt:2";
  std::string alpha_decimal;  // filled by resolve()
  std::string beta = "1";
  int64_t N = 1000;
  int64_t M = 100;
  double eta = 0.95;
  double eta1 = 0.5;
  std::string eta2 = "sqrt:2";
  std::string range;  // "lo:hi"; empty means the command default
  int bins = 0;       // 0 means the command default
  std::string A = "[-1,1]";
  std::string B1 = "(0,1]";
  std::string B2 = "(0,1]";
  int64_t m = 0;      // Erdős–Turán cutoff, 0 means N
  int64_t c = 5003;
  std::string sweep;  // discrepancy "a:b:step"
  int trials = 20;
  uint64_t seed = 1;
  int precision = kDefaultDigits;
  bool deterministic = false;
  int threads = 0;
  OutputFormat format = OutputFormat::json;
  std::string out;  // path, empty for stdout

  // Default histogram window and bin count per command.
  std::pair<double, double> range_or_default() const {
    if (range.empty()) return command == "gaps" ? std::make_pair(0.0, 6.0) : std::make_pair(0.0, 4.0);
    const size_t colon = range.find(':');
    if (colon == std::string::npos) throw InputError("--range must look like lo:hi, got '" + range + "'");
    try {
      size_t used = 0;
      const double lo = std::stod(range.substr(0, colon), &used);
      if (used != colon) throw InputError("");
      const std::string rest = range.substr(colon + 1);
      const double hi = std::stod(rest, &used);
      if (used != rest.size()) throw InputError("");
      if (!(lo < hi)) throw InputError("--range needs lo < hi, got '" + range + "'");
      return {lo, hi};
    } catch (const InputError& e) {
      if (std::string(e.what()).empty()) throw InputError("--range must look like lo:hi, got '" + range + "'");
      throw;
    } catch (const std::exception&) {
      throw InputError("--range must look like lo:hi, got '" + range + "'");
    }
  }
  int bins_or_default() const { return bins > 0 ? bins : (command == "gaps" ? 50 : 16); }

  std::vector<int64_t> sweep_values() const {
    if (sweep.empty()) return {N};
    int64_t a = 0;
    int64_t b = 0;
    int64_t s = 1;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(sweep);
    in >> a >> c1 >> b;
    if (!in || c1 != ':') throw InputError("--sweep must look like a:b or a:b:step, got '" + sweep + "'");
    if (in >> c2) {
      if (c2 != ':' || !(in >> s)) throw InputError("--sweep must look like a:b:step, got '" + sweep + "'");
    }
    if (a < 1 || b < a || s < 1) throw InputError("--sweep needs 1 <= a <= b and step >= 1");
    if ((b - a) / s > 100000) throw InputError("--sweep is limited to 1e5 values");
    std::vector<int64_t> v;
    for (int64_t n = a; n <= b; n += s) v.push_back(n);
    return v;
  }

  ExtendedReal alpha_value() const { return ExtendedReal::parse(alpha, precision); }
  ExtendedReal beta_value() const { return ExtendedReal::parse(beta, precision); }

  // Checks combinations and resolves the alpha decimal. Throws InputError.
  void resolve() {
    bool known = false;
    for (const auto& n : command_names()) known = known || n == command;
    if (!known) throw InputError("unknown command '" + command + "'");
    if (precision < 8 || precision > kMaxDigits)
      throw InputError("precision must lie in [8, " + std::to_string(kMaxDigits) + "] digits");
    if (threads < 0) throw InputError("--threads must be >= 0");
    if (trials < 1) throw InputError("--trials must be >= 1");
    alpha_decimal = alpha_value().decimal();
    if (beta_value().big() == 0) throw InputError("--beta must be nonzero");
    const bool uses_N = command == "paircorr" || command == "gaps" || command == "smooth" || command == "qn" ||
                        command == "discrepancy" || command == "report";
    if (uses_N && N < 1) throw InputError("--N must be >= 1");
    if ((command == "paircorr" || command == "gaps") && N < 2) throw InputError(command + " needs --N >= 2");
    if (command == "gaps" && N > 50'000'000) throw InputError("gaps is limited to N <= 5e7");
    if (command == "paircorr" && N > 20'000'000) throw InputError("paircorr is limited to N <= 2e7");
    if (command == "qn" && N > 200000) throw InputError("qn sums O(N^2) terms; use N <= 2e5");
    if ((command == "equidist" || command == "oppenheim") && M < 1) throw InputError("--M must be >= 1");
    if (command == "oppenheim" && M > 2000) throw InputError("oppenheim counts O(M^4) points; use M <= 2000");
    if (command == "equidist" && M > 100000) throw InputError("equidist is limited to M <= 1e5");
    if (command == "conjecture" && c < 2) throw InputError("--c must be >= 2");
    if (bins < 0 || bins > 100000) throw InputError("--bins must lie in [1, 1e5]");
    if (!(eta > 0 && eta <= 1)) throw InputError("--eta must lie in (0, 1]");
    if (m < 0) throw InputError("--m must be >= 0");
    if (format == OutputFormat::csv && command != "paircorr" && command != "gaps" && command != "discrepancy" &&
        command != "oppenheim") {
      throw InputError("csv output is available for paircorr, gaps, discrepancy and oppenheim; use --format json for " +
                       command);
    }
    if (!sweep.empty() && command != "discrepancy") throw InputError("--sweep applies to discrepancy only");
    (void)range_or_default();
    (void)sweep_values();
    IntervalSet::parse(A);
    IntervalSet::parse(B1);
    IntervalSet::parse(B2);
    ExtendedReal::parse(eta2, precision);
  }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["alpha"] = alpha;
    j["alpha_decimal"] = alpha_decimal;
    j["beta"] = beta;
    j["N"] = N;
    j["M"] = M;
    j["eta"] = eta;
    j["eta1"] = eta1;
    j["eta2"] = eta2;
    j["range"] = range;
    j["bins"] = bins;
    j["A"] = A;
    j["B1"] = B1;
    j["B2"] = B2;
    j["m"] = m;
    j["c"] = c;
    j["sweep"] = sweep;
    j["trials"] = trials;
    j["seed"] = seed;
    j["precision"] = precision;
    j["deterministic"] = deterministic;
    j["threads"] = threads;
    j["format"] = format == OutputFormat::csv ? "csv" : "json";
    j["out"] = out;
    return j;
  }

  static RunConfig from_json(const Json& j) {
    RunConfig r;
    r.command = j.at("command").get<std::string>();
    r.alpha = j.at("alpha").get<std::string>();
    r.alpha_decimal = j.at("alpha_decimal").get<std::string>();
    r.beta = j.at("beta").get<std::string>();
    r.N = j.at("N").get<int64_t>();
    r.M = j.at("M").get<int64_t>();
    r.eta = j.at("eta").get<double>();
    r.eta1 = j.at("eta1").get<double>();
    r.eta2 = j.at("eta2").get<std::string>();
    r.range = j.at("range").get<std::string>();
    r.bins = j.at("bins").get<int>();
    r.A = j.at("A").get<std::string>();
    r.B1 = j.at("B1").get<std::string>();
    r.B2 = j.at("B2").get<std::string>();
    r.m = j.at("m").get<int64_t>();
    r.c = j.at("c").get<int64_t>();
    r.sweep = j.at("sweep").get<std::string>();
    r.trials = j.at("trials").get<int>();
    r.seed = j.at("seed").get<uint64_t>();
    r.precision = j.at("precision").get<int>();
    r.deterministic = j.at("deterministic").get<bool>();
    r.threads = j.at("threads").get<int>();
    const std::string f = j.at("format").get<std::string>();
    if (f != "json" && f != "csv") throw InputError("format must be json or csv");
    r.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
    r.out = j.at("out").get<std::string>();
    return r;
  }

  bool operator==(const RunConfig&) const = default;
};

// One result table: JSON payload plus optional CSV rows.
struct CommandResult {
  Json results;
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
};

namespace detail {

inline SequenceSpec sequence_of(const RunConfig& cfg) {
  SequenceSpec s;
  s.alpha = cfg.alpha_value();
  s.beta = cfg.beta_value();
  s.N = cfg.N;
  return s;
}

inline Json histogram_json(const CorrelationHistogram& h, CommandResult& r) {
  Json bins = Json::array();
  r.csv_header = {"bin_lo", "bin_hi", "density"};
  for (size_t k = 0; k + 1 < h.bin_edges.size(); ++k) {
    const double d = h.density(k);
    bins.push_back({{"bin_lo", h.bin_edges[k]}, {"bin_hi", h.bin_edges[k + 1]}, {"count", h.counts[k]}, {"density", d}});
    r.csv_rows.push_back({h.bin_edges[k], h.bin_edges[k + 1], d});
  }
  return bins;
}

// Separable observable and window nu shared by equidist and conjecture.
inline TestFunction default_nu() { return TestFunction::bump(1.0, 0.5, 0.5); }
inline TestObservable default_observable() {
  return TestObservable::separable(FiberWeight::smooth_weight(TestFunction::bump(1.0, 0.75, 0.25)),
                                   TrigPoly{1.0, {0.5}, {}}, TrigPoly{1.0, {0.3}, {0.2}});
}
inline TestObservable conjecture_observable() {
  return TestObservable::separable(FiberWeight::absent(), TrigPoly{1.0, {0.5}, {}}, TrigPoly{1.0, {0.3}, {0.2}});
}

inline CommandResult run_paircorr(const RunConfig& cfg) {
  CommandResult r;
  const auto [lo, hi] = cfg.range_or_default();
  const CorrelationHistogram h = pair_correlation_histogram(sequence_of(cfg), uniform_edges(lo, hi, cfg.bins_or_default()));
  double dev = 0.0;
  for (size_t k = 0; k < h.counts.size(); ++k) dev = std::max(dev, std::abs(h.density(k) - 1.0));
  r.results["bins"] = histogram_json(h, r);
  r.results["max_abs_deviation_from_1"] = dev;
  r.results["ambiguous"] = h.ambiguous;
  return r;
}

inline CommandResult run_gaps(const RunConfig& cfg) {
  CommandResult r;
  const auto [lo, hi] = cfg.range_or_default();
  const GapSample g = gap_distribution(sequence_of(cfg));
  const CorrelationHistogram h = gap_histogram(g, uniform_edges(lo, hi, cfg.bins_or_default()));
  r.results["bins"] = histogram_json(h, r);
  r.results["cdf_sup_distance_exponential"] = gap_cdf_distance(g, [](double s) { return 1.0 - std::exp(-s); }, 0.0, 6.0);
  r.results["gaps"] = static_cast<int64_t>(g.scaled_gaps.size());
  return r;
}

inline CommandResult run_smooth(const RunConfig& cfg) {
  CommandResult r;
  const TestFunction f = TestFunction::bump(1.0, 0.0, 1.0);
  const TestFunction h = TestFunction::bump(1.0, 0.5, 0.5);
  const double value = smooth_pair_correlation(sequence_of(cfg), f, h);
  const double h0 = h.integral().real();
  r.results["f"] = "bump(center 0, radius 1)";
  r.results["h"] = "bump(center 1/2, radius 1/2)";
  r.results["value"] = value;
  // int f * h^(0)^2 + f(0) ||h||^2, the uncorrelated limit.
  r.results["poisson_limit"] = f.integral().real() * h0 * h0 + f.real(0.0) * h.l2_norm_sq();
  return r;
}

inline CommandResult run_qn(const RunConfig& cfg) {
  CommandResult r;
  const TestFunction nu = TestFunction::bump(1.0, 0.0, 1.0);
  const TestFunction h = TestFunction::bump(1.0, 0.5, 0.5);
  const SequenceSpec s = sequence_of(cfg);
  const double direct = q_n_direct(s, nu, h);
  r.results["nu"] = "bump(center 0, radius 1)";
  r.results["h"] = "bump(center 1/2, radius 1/2)";
  r.results["direct"] = direct;
  if (cfg.N <= 4000) {
    const double theta = q_n_theta(s, nu, h);
    r.results["theta"] = theta;
    r.results["abs_difference"] = std::abs(direct - theta);
  }
  r.results["main_term"] = nu.fourier().real(0.0) * h.l2_norm_sq();
  return r;
}

inline CommandResult run_theta_verify(const RunConfig& cfg) {
  CommandResult r;
  const TestFunction f = TestFunction::gaussian(1.0, 0.2, 0.8);
  const ThetaVerifyReport t = theta_verify(f, cfg.trials, cfg.trials, cfg.seed);
  r.results["f"] = "gaussian(center 0.2, sigma 0.8)";
  r.results["points"] = t.points;
  r.results["elements"] = t.elements;
  r.results["checked"] = t.checked;
  r.results["max_invariance_deviation"] = t.max_invariance_dev;
  r.results["torus_integral"] = t.torus_integral;
  r.results["l2_norm_sq"] = t.l2_norm_sq;
  r.results["max_unitarity_deviation"] = t.max_unitarity_dev;
  r.results["cusp_checked"] = t.cusp_checked;
  r.results["cusp_violations"] = t.cusp_violations;
  return r;
}

inline Json equidist_json(const EquidistributionResult& e) {
  return {{"lhs", e.lhs}, {"rhs", e.rhs}, {"relative_error", e.relative_error}, {"terms", e.terms},
          {"observable", e.observable}};
}

inline CommandResult run_equidist(const RunConfig& cfg) {
  CommandResult r;
  const double eta2 = ExtendedReal::parse(cfg.eta2, cfg.precision).value();
  r.results = equidist_json(equidistribution(static_cast<double>(cfg.M), cfg.eta1, eta2, default_nu(),
                                             default_observable()));
  return r;
}

inline CommandResult run_conjecture(const RunConfig& cfg) {
  CommandResult r;
  r.results = equidist_json(conjecture_experiment(cfg.c, cfg.alpha_value(), default_nu(), conjecture_observable()));
  return r;
}

inline CommandResult run_discrepancy(const RunConfig& cfg) {
  CommandResult r;
  r.csv_header = {"N", "d_exact", "et_bound", "m_used", "tau_N"};
  Json rows = Json::array();
  const ExtendedReal a = cfg.alpha_value();
  for (int64_t n : cfg.sweep_values()) {
    const DiscrepancyReport d = discrepancy_report(n, a, cfg.m);
    rows.push_back({{"N", d.N}, {"d_exact", d.d_exact}, {"et_bound", d.et_bound}, {"m_used", d.m_used},
                    {"tau_N", d.tau_N}, {"close_points", d.close_points}});
    r.csv_rows.push_back({static_cast<double>(d.N), d.d_exact, d.et_bound, static_cast<double>(d.m_used),
                          static_cast<double>(d.tau_N)});
  }
  r.results["rows"] = rows;
  return r;
}

inline CommandResult run_oppenheim(const RunConfig& cfg) {
  CommandResult r;
  const OppenheimReport o = oppenheim_report(cfg.M, IntervalSet::parse(cfg.A), IntervalSet::parse(cfg.B1),
                                             IntervalSet::parse(cfg.B2), FormSpec{cfg.alpha_value(), cfg.beta_value()});
  r.results = {{"M", o.M}, {"count_side", o.count_side}, {"volume_side", o.volume_side},
               {"relative_error", o.relative_error}, {"ambiguous", o.ambiguous}};
  r.csv_header = {"M", "count_side", "volume_side", "relative_error"};
  r.csv_rows.push_back({static_cast<double>(o.M), o.count_side, o.volume_side, o.relative_error});
  return r;
}

// A short battery at the configured alpha and N.
inline CommandResult run_report(const RunConfig& cfg) {
  CommandResult r;
  RunConfig sub = cfg;
  sub.command = "paircorr";
  r.results["paircorr"] = run_paircorr(sub).results;
  sub.command = "gaps";
  sub.range.clear();
  sub.bins = 0;
  r.results["gaps"] = run_gaps(sub).results;
  sub.command = "discrepancy";
  sub.sweep.clear();
  r.results["discrepancy"] = run_discrepancy(sub).results;
  sub.command = "oppenheim";
  sub.M = std::min<int64_t>(cfg.M, 50);
  r.results["oppenheim"] = run_oppenheim(sub).results;
  // (1/M^eta) sum_{M <= N <= M + M^eta} R_2,N(A).
  const IntervalSet A = IntervalSet::parse(cfg.A);
  const SequenceSpec base = sequence_of(cfg);
  const WindowAverage w = window_average_sharp(
      [&](int64_t n) {
        SequenceSpec s = base;
        s.N = n;
        return pair_correlation(s, A).value;
      },
      std::max<int64_t>(cfg.M, 2), cfg.eta);
  r.results["window_average"] = {{"M", std::max<int64_t>(cfg.M, 2)}, {"eta", cfg.eta}, {"value", w.value},
                                 {"terms", w.terms}, {"limit", A.total_length()}};
  return r;
}

inline CommandResult dispatch(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "paircorr") return run_paircorr(cfg);
  if (c == "gaps") return run_gaps(cfg);
  if (c == "smooth") return run_smooth(cfg);
  if (c == "qn") return run_qn(cfg);
  if (c == "theta-verify") return run_theta_verify(cfg);
  if (c == "equidist") return run_equidist(cfg);
  if (c == "conjecture") return run_conjecture(cfg);
  if (c == "discrepancy") return run_discrepancy(cfg);
  if (c == "oppenheim") return run_oppenheim(cfg);
  if (c == "report") return run_report(cfg);
  throw InputError("unknown command '" + c + "'");
}

// Shortest round-trip rendering, "." decimal point regardless of locale.
inline std::string csv_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// schema-versioned JSON document or CSV table for one finished command.
inline std::string emit_report(const RunConfig& cfg, const CommandResult& res, double seconds) {
  if (cfg.format == OutputFormat::csv) {
    std::string s;
    for (size_t i = 0; i < res.csv_header.size(); ++i) s += (i ? "," : "") + res.csv_header[i];
    s += "\n";
    for (const auto& row : res.csv_rows) {
      for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + detail::csv_number(row[i]);
      s += "\n";
    }
    return s;
  }
  Json doc;
  doc["schema"] = kSchema;
  doc["command"] = cfg.command;
  doc["config"] = cfg.to_json();
  doc["results"] = res.results;
  if (cfg.deterministic) {
    doc["timing"] = {{"seconds", nullptr}, {"deterministic", true}};
  } else {
    doc["timing"] = {{"seconds", seconds}, {"deterministic", false}};
  }
  return doc.dump(2) + "\n";
}

struct RunOutcome {
  int exit_code = 0;
  std::string document;  // report text, also written to cfg.out when set
  std::string error;
};

// Exit 0 on success, 2 on input errors, 3 when the working precision runs out.
inline RunOutcome run(RunConfig cfg) {
  RunOutcome o;
  try {
    cfg.resolve();
    const int saved = thread_limit();
    thread_limit() = cfg.threads;
    const auto t0 = std::chrono::steady_clock::now();
    CommandResult res;
    try {
      res = detail::dispatch(cfg);
    } catch (...) {
      thread_limit() = saved;
      throw;
    }
    thread_limit() = saved;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.document = emit_report(cfg, res, secs);
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) {
        o.exit_code = 2;
        o.error = "cannot open output file '" + cfg.out + "'";
        return o;
      }
      f << o.document;
      if (!f) {
        o.exit_code = 2;
        o.error = "write failed for '" + cfg.out + "'";
        return o;
      }
    }
  } catch (const PrecisionExhausted& e) {
    o.exit_code = 3;
    o.error = std::string("precision exhausted: ") + e.what();
  } catch (const InputError& e) {
    o.exit_code = 2;
    o.error = std::string("input error: ") + e.what();
  }
  return o;
}

}  // namespace modone
