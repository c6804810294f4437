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

#include <CLI11.hpp>
#include <cstdlib>
#include <string>
#include <vector>

#include "modone/report.hpp"

namespace modone::cli {

struct ParseOutcome {
  RunConfig config;
  int exit_code = -1;  // >= 0: stop with this code (help, parse error)
  std::string message;
};

// Flags to RunConfig; MODONE_PRECISION overrides --precision.
inline ParseOutcome parse_args(int argc, const char* const* argv) {
  ParseOutcome res;
  RunConfig& c = res.config;
  CLI::App app{"Pair correlation, theta sums and lattice counts for beta (n - alpha)^2 / (2N) mod 1"};
  app.require_subcommand(1, 1);
  std::string format = "json";
  std::string out;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--alpha", c.alpha, "alpha: decimal, p/q, sqrt:k, golden, pi, e, liouville:J, with +-k offsets")
        ->capture_default_str();
    s->add_option("--beta", c.beta, "beta (nonzero)")->capture_default_str();
    s->add_option("--precision", c.precision, "working precision in decimal digits")->capture_default_str();
    s->add_option("--seed", c.seed, "random seed")->capture_default_str();
    s->add_option("--threads", c.threads, "worker cap, 0 = all cores")->capture_default_str();
    s->add_flag("--deterministic", c.deterministic, "byte-identical output (omits timing)");
    s->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    s->add_option("--out", out, "output path; the words json or csv select the format instead");
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"paircorr", "pair correlation histogram"},
      {"gaps", "nearest-neighbour gap histogram"},
      {"smooth", "smooth pair correlation with bump weights"},
      {"qn", "Q_N by direct Weyl sums and by theta sums"},
      {"theta-verify", "theta invariance, torus integral, unitarity and cusp bound"},
      {"equidist", "horocycle section sums against the Haar integral"},
      {"conjecture", "Heisenberg-fiber sums at one height"},
      {"discrepancy", "exact discrepancy and Erdos-Turan bound"},
      {"oppenheim", "lattice count of the (2,2) form against the volume"},
      {"report", "short battery of the above"},
  };
  for (const Sub& sd : subs) {
    CLI::App* s = app.add_subcommand(sd.name, sd.help);
    add_common(s);
    s->add_option("--N", c.N, "sequence length")->capture_default_str();
    s->add_option("--M", c.M, "scale M")->capture_default_str();
    s->add_option("--eta", c.eta, "window exponent")->capture_default_str();
    s->add_option("--eta1", c.eta1, "first Heisenberg coordinate")->capture_default_str();
    s->add_option("--eta2", c.eta2, "second Heisenberg coordinate (real token)")->capture_default_str();
    s->add_option("--range", c.range, "histogram window lo:hi");
    s->add_option("--bins", c.bins, "histogram bins");
    s->add_option("--A", c.A, "window A, e.g. [-1,1] or 0:1")->capture_default_str();
    s->add_option("--B1", c.B1, "index window B1")->capture_default_str();
    s->add_option("--B2", c.B2, "index window B2")->capture_default_str();
    s->add_option("--m", c.m, "Erdos-Turan cutoff, 0 = N")->capture_default_str();
    s->add_option("--c", c.c, "height c")->capture_default_str();
    s->add_option("--sweep", c.sweep, "discrepancy over N = a:b[:step]");
    s->add_option("--trials", c.trials, "random points and elements")->capture_default_str();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream err;
    res.exit_code = app.exit(e, o, err) == 0 ? 0 : 2;
    res.message = o.str() + err.str();
    return res;
  }
  for (CLI::App* s : app.get_subcommands()) c.command = s->get_name();
  if (out == "json" || out == "csv") {
    format = out;
    out.clear();
  }
  c.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  c.out = out;
  if (const char* env = std::getenv("MODONE_PRECISION")) {
    try {
      size_t used = 0;
      const int p = std::stoi(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("");
      c.precision = p;
    } catch (const std::exception&) {
      res.exit_code = 2;
      res.message = std::string("input error: MODONE_PRECISION must be an integer, got '") + env + "'\n";
    }
  }
  return res;
}

}  // namespace modone::cli
