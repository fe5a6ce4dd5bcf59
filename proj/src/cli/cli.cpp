// Copyright 2026 The SNTH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "snth/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "snth/error.hpp"
#include "snth/inference.hpp"
#include "snth/io.hpp"
#include "snth/snth.hpp"

namespace snth {
namespace {

using json = nlohmann::ordered_json;

// Estimates of h below this are shown as 0.
constexpr double kHDisplayFloor = 1e-8;

struct Options {
  std::string input;
  std::vector<std::string> columns;
  std::string params;
  int n = -1;
  std::string seed = "0";
  std::string pair = "0,1";
  std::vector<std::string> ranges;
  std::vector<double> levels;
  std::string mode;
  bool no_joint = false;
  double tol = 1e-8;
  std::string json_out;
};

std::uint64_t ParseSeed(const std::string& s) {
  if (s == "random") return std::random_device{}() * 0x100000001ULL + std::random_device{}();
  std::uint64_t v = 0;
  std::istringstream is(s);
  if (!(is >> v) || !is.eof()) throw DomainError("--seed must be an integer or 'random'");
  return v;
}

SnthParams LoadParams(const std::string& source) {
  if (source.empty()) throw DomainError("--params is required");
  json j;
  try {
    if (source.find('{') != std::string::npos) {
      j = json::parse(source);
    } else {
      std::ifstream in(source);
      if (!in) throw DomainError("cannot read '" + source + "'");
      j = json::parse(in);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed params JSON: ") + e.what());
  }
  if (j.contains("params") && j["params"].is_object()) j = j["params"];
  return ParamsFromJson(j);
}

Dataset LoadData(const Options& o) {
  if (o.input.empty()) throw DomainError("--input is required");
  return SelectColumns(ReadCsvFile(o.input), o.columns);
}

FitConfig ConfigFrom(const Options& o) {
  FitConfig cfg;
  cfg.do_joint_mle = !o.no_joint;
  cfg.optimizer_tol = o.tol;
  cfg.seed = ParseSeed(o.seed);
  cfg.Validate();
  return cfg;
}

void Emit(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2);
  if (path.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << text << '\n';
}

int CmdFit(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset data = LoadData(o);
  const FitConfig cfg = ConfigFrom(o);
  const FitResult r = Fit(data.values, cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  SnthParams shown = r.params;
  for (Eigen::Index j = 0; j < shown.h.size(); ++j) {
    if (shown.h(j) < kHDisplayFloor) shown.h(j) = 0.0;
  }
  json j{{"command", "fit"},
         {"columns", data.columns},
         {"n", data.rows()},
         {"dropped_rows", data.dropped_rows},
         {"params", ToJson(shown)},
         {"stderr", r.stderr_ ? ToJson(*r.stderr_) : json(nullptr)},
         {"stderr_diagnostic", r.stderr_diagnostic},
         {"loglik", r.loglik},
         {"aic", r.aic},
         {"k", r.k},
         {"stage", ToString(r.stage)},
         {"stage1_loglik", r.stage1_loglik},
         {"em_iterations", r.em_iterations},
         {"em_trace", r.em_trace},
         {"converged", r.converged},
         {"message", r.message},
         {"wall_time_seconds", secs}};
  Emit(j, o.json_out, out);
  return r.converged ? kExitOk : kExitNumerical;
}

int CmdSimulate(const Options& o, std::ostream& out) {
  if (o.n < 1) throw DomainError("--n must be a positive integer");
  const SnthParams p = LoadParams(o.params);
  const Matrix y = SnthSample(o.n, p, ParseSeed(o.seed));
  std::vector<std::string> cols;
  for (int j = 0; j < p.dim(); ++j) cols.push_back("y" + std::to_string(j + 1));
  WriteCsv(out, cols, y);
  return kExitOk;
}

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
  double At(int k) const { return lo + (hi - lo) * k / (steps - 1); }
  double Width() const { return (hi - lo) / (steps - 1); }
};

Axis ParseRange(const std::string& s) {
  Axis a;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> a.lo >> c1 >> a.hi >> c2 >> a.steps) || c1 != ':' || c2 != ':' ||
      !is.eof() || !(a.lo < a.hi) || a.steps < 2 || !std::isfinite(a.lo) ||
      !std::isfinite(a.hi)) {
    throw DomainError("bad range '" + s + "'; expected min:max:steps with min < max, steps >= 2");
  }
  return a;
}

int CmdGrid(const Options& o, std::ostream& out) {
  const SnthParams p = LoadParams(o.params);
  if (p.dim() < 2) throw DomainError("grid needs a distribution of dimension >= 2");
  int i = 0, j_index = 0;
  char comma = 0;
  std::istringstream is(o.pair);
  if (!(is >> i >> comma >> j_index) || comma != ',' || !is.eof() || i == j_index || i < 0 ||
      j_index < 0 || i >= p.dim() || j_index >= p.dim()) {
    throw DomainError("bad --pair '" + o.pair + "'");
  }
  if (o.ranges.empty() || o.ranges.size() > 2) {
    throw DomainError("--range must be given once (both axes) or twice");
  }
  const Axis ax = ParseRange(o.ranges[0]);
  const Axis ay = ParseRange(o.ranges.size() == 2 ? o.ranges[1] : o.ranges[0]);
  for (double c : o.levels) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("--levels must lie in (0, 1)");
  }
  // stdout carries the grid itself.
  if (!o.levels.empty() && o.json_out.empty()) {
    throw DomainError("--levels requires --json-out");
  }

  const SnthParams pair = SnthMarginal(p, {i, j_index});
  const SnthLogDensity log_pdf(pair);
  Matrix grid(static_cast<Eigen::Index>(ax.steps) * ay.steps, 3);
  Eigen::Index row = 0;
  for (int a = 0; a < ax.steps; ++a) {
    for (int b = 0; b < ay.steps; ++b) {
      const Vector v = (Vector(2) << ax.At(a), ay.At(b)).finished();
      grid.row(row++) << v(0), v(1), std::exp(log_pdf(v));
    }
  }
  WriteCsv(out, {"x", "y", "pdf"}, grid);

  if (!o.levels.empty()) {
    const double area = ax.Width() * ay.Width();
    std::vector<double> dens(grid.rows());
    for (Eigen::Index k = 0; k < grid.rows(); ++k) dens[k] = grid(k, 2);
    std::sort(dens.begin(), dens.end(), std::greater<>());
    std::vector<double> cum(dens.size());
    double acc = 0.0;
    for (size_t k = 0; k < dens.size(); ++k) cum[k] = (acc += dens[k] * area);
    json levels = json::array();
    for (double c : o.levels) {
      const auto it = std::lower_bound(cum.begin(), cum.end(), c);
      if (it == cum.end()) {
        levels.push_back({{"coverage", c}, {"density", nullptr}, {"enclosed", acc}});
      } else {
        const size_t k = it - cum.begin();
        levels.push_back({{"coverage", c}, {"density", dens[k]}, {"enclosed", cum[k]}});
      }
    }
    json j = json::object();
    j["command"] = "grid";
    j["pair"] = json::array({i, j_index});
    j["grid_mass"] = acc;
    j["levels"] = levels;
    Emit(j, o.json_out, out);
  }
  return kExitOk;
}

int CmdTest(const Options& o, std::ostream& out) {
  TestMode mode;
  if (o.mode == "eta") {
    mode = TestMode::kEtaGivenH;
  } else if (o.mode == "h") {
    mode = TestMode::kHGivenEta;
  } else if (o.mode == "joint") {
    mode = TestMode::kJointBonferroni;
  } else {
    throw DomainError("--mode must be one of eta, h, joint");
  }
  const Dataset data = LoadData(o);
  const FitConfig cfg = ConfigFrom(o);
  const TestResult t = Lrt(data.values, mode, cfg);
  json j = ToJson(t);
  j["command"] = "test";
  j["columns"] = data.columns;
  j["n"] = data.rows();
  Emit(j, o.json_out, out);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skew-normal-Tukey-h distribution tools", "snth"};
  app.require_subcommand(1);
  Options o;

  auto* fit = app.add_subcommand("fit", "Fit an SNTH model to CSV data; JSON on stdout");
  auto* sim = app.add_subcommand("simulate", "Draw SNTH samples; CSV on stdout");
  auto* grid = app.add_subcommand("grid", "Bivariate marginal density on a grid; CSV on stdout");
  auto* test = app.add_subcommand("test", "Likelihood-ratio test; JSON on stdout");

  for (auto* c : {fit, test}) {
    c->add_option("--input", o.input, "CSV data file")->required();
    c->add_option("--columns", o.columns, "Columns to use (names or 0-based indices)")
        ->delimiter(',');
    c->add_flag("--no-joint", o.no_joint, "Stop after marginal fits and EM");
    c->add_option("--tol", o.tol, "Optimizer tolerance");
    c->add_option("--seed", o.seed, "Seed, or 'random'");
    c->add_option("--json-out", o.json_out, "Write JSON here instead of stdout");
  }
  test->add_option("--mode", o.mode, "eta, h or joint")->required();
  for (auto* c : {sim, grid}) {
    c->add_option("--params", o.params, "Parameter JSON file or inline JSON")->required();
  }
  sim->add_option("--n", o.n, "Number of rows")->required();
  sim->add_option("--seed", o.seed, "Seed, or 'random'");
  grid->add_option("--pair", o.pair, "Coordinate pair i,j (0-based)");
  grid->add_option("--range", o.ranges, "min:max:steps, once for both axes or once per axis")
      ->required();
  grid->add_option("--levels", o.levels, "Coverages for density thresholds")->delimiter(',');
  grid->add_option("--json-out", o.json_out, "Where to write the levels JSON");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit->parsed()) return CmdFit(o, out);
    if (sim->parsed()) return CmdSimulate(o, out);
    if (grid->parsed()) return CmdGrid(o, out);
    return CmdTest(o, out);
  } catch (const DomainError& e) {
    err << "snth: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "snth: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "snth: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace snth
