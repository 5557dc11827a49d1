// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "output.hpp"
#include "sphreach/checks.hpp"
#include "sphreach/mesh.hpp"
#include "sphreach/montecarlo.hpp"
#include "sphreach/reach.hpp"
#include "sphreach/specfun.hpp"
#include "sphreach/tube.hpp"

namespace fs = std::filesystem;
using sphreach::cli::CsvWriter;
using sphreach::cli::json;
using sphreach::cli::num;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Everything that determines a run's output. Thread count is left out on
/// purpose: results do not depend on it.
struct RunConfig {
  std::string command;
  std::vector<int> n;
  int d = 2;
  std::string mode = "euclidean";
  double u_min = kNaN;
  double u_max = kNaN;
  int u_steps = 40;
  double rho = kNaN;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  int mesh_level = -1;
  bool fast = false;
  bool tube = true;
  bool plot_script = false;
  std::string out = ".";
  std::string config;
  int threads = 0;
};

json nullable(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json config_json(const RunConfig& c) {
  json j;
  if (c.command == "reach") {
    j = {{"n", c.n}, {"d", c.d}, {"mode", c.mode}};
  } else if (c.command == "bound") {
    j = {{"d", c.d}, {"plot-script", c.plot_script}};
  } else if (c.command == "tail") {
    j = {{"n", c.n},         {"d", c.d},
         {"u-min", nullable(c.u_min)}, {"u-max", nullable(c.u_max)},
         {"u-steps", c.u_steps}, {"rho", nullable(c.rho)}};
  } else if (c.command == "simulate") {
    j = {{"n", c.n},
         {"d", c.d},
         {"u-min", nullable(c.u_min)},
         {"u-max", nullable(c.u_max)},
         {"u-steps", c.u_steps},
         {"rho", nullable(c.rho)},
         {"samples", c.samples},
         {"seed", c.seed},
         {"mesh-level", c.mesh_level},
         {"tube", c.tube}};
  } else if (c.command == "verify") {
    j = {{"fast", c.fast}, {"samples", c.samples}, {"seed", c.seed}};
  }
  return j;
}

json metadata(const RunConfig& c, const std::string& file) {
  return {{"tool", "sphreach"},
          {"version", SPHREACH_VERSION},
          {"command", c.command},
          {"file", file},
          {"config", config_json(c)}};
}

/// Fill options not given on the command line from a JSON config file. The
/// file may be a bare option object or any output of this tool, whose
/// metadata carries the options under "config".
void apply_config_file(CLI::App& sub, RunConfig& c) {
  if (c.config.empty()) return;
  std::ifstream in(c.config);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + c.config);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  if (doc.contains("meta")) doc = doc["meta"];
  if (doc.contains("config")) {
    if (doc.contains("command") && doc["command"] != c.command) {
      throw CLI::ValidationError("--config", "file was written by '" +
                                                 doc["command"].get<std::string>() + "'");
    }
    doc = doc["config"];
  }
  if (!doc.is_object()) throw CLI::ValidationError("--config", "expected a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + it.key());
    } catch (const CLI::OptionNotFound&) {
      throw CLI::ValidationError("--config", "unknown option '" + it.key() + "'");
    }
    if (opt->count() > 0) continue;  // command line wins
    const json& v = it.value();
    if (v.is_null()) continue;
    if (v.is_boolean()) {
      opt->add_result(v.get<bool>() ? "true" : "false");
    } else if (v.is_array()) {
      std::vector<std::string> items;
      for (const auto& e : v) items.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      opt->add_result(items);
    } else {
      opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
    }
    opt->run_callback();
  }
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps <= 1) return {lo};
  for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
  out.back() = hi;
  return out;
}

sphreach::HarmonicIndex single_index(const RunConfig& c) {
  if (c.n.size() != 1) throw std::invalid_argument("expected exactly one --n");
  return sphreach::HarmonicIndex{c.n.front(), c.d};
}

fs::path prepare_out(const RunConfig& c) {
  fs::path out(c.out);
  fs::create_directories(out);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_reach(const RunConfig& c) {
  const sphreach::ReachMode mode = sphreach::parse_reach_mode(c.mode);
  const fs::path out = prepare_out(c);
  std::vector<sphreach::ReachResult> results;
  for (int n : c.n) results.push_back(sphreach::critical_radius({n, c.d}, mode));

  CsvWriter csv(out / "reach.csv", metadata(c, "reach.csv"),
                {"n", "d", "mode", "value", "argmin_theta"});
  json rows = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    csv.row({std::to_string(c.n[i]), std::to_string(c.d), c.mode, num(r.value),
             num(r.argmin_theta)});
    rows.push_back({{"n", c.n[i]},
                    {"d", c.d},
                    {"mode", c.mode},
                    {"value", r.value},
                    {"argmin_theta", r.argmin_theta},
                    {"grid_points", r.grid_points},
                    {"densified", r.densified}});
    const std::string name =
        results.size() == 1 ? "trace.csv" : "trace_n" + std::to_string(c.n[i]) + ".csv";
    CsvWriter trace(out / name, metadata(c, name), {"theta", "value"});
    for (const auto& [theta, v] : r.trace) trace.row({num(theta), num(v)});
    std::cout << "n=" << c.n[i] << " d=" << c.d << " " << c.mode << " " << num(r.value)
              << " at theta=" << num(r.argmin_theta) << '\n';
  }
  sphreach::cli::write_json(out / "reach.json",
                            {{"meta", metadata(c, "reach.json")}, {"results", rows}});
  return 0;
}

int cmd_bound(const RunConfig& c) {
  const sphreach::BoundReport b = sphreach::asymptotic_lower_bound(c.d);
  const fs::path out = prepare_out(c);
  {
    CsvWriter csv(out / "bound.csv", metadata(c, "bound.csv"),
                  {"d", "term_small_y", "term_tail", "term_odd", "bound"});
    csv.row({std::to_string(c.d), num(b.term_small_y), num(b.term_tail), num(b.term_odd),
             num(b.bound)});
  }

  // Dense on [0, 60], geometric beyond, argmins inserted exactly.
  std::vector<double> ys;
  for (int i = 0; i <= 6000; ++i) ys.push_back(0.01 * i);
  for (double y = 60.0 * 1.05; y < b.y_max; y *= 1.05) ys.push_back(y);
  if (b.y_max > 60.0) ys.push_back(b.y_max);
  ys.push_back(b.argmin_small_y);
  ys.push_back(b.argmin_odd);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  {
    CsvWriter csv(out / "curves.csv", metadata(c, "curves.csv"), {"y", "small_y", "odd"});
    for (double y : ys) {
      csv.row({num(y), num(sphreach::small_y_objective(c.d, y)),
               num(sphreach::odd_objective(c.d, y))});
    }
  }
  if (c.plot_script) {
    std::ofstream gp(out / "curves.gp");
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'y'\nset xrange [0:30]\n"
       << "set arrow from graph 0, first " << num(b.term_tail) << " to graph 1, first "
       << num(b.term_tail) << " nohead dt 2\n"
       << "plot 'curves.csv' every ::1 using 1:2 with lines, '' every ::1 using 1:3 with lines\n";
  }
  sphreach::cli::write_json(out / "bound.json",
                            {{"meta", metadata(c, "bound.json")},
                             {"d", b.d},
                             {"term_small_y", b.term_small_y},
                             {"term_tail", b.term_tail},
                             {"term_odd", b.term_odd},
                             {"bound", b.bound},
                             {"argmin_small_y", b.argmin_small_y},
                             {"argmin_odd", b.argmin_odd},
                             {"y_max", b.y_max},
                             {"y_scan", b.y_scan}});
  std::cout << "d=" << c.d << " small_y " << num(b.term_small_y) << " tail " << num(b.term_tail)
            << " odd " << num(b.term_odd) << " bound " << num(b.bound) << '\n';
  return 0;
}

struct Grid {
  double rho_d = 0.0;
  double amplitude = 0.0;
  std::vector<double> u;
};

Grid level_grid(const sphreach::HarmonicIndex& idx, const RunConfig& c) {
  Grid g;
  g.rho_d = std::isnan(c.rho) ? sphreach::spherical_reach(idx).value : c.rho;
  g.amplitude = sphreach::max_amplitude(idx);
  const double threshold = g.amplitude * std::cos(std::min(g.rho_d, M_PI / 2));
  const double lo = std::isnan(c.u_min) ? 0.5 * threshold : c.u_min;
  const double hi = std::isnan(c.u_max) ? g.amplitude : c.u_max;
  if (c.u_steps < 1) throw std::invalid_argument("--u-steps must be positive");
  g.u = linspace(lo, hi, c.u_steps);
  return g;
}

int cmd_tail(const RunConfig& c) {
  const sphreach::HarmonicIndex idx = single_index(c);
  const sphreach::TubeSpec spec = sphreach::tube_spec_for(idx);
  const Grid g = level_grid(idx, c);
  const fs::path out = prepare_out(c);

  std::vector<std::string> cols = {"u", "rho", "probability", "valid"};
  for (int j = 0; j <= c.d; ++j) cols.push_back("p" + std::to_string(j));
  CsvWriter csv(out / "tail.csv", metadata(c, "tail.csv"), cols);
  json rows = json::array();
  for (double u : g.u) {
    std::vector<std::string> cells;
    json row{{"u", u}};
    try {
      const sphreach::TailResult t = sphreach::tail_probability(idx, u, g.rho_d);
      cells = {num(u), num(t.rho), num(t.probability), t.valid ? "1" : "0"};
      json parts = json::array();
      for (int j = 0; j <= c.d; ++j) {
        const double pj =
            spec.kappa * sphreach::f_nj_normalized(spec.ambient_n, j, t.rho) * spec.lk[j];
        cells.push_back(num(pj));
        parts.push_back(pj);
      }
      row.update({{"rho", t.rho}, {"probability", t.probability}, {"valid", t.valid},
                  {"components", parts}});
    } catch (const std::domain_error&) {
      cells = {num(u), "nan", "nan", "0"};
      for (int j = 0; j <= c.d; ++j) cells.push_back("nan");
      row.update({{"rho", nullptr}, {"probability", nullptr}, {"valid", false}});
    }
    csv.row(cells);
    rows.push_back(row);
  }

  json doc{{"meta", metadata(c, "tail.json")},
           {"rho_d", g.rho_d},
           {"max_amplitude", g.amplitude},
           {"kappa", spec.kappa},
           {"rows", rows}};
  if (c.d == 2 && idx.n >= 2) {
    CsvWriter csv2(out / "tail2d.csv", metadata(c, "tail2d.csv"),
                   {"u", "rho", "probability", "valid"});
    for (double u : g.u) {
      try {
        const sphreach::TailResult t = sphreach::tail_probability_2d(idx.n, u, g.rho_d);
        csv2.row({num(u), num(t.rho), num(t.probability), t.valid ? "1" : "0"});
      } catch (const std::domain_error&) {
        csv2.row({num(u), "nan", "nan", "0"});
      }
    }
  }
  sphreach::cli::write_json(out / "tail.json", doc);
  std::cout << "n=" << idx.n << " d=" << idx.d << " rho_d " << num(g.rho_d) << " threshold u "
            << num(g.amplitude * std::cos(g.rho_d)) << ", " << g.u.size() << " levels\n";
  return 0;
}

json report_json(const sphreach::SimReport& r) {
  return {{"level", r.level},
          {"estimate", r.estimate},
          {"std_error", r.std_error},
          {"n_samples", r.n_samples},
          {"seed", r.seed}};
}

int cmd_simulate(const RunConfig& c) {
  const sphreach::HarmonicIndex idx = single_index(c);
  if (idx.d != 2) throw std::invalid_argument("simulate supports d = 2 only");
  if (c.samples < 1) throw std::invalid_argument("--samples must be positive");
  const int level = c.mesh_level >= 0 ? c.mesh_level : sphreach::mesh_level_for(idx.n);
  const sphreach::SphereMesh mesh = sphreach::icosphere(level);
  sphreach::require_resolution(mesh, idx.n);
  const Grid g = level_grid(idx, c);
  for (double u : g.u) {
    if (!(u > 0.0 && u <= g.amplitude)) {
      throw std::invalid_argument("level " + num(u) + " outside (0, " + num(g.amplitude) + "]");
    }
  }

  sphreach::SimulationConfig cfg;
  cfg.idx = idx;
  cfg.u_grid = g.u;
  cfg.n_samples = c.samples;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  cfg.rho_d = g.rho_d;
  cfg.tube_pass = c.tube;
  const sphreach::SimulationResult r = sphreach::simulate(cfg, mesh);
  const sphreach::TubeSpec spec = sphreach::tube_spec_for(idx);
  const fs::path out = prepare_out(c);

  json rows = json::array();
  CsvWriter tail(out / "sim_tail.csv", metadata(c, "sim_tail.csv"),
                 {"u", "estimate", "std_error", "n_samples", "seed"});
  CsvWriter ec(out / "sim_ec.csv", metadata(c, "sim_ec.csv"),
               {"u", "estimate", "std_error", "n_samples", "seed"});
  std::unique_ptr<CsvWriter> tube;
  if (c.tube) {
    tube = std::make_unique<CsvWriter>(out / "sim_tube.csv", metadata(c, "sim_tube.csv"),
                                       std::vector<std::string>{"u", "rho", "estimate", "std_error",
                                                                "n_samples", "seed"});
  }
  auto cells = [](double u, const sphreach::SimReport& s) {
    return std::vector<std::string>{num(u), num(s.estimate), num(s.std_error),
                                    std::to_string(s.n_samples), std::to_string(s.seed)};
  };
  for (std::size_t j = 0; j < g.u.size(); ++j) {
    const double u = g.u[j];
    const sphreach::TailResult formula = sphreach::tail_probability(idx, u, g.rho_d);
    json row{{"u", u},
             {"valid", static_cast<bool>(r.valid[j])},
             {"formula", formula.probability},
             {"tail", report_json(r.tail[j])},
             {"ec", report_json(r.ec[j])}};
    tail.row(cells(u, r.tail[j]));
    ec.row(cells(u, r.ec[j]));
    if (c.tube) {
      row["tube"] = report_json(r.tube[j]);
      row["tube_formula"] = sphreach::tube_fraction(spec, r.tube[j].level);
      auto t = cells(u, r.tube[j]);
      t.insert(t.begin() + 1, num(r.tube[j].level));
      tube->row(t);
    }
    rows.push_back(row);
  }
  sphreach::cli::write_json(out / "sim.json", {{"meta", metadata(c, "sim.json")},
                                               {"mesh_level", level},
                                               {"mesh_vertices", mesh.vertices.size()},
                                               {"rho_d", g.rho_d},
                                               {"kappa", spec.kappa},
                                               {"mean_sup", r.mean_sup},
                                               {"sup_std_error", r.sup_std_error},
                                               {"lemma_checked", r.lemma_checked},
                                               {"lemma_violations", r.lemma_violations},
                                               {"levels", rows}});
  std::cout << "n=" << idx.n << " samples " << c.samples << " mesh level " << level
            << ", lemma violations " << r.lemma_violations << " of " << r.lemma_checked << '\n';
  for (std::size_t j = 0; j < g.u.size(); ++j) {
    std::cout << "  u=" << num(g.u[j]) << (r.valid[j] ? "  " : " *") << " tail "
              << num(r.tail[j].estimate) << " +- " << num(r.tail[j].std_error) << '\n';
  }
  return 0;
}

int cmd_verify(const RunConfig& c) {
  sphreach::VerifyOptions opts;
  opts.fast = c.fast;
  opts.mc_samples = c.samples;
  opts.seed = c.seed;
  opts.threads = c.threads;
  const auto results = sphreach::run_verify(opts);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    std::printf("%-4s %-36s %8.2fs  %s\n", r.passed ? "ok" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    if (!r.passed) failed.push_back(r.name);
  }
  if (failed.empty()) {
    std::printf("all %zu checks passed\n", results.size());
    return 0;
  }
  std::printf("%zu of %zu checks failed:", failed.size(), results.size());
  for (const auto& f : failed) std::printf(" %s", f.c_str());
  std::printf("\n");
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reach and excursion probabilities of random spherical harmonics", "sphreach"};
  app.set_version_flag("--version", std::string(SPHREACH_VERSION));
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--config", c.config, "JSON options, or an output file of an earlier run");
  };
  auto levels = [&c](CLI::App* sub) {
    sub->add_option("--u-min", c.u_min, "lowest level (default: half the threshold level)");
    sub->add_option("--u-max", c.u_max, "highest level (default: the maximum amplitude)");
    sub->add_option("--u-steps", c.u_steps, "number of levels")->capture_default_str();
    sub->add_option("--rho", c.rho, "validity radius (default: the spherical reach)");
  };

  CLI::App* reach = app.add_subcommand("reach", "critical radius of the immersion");
  reach->add_option("--n", c.n, "degree; several values give a table")->expected(1, -1);
  reach->add_option("--d", c.d, "sphere dimension")->capture_default_str();
  reach->add_option("--mode", c.mode, "euclidean or spherical")
      ->check(CLI::IsMember({"euclidean", "spherical"}))
      ->capture_default_str();
  common(reach);

  CLI::App* bound = app.add_subcommand("bound", "asymptotic lower bound and its objectives");
  bound->add_option("--d", c.d, "sphere dimension")->capture_default_str();
  bound->add_flag("--plot-script", c.plot_script, "also write a gnuplot script");
  common(bound);

  CLI::App* tail = app.add_subcommand("tail", "tail probability of the supremum");
  tail->add_option("--n", c.n, "degree")->expected(1);
  tail->add_option("--d", c.d, "sphere dimension")->capture_default_str();
  levels(tail);
  common(tail);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo tail, Euler characteristic, tube");
  sim->add_option("--n", c.n, "degree")->expected(1);
  sim->add_option("--d", c.d, "sphere dimension (2 only)")->capture_default_str();
  levels(sim);
  sim->add_option("--samples", c.samples, "number of fields")->capture_default_str();
  sim->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sim->add_option("--mesh-level", c.mesh_level, "icosphere level (default: coarsest fine enough for n)");
  sim->add_option("--threads", c.threads, "worker threads, 0 for all cores");
  sim->add_option("--tube", c.tube, "run the tube-hit pass")->capture_default_str();
  common(sim);

  CLI::App* verify = app.add_subcommand("verify", "cross-module consistency suite");
  verify->add_flag("--fast", c.fast, "skip the Monte Carlo checks");
  verify->add_option("--samples", c.samples, "Monte Carlo samples")->default_val(20000);
  verify->add_option("--seed", c.seed, "master seed")->default_val(20240611);
  verify->add_option("--threads", c.threads, "worker threads, 0 for all cores");
  verify->add_option("--config", c.config, "JSON options");

  CLI::App* chosen = nullptr;
  try {
    app.parse(argc, argv);
    chosen = app.get_subcommands().front();
    c.command = chosen->get_name();
    apply_config_file(*chosen, c);
    if (c.command != "bound" && c.command != "verify" && c.n.empty()) {
      throw CLI::RequiredError("--n");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0 && chosen != nullptr) std::cerr << chosen->help();
    return code == 0 ? 0 : 2;
  }

  try {
    if (c.command == "reach") return cmd_reach(c);
    if (c.command == "bound") return cmd_bound(c);
    if (c.command == "tail") return cmd_tail(c);
    if (c.command == "simulate") return cmd_simulate(c);
    return cmd_verify(c);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
