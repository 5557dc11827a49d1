// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SPHREACH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(SPHREACH_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Data rows of a CSV with a '#' metadata line and a header line.
std::vector<std::vector<std::string>> rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<std::string>> out;
  int n = 0;
  while (std::getline(in, line)) {
    if (n++ < 2) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

std::string header(const fs::path& p) {
  std::ifstream in(p);
  std::string meta, cols;
  std::getline(in, meta);
  std::getline(in, cols);
  CHECK(meta.rfind("# {", 0) == 0);
  return cols;
}

}  // namespace

TEST_CASE("reach on the circle is one") {
  const fs::path out = scratch("reach_d1");
  REQUIRE(run("reach --n 4 --d 1 --out " + out.string()) == 0);
  CHECK(header(out / "reach.csv") == "n,d,mode,value,argmin_theta");
  const auto r = rows(out / "reach.csv");
  REQUIRE(r.size() == 1);
  CHECK(std::stod(r[0][3]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(header(out / "trace.csv") == "theta,value");
  CHECK(fs::exists(out / "reach.json"));
}

TEST_CASE("reach at n = 100 clears the bound") {
  const fs::path out = scratch("reach_100");
  REQUIRE(run("reach --n 100 --d 2 --mode euclidean --out " + out.string()) == 0);
  const double value = std::stod(rows(out / "reach.csv")[0][3]);
  const fs::path bout = scratch("bound_for_reach");
  REQUIRE(run("bound --d 2 --out " + bout.string()) == 0);
  const double bound = std::stod(rows(bout / "bound.csv")[0][4]);
  CHECK(value >= bound - 0.01);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("reach --d 2") == 2);
  CHECK(run("reach --n 3 --mode sideways") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("") == 2);
  CHECK(run("reach --n 0") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("bound files") {
  const fs::path out = scratch("bound");
  REQUIRE(run("bound --d 2 --plot-script --out " + out.string()) == 0);
  CHECK(header(out / "bound.csv") == "d,term_small_y,term_tail,term_odd,bound");
  const auto b = rows(out / "bound.csv");
  CHECK(std::round(std::stod(b[0][2]) * 1e6) / 1e6 == doctest::Approx(0.707107).epsilon(1e-12));
  CHECK(header(out / "curves.csv") == "y,small_y,odd");
  const auto c = rows(out / "curves.csv");
  CHECK(std::stod(c[0][0]) == 0.0);
  CHECK(std::round(std::stod(c[0][1]) * 1e6) / 1e6 == doctest::Approx(0.816497).epsilon(1e-12));
  CHECK(fs::exists(out / "curves.gp"));

  const fs::path out3 = scratch("bound3");
  REQUIRE(run("bound --d 3 --out " + out3.string()) == 0);
  const auto b3 = rows(out3 / "bound.csv");
  for (int i = 1; i <= 3; ++i) CHECK(std::stod(b3[0][i]) > 0.0);
}

TEST_CASE("tail files agree and flag out-of-range levels") {
  const fs::path out = scratch("tail");
  REQUIRE(run("tail --n 5 --d 2 --u-min 0 --u-max 2 --u-steps 41 --out " + out.string()) == 0);
  CHECK(header(out / "tail.csv") == "u,rho,probability,valid,p0,p1,p2");
  CHECK(header(out / "tail2d.csv") == "u,rho,probability,valid");
  const auto g = rows(out / "tail.csv");
  const auto c = rows(out / "tail2d.csv");
  REQUIRE(g.size() == 41);
  REQUIRE(c.size() == 41);
  const double top = std::sqrt(11.0 / (4.0 * M_PI));
  double prev = 2.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = std::stod(g[i][0]);
    if (u <= 0.0 || u > top) {
      CHECK(g[i][2] == "nan");
      CHECK(g[i][3] == "0");
      continue;
    }
    const double p = std::stod(g[i][2]);
    CHECK(p == doctest::Approx(std::stod(c[i][2])).epsilon(1e-8));
    if (g[i][3] == "1") {
      CHECK(p <= prev + 1e-14);
      prev = p;
    }
  }
  // The maximum itself: probability exactly zero.
  const fs::path top_out = scratch("tail_top");
  REQUIRE(run("tail --n 5 --d 2 --u-min " + std::to_string(top) + " --u-max " +
              std::to_string(top) + " --u-steps 1 --out " + top_out.string()) == 0);
}

TEST_CASE("simulate is byte-identical for a fixed seed and rejects coarse meshes") {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  const std::string args = "simulate --n 3 --samples 400 --seed 9 --u-steps 4 ";
  REQUIRE(run(args + "--threads 1 --out " + a.string()) == 0);
  REQUIRE(run(args + "--threads 3 --out " + b.string()) == 0);
  CHECK(slurp(a / "sim.json") == slurp(b / "sim.json"));
  CHECK(slurp(a / "sim_tail.csv") == slurp(b / "sim_tail.csv"));
  CHECK(header(a / "sim_tail.csv") == "u,estimate,std_error,n_samples,seed");
  CHECK(header(a / "sim_ec.csv") == "u,estimate,std_error,n_samples,seed");
  CHECK(fs::exists(a / "sim_tube.csv"));

  const fs::path c = scratch("sim_coarse");
  CHECK(run("simulate --n 3 --samples 10 --mesh-level 2 --out " + c.string()) == 2);
  CHECK(!fs::exists(c / "sim.json"));
  CHECK(run("simulate --n 3 --d 3 --samples 10 --out " + c.string()) == 2);
}

TEST_CASE("outputs reproduce from their own metadata") {
  const fs::path a = scratch("cfg_a"), b = scratch("cfg_b");
  REQUIRE(run("reach --n 7 --d 2 --mode spherical --out " + a.string()) == 0);
  REQUIRE(run("reach --config " + (a / "reach.json").string() + " --out " + b.string()) == 0);
  CHECK(slurp(a / "reach.csv") == slurp(b / "reach.csv"));
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));

  const fs::path c = scratch("cfg_c"), d = scratch("cfg_d");
  REQUIRE(run("simulate --n 2 --samples 200 --seed 4 --u-steps 3 --out " + c.string()) == 0);
  REQUIRE(run("simulate --config " + (c / "sim.json").string() + " --out " + d.string()) == 0);
  CHECK(slurp(c / "sim.json") == slurp(d / "sim.json"));

  // A config written by another command is refused.
  CHECK(run("tail --config " + (a / "reach.json").string()) == 2);
}

TEST_CASE("verify --fast succeeds") {
  CHECK(run("verify --fast") == 0);
}
