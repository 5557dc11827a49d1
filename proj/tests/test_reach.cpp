// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gegenbauer.hpp>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "sphreach/reach.hpp"

using namespace sphreach;

namespace {

constexpr double kPi = std::numbers::pi;

// Reach functionals in long double straight from the Gegenbauer polynomial.
long double oracle_functional(int n, int d, long double theta, bool spherical) {
  const long double lambda = 0.5L * (d - 1);
  const long double c = std::cos(theta);
  const long double norm = boost::math::gegenbauer(static_cast<unsigned>(n), lambda, 1.0L);
  const long double p = boost::math::gegenbauer(static_cast<unsigned>(n), lambda, c) / norm;
  const long double dp =
      boost::math::gegenbauer_derivative(static_cast<unsigned>(n), lambda, c, 1u) / norm;
  const long double a = static_cast<long double>(n) * (n + d - 1) / d;
  const long double tang = dp * dp * std::sin(theta) * std::sin(theta) / a;
  if (spherical) {
    const long double rad = 1.0L - p * p - tang;
    return rad <= 0.0L ? std::numbers::pi_v<long double> / 2 : std::atan2(1.0L - p, std::sqrt(rad));
  }
  const long double rad = 2.0L * (1.0L - p) - tang;
  return rad <= 0.0L ? HUGE_VALL : (1.0L - p) / std::sqrt(rad);
}

// Grid plus golden-section minimum of the oracle over [lo, hi].
double oracle_minimum(int n, int d, bool spherical, double lo, double hi) {
  auto f = [&](long double t) { return oracle_functional(n, d, t, spherical); };
  const int m = 20000;
  int best = 0;
  long double best_v = HUGE_VALL;
  for (int i = 0; i <= m; ++i) {
    const long double v = f(lo + (hi - lo) * static_cast<long double>(i) / m);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  long double a = lo + (hi - lo) * static_cast<long double>(std::max(best - 1, 0)) / m;
  long double b = lo + (hi - lo) * static_cast<long double>(std::min(best + 1, m)) / m;
  const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  for (int it = 0; it < 200 && b - a > 1e-15L; ++it) {
    const long double x1 = b - g * (b - a), x2 = a + g * (b - a);
    if (f(x1) <= f(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return static_cast<double>(std::min(best_v, f((a + b) / 2)));
}

}  // namespace

TEST_CASE("reach mode names") {
  CHECK(to_string(ReachMode::euclidean) == "euclidean");
  CHECK(to_string(ReachMode::spherical) == "spherical");
  CHECK(parse_reach_mode("spherical") == ReachMode::spherical);
  CHECK_THROWS_AS(parse_reach_mode("hyperbolic"), std::invalid_argument);
}

TEST_CASE("functional agrees with the long double oracle pointwise") {
  double worst = 0.0;
  for (int d = 2; d <= 4; ++d) {
    for (int n : {2, 3, 5, 8, 13, 30}) {
      for (int i = 1; i < 200; ++i) {
        const double theta = kPi * i / 200;
        const double want = static_cast<double>(oracle_functional(n, d, theta, false));
        if (!std::isfinite(want) || want > 1e3) continue;
        worst = std::max(worst, std::fabs(reach_functional({n, d}, theta) - want) / want);
        const double ws = static_cast<double>(oracle_functional(n, d, theta, true));
        worst = std::max(worst, std::fabs(spherical_functional({n, d}, theta) - ws));
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("functional is continuous into its small-angle limit") {
  for (int d = 2; d <= 4; ++d) {
    for (int n : {2, 3, 10, 100}) {
      const HarmonicIndex idx{n, d};
      const double at0 = reach_functional(idx, 0.0);
      const double near = reach_functional(idx, 1e-7 / n);
      CHECK(near == doctest::Approx(at0).epsilon(1e-9));
      // Where the oracle is still accurate, the library tracks it.
      const double theta = 0.05 / n;
      CHECK(reach_functional(idx, theta) ==
            doctest::Approx(static_cast<double>(oracle_functional(n, d, theta, false)))
                .epsilon(1e-6));
      const double s0 = spherical_functional(idx, 0.0);
      CHECK(spherical_functional(idx, 1e-7 / n) == doctest::Approx(s0).epsilon(1e-9));
    }
  }
}

TEST_CASE("closed-form critical radii for small degrees") {
  CHECK(critical_radius({2, 2}, ReachMode::euclidean).value ==
        doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-10));
  CHECK(critical_radius({3, 2}, ReachMode::euclidean).value ==
        doctest::Approx(std::sqrt((5.0 - std::sqrt(5.0)) / 10.0)).epsilon(1e-10));
  CHECK(critical_radius({4, 2}, ReachMode::euclidean).value ==
        doctest::Approx(std::sqrt(5.0) / 4).epsilon(1e-10));
  CHECK(spherical_reach({2, 2}).value == doctest::Approx(kPi / 3).epsilon(1e-10));
}

TEST_CASE("critical radius matches the oracle minimum") {
  for (int d = 2; d <= 3; ++d) {
    for (int n : {3, 4, 5, 7, 10, 16, 25}) {
      const double hi = kPi - 0.02;
      const double want = oracle_minimum(n, d, false, 0.02, hi);
      const ReachResult r = critical_radius({n, d}, ReachMode::euclidean);
      CHECK(r.value == doctest::Approx(want).epsilon(1e-9));
      CHECK(r.value <= reach_functional({n, d}, r.argmin_theta) + 1e-15);
      const double ws = oracle_minimum(n, d, true, 0.02, hi);
      CHECK(spherical_reach({n, d}).value == doctest::Approx(ws).epsilon(1e-9));
    }
  }
}

TEST_CASE("frozen critical radii on S^2") {
  struct Row {
    int n;
    double euclidean;
  };
  for (const Row& row : {Row{50, 0.5913547}, Row{100, 0.5915075}, Row{200, 0.5915461}}) {
    CHECK(critical_radius({row.n, 2}, ReachMode::euclidean).value ==
          doctest::Approx(row.euclidean).epsilon(2e-7));
  }
  CHECK(spherical_reach({3, 2}).value == doctest::Approx(0.5535744).epsilon(2e-7));
  CHECK(spherical_reach({4, 2}).value == doctest::Approx(0.5931998).epsilon(2e-7));
  CHECK(spherical_reach({100, 2}).value == doctest::Approx(0.63293).epsilon(2e-5));
}

TEST_CASE("circle: the functional is identically one") {
  for (int n = 1; n <= 6; ++n) {
    for (int i = 1; i <= 1000; ++i) {
      const double theta = kPi * i / 1000;
      if (std::cos(n * theta) > 1.0 - 1e-9) continue;
      CHECK(std::fabs(reach_functional({n, 1}, theta) - 1.0) < 1e-12);
    }
    CHECK(critical_radius({n, 1}, ReachMode::euclidean).value == doctest::Approx(1.0));
  }
}

TEST_CASE("spherical reach is below pi/2 and above the Euclidean value") {
  for (int n = 2; n <= 12; ++n) {
    const double e = critical_radius({n, 2}, ReachMode::euclidean).value;
    const double s = spherical_reach({n, 2}).value;
    CHECK(s < kPi / 2);
    CHECK(s >= e);
  }
}

TEST_CASE("pair radius formulas") {
  // Antipodal images of odd levels: the chord midpoint is the origin.
  CHECK(euclidean_pair_radius(-1.0, 0.0) == doctest::Approx(1.0));
  CHECK(spherical_pair_radius(-1.0, 0.0) == doctest::Approx(kPi / 2));
  CHECK(euclidean_pair_radius(0.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(spherical_pair_radius(0.0, 0.0) == doctest::Approx(kPi / 4));
  CHECK(std::isinf(euclidean_pair_radius(0.0, 2.0)));
}

TEST_CASE("trace and grid bookkeeping") {
  ReachOptions opts;
  opts.trace_points = 500;
  const ReachResult r = critical_radius({20, 2}, ReachMode::euclidean, opts);
  CHECK(r.grid_points >= opts.min_grid);
  CHECK(r.trace.size() >= 500);
  CHECK(r.trace.size() <= 502);
  bool has_argmin = false;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].first > r.trace[i - 1].first);
    has_argmin = has_argmin || r.trace[i].first == r.argmin_theta;
  }
  CHECK(has_argmin);
}

TEST_CASE("invalid indices are rejected") {
  CHECK_THROWS_AS(critical_radius({0, 2}, ReachMode::euclidean), std::invalid_argument);
  CHECK_THROWS_AS(critical_radius({3, 0}, ReachMode::euclidean), std::invalid_argument);
  CHECK_THROWS(reach_functional({3, 2}, -0.1));
}

TEST_CASE("global minimizer") {
  auto f = [](double x) { return std::pow(x - 1.3, 2) + 0.05 * std::cos(40.0 * x); };
  // Brute force on a much finer grid.
  double want = 1e9;
  for (int i = 0; i <= 1000000; ++i) want = std::min(want, f(3.0 * i / 1000000));
  const Minimum m = global_minimize(f, 0.0, 3.0, 2001, 1e-10);
  CHECK(m.value <= want + 1e-12);
  CHECK(m.value == doctest::Approx(want).epsilon(1e-9));

  const Minimum g = golden_section([](double x) { return (x - 0.25) * (x - 0.25); }, 0.0, 1.0,
                                   1e-10);
  CHECK(g.x == doctest::Approx(0.25).epsilon(1e-8));
  CHECK_THROWS_AS(global_minimize(f, 1.0, 0.0, 100, 1e-8), std::invalid_argument);
}

TEST_CASE("normal radicand stays positive") {
  for (int d = 2; d <= 3; ++d) {
    for (int n = 2; n <= 40; n += 3) CHECK(min_normal_radicand({n, d}) > 0.0);
  }
  CHECK(immersion_level_proxy(2, 30) == 1);
}
