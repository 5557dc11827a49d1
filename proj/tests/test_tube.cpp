// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "sphreach/reach.hpp"
#include "sphreach/tube.hpp"

using namespace sphreach;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double gk(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

double area(int m) { return static_cast<double>(oracle::sphere_area_rm(m)); }

// Tube of radius rho about a great m-sphere in S^{N-1}.
double great_sphere_tube(int m, int N, double rho) {
  return area(m + 1) * area(N - m - 1) *
         gk([&](double r) { return std::pow(std::cos(r), m) * std::pow(std::sin(r), N - m - 2); },
            0.0, rho);
}

// Tail probability on S^2 from the closed-form integrand.
double closed_2d(int n, double rho) {
  const double kappa = n % 2 == 0 ? 0.5 : 1.0;
  const double c = kappa * std::exp(std::lgamma(n + 0.5) - std::lgamma(n - 1.0)) / std::sqrt(kPi);
  return c * gk(
                 [n](double r) {
                   const double s2 = std::sin(r) * std::sin(r);
                   return std::pow(std::sin(r), 2 * n - 3) *
                          (2.0 * (n * n + n) * (1.0 - (2.0 * n - 1) / (2.0 * n - 2) * s2) +
                           2.0 * s2 / (n - 1));
                 },
                 0.0, rho);
}

}  // namespace

TEST_CASE("G_{a,b} against direct quadrature") {
  for (int a = 0; a <= 6; ++a) {
    for (int b = 1; b <= 9; ++b) {
      for (double rho : {0.1, 0.7, 1.2, kPi / 2}) {
        const double want =
            area(b) *
            gk([&](double r) { return std::pow(std::cos(r), a) * std::pow(std::sin(r), b - 1); },
               0.0, rho);
        CHECK(g_ab(a, b, rho) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("point tube is a spherical cap") {
  for (int N = 3; N <= 8; ++N) {
    TubeSpec point;
    point.ambient_n = N;
    point.lk = {1.0};
    for (int i = 0; i <= 30; ++i) {
      const double rho = kPi / 2 * i / 30;
      const double cap =
          area(N - 1) * gk([N](double r) { return std::pow(std::sin(r), N - 2); }, 0.0, rho);
      CHECK(std::fabs(tube_volume(point, rho) - cap) < 1e-10);
      CHECK(tube_fraction(point, rho) == doctest::Approx(cap / area(N)).epsilon(1e-12));
    }
  }
}

TEST_CASE("great subsphere tube") {
  for (int N = 3; N <= 9; ++N) {
    for (int m = 1; m <= N - 2; ++m) {
      TubeSpec spec;
      spec.ambient_n = N;
      for (int j = 0; j <= m; ++j) spec.lk.push_back(lk_sphere(m, j, 1.0));
      for (double rho : {0.05, 0.4, 0.9, 1.3, kPi / 2}) {
        const double want = great_sphere_tube(m, N, rho);
        CHECK(tube_volume(spec, rho) == doctest::Approx(want).epsilon(1e-11));
      }
      // At rho = pi/2 the tube covers the whole sphere.
      CHECK(tube_fraction(spec, kPi / 2) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("curvature conventions") {
  for (int d = 0; d <= 6; ++d) {
    CHECK(lk_sphere(d, 0, 3.0) == doctest::Approx(d % 2 == 0 ? 2.0 : 0.0));
    for (int j = 0; j <= d; ++j) {
      if ((d - j) % 2 != 0) {
        CHECK(lk_sphere(d, j, 2.0) == 0.0);
      } else {
        CHECK(lk_sphere(d, j, 4.0) == doctest::Approx(std::pow(2.0, j) * lk_sphere(d, j, 1.0)));
      }
    }
    // The top curvature is the volume of S^d.
    CHECK(lk_sphere(d, d, 1.0) == doctest::Approx(area(d + 1)));
  }
  CHECK_THROWS_AS(lk_sphere(2, 3, 1.0), std::invalid_argument);
}

TEST_CASE("normalized components avoid overflow") {
  for (int N : {5, 40, 200}) {
    for (int j = 0; j <= 3; ++j) {
      if (N < 60) {
        CHECK(f_nj_normalized(N, j, 0.3) ==
              doctest::Approx(f_nj(N, j, 0.3) / area(N)).epsilon(1e-12));
      }
      CHECK(std::isfinite(f_nj_normalized(N, j, 0.3)));
    }
  }
  CHECK(std::isfinite(f_nj_normalized(5001, 2, 0.5)));
}

TEST_CASE("spec for the immersed sphere") {
  const TubeSpec s3 = tube_spec_for({3, 2});
  CHECK(s3.ambient_n == 7);
  CHECK(s3.kappa == 1.0);
  CHECK(s3.lk.size() == 3);
  CHECK(s3.lk[1] == 0.0);
  CHECK(s3.lk[2] == doctest::Approx(6.0 * 4.0 * kPi));
  CHECK(tube_spec_for({4, 2}).kappa == 0.5);
  CHECK(tube_spec_for({4, 3}).kappa == 0.5);
  CHECK_THROWS_AS(tube_spec_for({1, 2}), std::domain_error);
  CHECK(max_amplitude({3, 2}) == doctest::Approx(std::sqrt(7.0 / (4.0 * kPi))));
}

TEST_CASE("general tail formula equals the S^2 closed form") {
  for (int n = 2; n <= 12; ++n) {
    const HarmonicIndex idx{n, 2};
    const double rho2 = spherical_reach(idx).value;
    const double top = max_amplitude(idx);
    const double lo = top * std::cos(rho2);
    for (int i = 0; i < 20; ++i) {
      const double u = lo + (top - lo) * (i + 0.5) / 20;
      const TailResult g = tail_probability(idx, u, rho2);
      const TailResult c = tail_probability_2d(n, u, rho2);
      CHECK(g.probability == doctest::Approx(c.probability).epsilon(1e-10));
      CHECK(g.probability == doctest::Approx(closed_2d(n, g.rho)).epsilon(1e-10));
      CHECK(g.valid);
      CHECK(c.valid);
    }
  }
}

TEST_CASE("tail probability properties") {
  for (int d = 2; d <= 3; ++d) {
    for (int n = 2; n <= 10; ++n) {
      const HarmonicIndex idx{n, d};
      const double rho = spherical_reach(idx).value;
      const double top = max_amplitude(idx);
      CHECK(tail_probability(idx, top, rho).probability == 0.0);
      double prev = 2.0;
      for (int i = 0; i <= 50; ++i) {
        const double u = top * (0.05 + 0.95 * i / 50.0);
        const TailResult t = tail_probability(idx, std::min(u, top), rho);
        if (t.valid) {
          CHECK(t.probability <= prev + 1e-14);
          prev = t.probability;
        }
        CHECK(t.valid == (t.rho <= rho));
        double sum = 0.0;
        for (int j = 0; j <= d; ++j) {
          if ((d - j) % 2 != 0) CHECK(t.components[j] == 0.0);
          sum += t.components[j];
        }
        CHECK(t.kappa * sum / t.ambient_area == doctest::Approx(t.probability).epsilon(1e-12));
        if (t.valid) {
          CHECK(t.probability >= 0.0);
          CHECK(t.probability <= 1.0 + 1e-12);
        }
        const EulerCharExpectation ec = expected_euler_characteristic(idx, std::min(u, top), rho);
        CHECK(ec.valid == t.valid);
        CHECK(ec.value == doctest::Approx(t.probability / t.kappa));
      }
    }
  }
  CHECK_THROWS_AS(tail_probability({3, 2}, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(tail_probability({3, 2}, 10.0, 0.5), std::domain_error);
  CHECK(tail_probability({3, 2}, 0.7, 0.5, 0.25).kappa == 0.25);
}

TEST_CASE("frozen threshold values on S^2") {
  struct Row {
    int n;
    double u_thr;
    double p_thr;
  };
  for (const Row& r : {Row{3, 0.634885, 0.7385}, Row{4, 0.701702, 0.2783}}) {
    const HarmonicIndex idx{r.n, 2};
    const double rho = spherical_reach(idx).value;
    const double u = max_amplitude(idx) * std::cos(rho);
    CHECK(u == doctest::Approx(r.u_thr).epsilon(2e-6));
    CHECK(tail_probability(idx, u, rho).probability == doctest::Approx(r.p_thr).epsilon(2e-4));
  }
  // n = 2: the threshold tube fills the whole sphere.
  const double rho2 = spherical_reach({2, 2}).value;
  const double u2 = max_amplitude({2, 2}) * std::cos(rho2);
  CHECK(tail_probability({2, 2}, u2, rho2).probability == doctest::Approx(1.0).epsilon(1e-9));
}
