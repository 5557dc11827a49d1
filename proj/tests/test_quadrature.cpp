// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sphreach/quadrature.hpp"

using sphreach::integrate;

TEST_CASE("adaptive quadrature on closed-form integrals") {
  const double pi = std::numbers::pi;
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi).value ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(integrate([](double x) { return std::pow(std::sin(x), 41); }, 0.0, pi / 2).value ==
        doctest::Approx(std::tgamma(21.0) * std::tgamma(0.5) / (2.0 * std::tgamma(21.5)))
            .epsilon(1e-13));
  const auto r = integrate([](double) { return 1.0; }, 0.0, 0.0);
  CHECK(r.value == 0.0);
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0).value == doctest::Approx(-0.5));
}

TEST_CASE("quadrature reports convergence") {
  const auto r = integrate([](double x) { return std::cos(50.0 * x); }, 0.0, 3.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::sin(150.0) / 50.0).epsilon(1e-12));
  CHECK(r.error < 1e-10);
}
