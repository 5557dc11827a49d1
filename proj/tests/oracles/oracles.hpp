// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations used only by the tests. They share no code with
// the library.

#ifndef SPHREACH_TESTS_ORACLES_HPP
#define SPHREACH_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gegenbauer.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace oracle {

/// Zonal polynomial normalized to 1 at x = 1: Chebyshev for d = 1, the
/// Gegenbauer ratio C_n^{(d-1)/2}(x) / C_n^{(d-1)/2}(1) otherwise.
inline long double zonal(int n, int d, long double x) {
  if (d == 1) return std::cos(n * std::acos(x));
  const long double lambda = 0.5L * (d - 1);
  return boost::math::gegenbauer(static_cast<unsigned>(n), lambda, x) /
         boost::math::gegenbauer(static_cast<unsigned>(n), lambda, 1.0L);
}

struct Node {
  long double x;
  long double w;
};

/// m-point Gauss-Legendre rule on [-1, 1].
inline std::vector<Node> gauss_legendre(int m) {
  std::vector<Node> nodes;
  for (int i = 1; i <= m; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i - 0.25L) / (m + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      const long double p = boost::math::legendre_p(m, x);
      dp = boost::math::legendre_p_prime(m, x);
      const long double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    dp = boost::math::legendre_p_prime(m, x);
    nodes.push_back({x, 2.0L / ((1.0L - x * x) * dp * dp)});
  }
  return nodes;
}

struct SphereNode {
  double theta;
  double phi;
  double w;
};

/// Product rule on S^2, exact for polynomials of degree <= min(2m - 1, nphi - 1).
inline std::vector<SphereNode> sphere_rule(int m, int nphi) {
  std::vector<SphereNode> out;
  for (const Node& nd : gauss_legendre(m)) {
    for (int j = 0; j < nphi; ++j) {
      out.push_back({static_cast<double>(std::acos(nd.x)), 2.0 * std::numbers::pi * j / nphi,
                     static_cast<double>(nd.w) * 2.0 * std::numbers::pi / nphi});
    }
  }
  return out;
}

/// Area of the unit sphere S^{m-1} in R^m from the recursion
/// A_1 = 2, A_2 = 2 pi, A_{m+2} = 2 pi A_m / m.
inline long double sphere_area_rm(int m) {
  long double a = (m % 2 == 1) ? 2.0L : 2.0L * std::numbers::pi_v<long double>;
  for (int k = (m % 2 == 1) ? 1 : 2; k < m; k += 2) a *= 2.0L * std::numbers::pi_v<long double> / k;
  return a;
}

inline std::array<double, 3> cartesian(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace oracle

#endif  // SPHREACH_TESTS_ORACLES_HPP
