// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_QUADRATURE_HPP
#define SPHREACH_QUADRATURE_HPP

#include <functional>

namespace sphreach {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< summed Kronrod-minus-Gauss error estimate
  int intervals = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-13;
  int max_intervals = 2000;
};

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
/// Bisects the interval with the largest error estimate until the total
/// estimate drops below max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace sphreach

#endif  // SPHREACH_QUADRATURE_HPP
