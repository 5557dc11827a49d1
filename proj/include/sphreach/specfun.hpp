// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_SPECFUN_HPP
#define SPHREACH_SPECFUN_HPP

#include <cstdint>
#include <vector>

namespace sphreach {

/// Level n of an eigenspace of the Laplacian on the unit sphere S^d.
struct HarmonicIndex {
  int n = 1;
  int d = 2;

  /// Laplace eigenvalue magnitude n(n+d-1).
  [[nodiscard]] double eigenvalue() const {
    return static_cast<double>(n) * static_cast<double>(n + d - 1);
  }
  [[nodiscard]] bool odd() const { return n % 2 != 0; }
};

/// Dimension of the level-n eigenspace on S^d, computed in exact integer
/// arithmetic. Throws std::overflow_error when it does not fit in 64 bits
/// and std::invalid_argument for n < 1 or d < 1.
std::uint64_t dimension(const HarmonicIndex& idx);

/// Surface area of the unit sphere S^d (embedded in R^{d+1}).
double sphere_area(int d);

/// Surface area of the unit sphere in R^m, i.e. sphere_area(m - 1).
/// Defined for m >= 1 (m = 1 gives the two-point "sphere" of measure 2).
double ambient_sphere_area(int m);

struct LegendreEval {
  double value = 0.0;
  double derivative = 0.0;
};

/// Zonal polynomial of level n on S^d, normalized to value 1 at x = 1, and
/// its derivative. For d = 2 this is the Legendre polynomial, for d = 1 the
/// Chebyshev polynomial T_n. Throws std::domain_error for |x| > 1.
LegendreEval legendre(const HarmonicIndex& idx, double x);

/// Value only; cheaper than legendre() when the derivative is not needed.
double zonal(int n, int d, double x);

/// P'_{n,d}(1) = n(n+d-1)/d, the scale of the pulled-back metric.
double endpoint_derivative(const HarmonicIndex& idx);

/// P''_{n,d}(1).
double endpoint_second_derivative(const HarmonicIndex& idx);

/// Coefficients p_k of P_{n,d}(1 - t) = sum_k p_k t^k, k = 0..count-1.
/// The expansion terminates at k = n, so it is exact once count > n.
std::vector<double> endpoint_taylor(const HarmonicIndex& idx, int count);

/// Bessel function of the first kind J_nu(x) for nu >= -1/2, x >= 0.
double bessel_j(double nu, double x);

/// dJ_nu/dx, evaluated from the differentiated series / Hankel expansion
/// rather than through a recurrence. x > 0 is required when nu < 1.
double bessel_j_derivative(double nu, double x);

/// x above which the Hankel expansion replaces the power series.
inline constexpr double kBesselSeriesLimit = 16.0;

struct JInfEval {
  double value = 0.0;
  double derivative = 0.0;
};

/// Rescaled limit kernel Gamma(d/2) (y/2)^{1-d/2} J_{d/2-1}(y), normalized to
/// 1 at y = 0, with its derivative in y.
JInfEval j_inf(int d, double y);

/// Power-series coefficients c_j of j_inf in z = y^2/4, j = 0..count-1.
std::vector<double> j_inf_series(int d, int count);

struct HilbApprox {
  double leading = 0.0;
  double remainder_bound = 0.0;
  bool small_angle_regime = true;
};

/// Bessel approximation of P_{n,d}(cos theta) for theta in [0, pi/2] with a
/// two-regime remainder envelope. The envelope constants are empirical, so
/// remainder_bound is a diagnostic, not a certified bound.
HilbApprox hilb_approx(const HarmonicIndex& idx, double theta);

struct HilbConstants {
  double split = 0.0;        ///< regime boundary c: small-angle iff theta <= c/n
  double small_angle = 0.0;  ///< multiplies theta^{d/2} n^{d/2-2}
  double oscillatory = 0.0;  ///< multiplies theta^{1/2} n^{-3/2}
};

/// Stored envelope constants for d (calibrated table for d <= 8, computed on
/// demand above that).
HilbConstants hilb_constants(int d);

/// Recomputes the envelope constants for d by maximizing the ratio of the
/// observed Hilb error to each regime's rate over n in [n_min, n_max] and a
/// theta grid of `theta_points` per n. No safety factor is applied.
HilbConstants hilb_calibrate(int d, int n_min, int n_max, int theta_points);

}  // namespace sphreach

#endif  // SPHREACH_SPECFUN_HPP
