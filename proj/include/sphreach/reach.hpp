// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_REACH_HPP
#define SPHREACH_REACH_HPP

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "sphreach/specfun.hpp"

namespace sphreach {

enum class ReachMode { euclidean, spherical };

std::string_view to_string(ReachMode mode);
/// Throws std::invalid_argument on anything but "euclidean" / "spherical".
ReachMode parse_reach_mode(std::string_view text);

/// Radicand values in [-kRadicandClampTol, 0) are treated as rounding and
/// clamped; anything more negative is reported as a hard error.
inline constexpr double kRadicandClampTol = 1e-9;

/// Pair quantities of the immersion at separation angle theta from the base
/// point. To dodge cancellation near coincident images, a common factor
/// `scale` is pulled out: the chord numerator 1-P equals scale*numerator and
/// both radicands carry scale^2.
struct PairTerms {
  double scale = 1.0;
  double numerator = 0.0;
  double radicand_euclidean = 0.0;  ///< 2(1-P) - |tangential part|^2
  double radicand_spherical = 0.0;  ///< 1 - P^2 - |tangential part|^2
};

PairTerms pair_terms(const HarmonicIndex& idx, double theta);

struct FunctionalValue {
  double value = 0.0;
  bool clamped = false;  ///< radicand was rounding-negative or zero
};

/// Local-reach functional at separation theta in [0, pi] for the chosen mode.
/// Euclidean: (1-P)/sqrt(2-2P-[P' sin]^2/P'(1)) in chord units. Spherical:
/// arctan((1-P)/sqrt(1-P^2-[P' sin]^2/P'(1))) in radians. theta = 0 returns
/// the analytic limit. Throws std::runtime_error when a radicand is below
/// -kRadicandClampTol.
FunctionalValue evaluate_functional(const HarmonicIndex& idx, double theta, ReachMode mode);

/// Euclidean functional; +infinity at clamped points.
double reach_functional(const HarmonicIndex& idx, double theta);

/// Spherical (geodesic) functional; pi/2 at clamped points.
double spherical_functional(const HarmonicIndex& idx, double theta);

/// The same functionals for an arbitrary pair of unit vectors x, y given
/// c = <x, y> and tangent_sq = |projection of x onto T_y M|^2.
double euclidean_pair_radius(double c, double tangent_sq);
double spherical_pair_radius(double c, double tangent_sq);

struct ReachResult {
  double value = 0.0;
  double argmin_theta = 0.0;
  ReachMode mode = ReachMode::euclidean;
  std::vector<std::pair<double, double>> trace;  ///< (theta, functional)
  int grid_points = 0;
  bool densified = false;
};

struct ReachOptions {
  int min_grid = 100000;
  int grid_per_level = 50;
  double theta_tol = 1e-8;
  int trace_points = 2000;
};

/// Global infimum of the functional over [0, pi] ([0, pi/2] for even n).
ReachResult critical_radius(const HarmonicIndex& idx, ReachMode mode,
                            const ReachOptions& opts = {});

/// Geodesic critical radius of the immersed sphere inside S^{k-1}.
ReachResult spherical_reach(const HarmonicIndex& idx, const ReachOptions& opts = {});

struct Minimum {
  double x = 0.0;
  double value = 0.0;
  bool densified = false;
};

/// Uniform grid of `points` samples, then golden-section refinement inside
/// every bracketing triple within `margin` of the best grid value. Points
/// where f is not finite are never candidates. If a refinement fails to stay
/// below its bracket centre the grid is densified 4x once; a second failure
/// throws std::runtime_error.
Minimum global_minimize(const std::function<double(double)>& f, double lo, double hi, int points,
                        double tol, double margin = 1e-2);

/// Golden-section search for a minimum of f on [a, b].
Minimum golden_section(const std::function<double(double)>& f, double a, double b, double tol);

/// Smallest Euclidean radicand divided by (1 - P)^2 over a grid in (0, pi),
/// excluding identified endpoints. Positive means no separated pair has its chord
/// inside the tangent plane, a numerical stand-in for the immersion/embedding
/// property the asymptotic theory assumes.
double min_normal_radicand(const HarmonicIndex& idx, int points = 20000);

/// Smallest n0 <= n_max such that min_normal_radicand stays positive for all
/// n in [n0, n_max]; returns n_max + 1 if none.
int immersion_level_proxy(int d, int n_max);

// ----- asymptotic lower bound ---------------------------------------------

struct BoundReport {
  int d = 2;
  double term_small_y = 0.0;
  double term_tail = 0.0;
  double term_odd = 0.0;
  double bound = 0.0;
  double argmin_small_y = 0.0;
  double argmin_odd = 0.0;
  double y_max = 0.0;   ///< both objectives within 1e-4 of 1/sqrt(2) beyond it
  double y_scan = 0.0;  ///< extent of the dense grid actually scanned
};

/// (1 - J)/sqrt(2 - 2J - d J'^2) with J = j_inf(d, y); analytic limit at 0.
double small_y_objective(int d, double y);
/// (1 + J)/sqrt(2 + 2J - d J'^2).
double odd_objective(int d, double y);

/// Upper bound on |objective - 1/sqrt(2)| for both objectives at all y' >= y,
/// from the Bessel amplitude envelope. Infinite where the envelope is not
/// yet informative.
double tail_deviation_bound(int d, double y);

/// Smallest y (up to bisection tolerance) with tail_deviation_bound <= tol.
/// For d = 1 the objectives are periodic and this returns 2 pi.
double bound_y_max(int d, double tol = 1e-4);

BoundReport asymptotic_lower_bound(int d);

}  // namespace sphreach

#endif  // SPHREACH_REACH_HPP
