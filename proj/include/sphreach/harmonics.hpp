// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_HARMONICS_HPP
#define SPHREACH_HARMONICS_HPP

#include <array>
#include <span>
#include <vector>

#include "sphreach/specfun.hpp"

namespace sphreach {

using Vec3 = std::array<double, 3>;

/// A point of S^2 as (colatitude theta, longitude phi), or of S^1 as the
/// angle theta with phi unused.
struct SpherePoint {
  double theta = 0.0;
  double phi = 0.0;

  /// Unit vector (sin t cos p, sin t sin p, cos t).
  Vec3 cartesian() const;
  /// Inverse of cartesian(); v need not be normalized but must be nonzero.
  static SpherePoint from_cartesian(const Vec3& v);
};

/// Great-circle angle between two points of S^2, accurate near 0 and pi.
double angle_between(const SpherePoint& x, const SpherePoint& y);
double angle_between(const Vec3& x, const Vec3& y);

/// Real orthonormal basis of level-n harmonics at x, length k.
/// d = 2: ordered m = -n..n, with sin(|m| phi) for m < 0 and cos(m phi) for
/// m > 0, built from the fully normalized associated Legendre recurrence
/// (no Condon-Shortley phase). d = 1: (cos n theta, sin n theta) / sqrt(pi).
/// Throws std::invalid_argument for d outside {1, 2}.
std::vector<double> basis_eval(const HarmonicIndex& idx, const SpherePoint& x);

/// Same as basis_eval for d = 2 at a Cartesian unit vector, written into out
/// (length 2n+1). scratch must hold at least n+1 doubles.
void basis_eval_s2(int n, const Vec3& v, std::span<double> out, std::span<double> scratch);

/// sqrt(s_d / k) * basis_eval: a unit vector in R^k.
std::vector<double> immersion(const HarmonicIndex& idx, const SpherePoint& x);

/// P_{n,d}(cos angle(x, y)) from the zonal closed form. For d = 1 theta is
/// the circle angle; otherwise the angle is measured on S^2.
double kernel(const HarmonicIndex& idx, const SpherePoint& x, const SpherePoint& y);

/// <immersion(x), immersion(y)>, for d in {1, 2}.
double kernel_summed(const HarmonicIndex& idx, const SpherePoint& x, const SpherePoint& y);

/// sum_j a_j basis_j(x). Throws std::invalid_argument unless |a| = 1 within
/// 1e-10 and a has length k.
double field_eval(const HarmonicIndex& idx, std::span<const double> a, const SpherePoint& x);

}  // namespace sphreach

#endif  // SPHREACH_HARMONICS_HPP
