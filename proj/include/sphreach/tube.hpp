// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_TUBE_HPP
#define SPHREACH_TUBE_HPP

#include <optional>
#include <vector>

#include "sphreach/specfun.hpp"

namespace sphreach {

/// G_{a,b}(rho) = omega_b * int_0^rho cos^a(r) sin^{b-1}(r) dr, where
/// omega_b = b pi^{b/2} / Gamma(b/2 + 1) is the area of the unit sphere in R^b.
double g_ab(int a, int b, double rho);

/// f_{N,j}(rho) = sum_k (-4 pi)^{-k} / k! * j! / (j-2k)! * G_{j-2k, N-1+2k-j}(rho).
double f_nj(int N, int j, double rho);

/// f_nj(N, j, rho) / omega_N, evaluated without forming omega_N so it stays
/// finite for large N.
double f_nj_normalized(int N, int j, double rho);

/// scale^{j/2} * L_j(S^d) with L_j(S^d) = 2 C(d, j) omega_{d+1} / omega_{d+1-j}
/// for d - j even and 0 otherwise.
double lk_sphere(int d, int j, double scale);

struct TubeSpec {
  int ambient_n = 3;        ///< the tube lives in S^{ambient_n - 1}
  std::vector<double> lk;   ///< rescaled curvatures, j = 0..m
  double kappa = 1.0;       ///< 1/2 for an antipodally identified image
};

/// Spec of the image of S^d under the level-n immersion: ambient_n = k,
/// lk[j] = P'(1)^{j/2} L_j(S^d) and kappa from the parity of n.
TubeSpec tube_spec_for(const HarmonicIndex& idx);

/// kappa * sum_j f_{N,j}(rho) * lk[j]. Valid as a volume only for rho below
/// the critical radius of the manifold, which the caller must ensure.
double tube_volume(const TubeSpec& spec, double rho);

/// tube_volume(spec, rho) / omega_N.
double tube_fraction(const TubeSpec& spec, double rho);

/// sqrt(k / s_d): the largest value the normalized field can take.
double max_amplitude(const HarmonicIndex& idx);

struct TailResult {
  double u = 0.0;
  double probability = 0.0;
  double rho = 0.0;        ///< arccos(u / max_amplitude)
  bool valid = false;      ///< rho <= rho_d
  double kappa = 1.0;
  double ambient_area = 0.0;       ///< omega_k; 0 if it underflows
  std::vector<double> components;  ///< f_{k,j}(rho) * lk[j]; 0 where d - j is odd
};

/// Probability that the supremum of the normalized field exceeds u.
/// Throws std::domain_error unless 0 < u <= max_amplitude(idx).
TailResult tail_probability(const HarmonicIndex& idx, double u, double rho_d,
                            std::optional<double> kappa_override = std::nullopt);

/// The S^2 closed form: kappa Gamma(n + 1/2) / (sqrt(pi) Gamma(n - 1)) times
/// int_0^rho sin^{2n-3} {2(n^2+n)(1 - (2n-1)/(2n-2) sin^2) + 2 sin^2/(n-1)}.
/// Requires n >= 2; components is left empty.
TailResult tail_probability_2d(int n, double u, double rho_2);

/// As above, with rho_2 from spherical_reach.
TailResult tail_probability_2d(int n, double u);

struct EulerCharExpectation {
  double value = 0.0;
  bool valid = false;  ///< false below the threshold: no identity with the tail holds there
};

/// Mean Euler characteristic of the excursion set: tail probability / kappa.
EulerCharExpectation expected_euler_characteristic(const HarmonicIndex& idx, double u,
                                                   double rho_d);

}  // namespace sphreach

#endif  // SPHREACH_TUBE_HPP
