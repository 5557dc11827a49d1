// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphreach/tube.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sphreach/quadrature.hpp"
#include "sphreach/reach.hpp"

namespace sphreach {

namespace {

constexpr double kPi = std::numbers::pi;

double log_omega(int m) {
  return std::log(2.0) + 0.5 * m * std::log(kPi) - std::lgamma(0.5 * m);
}

double cos_sin_integral(int a, int b, double rho) {
  if (rho == 0.0) return 0.0;
  if (a == 0 && b == 1) return rho;
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-14;
  opts.max_intervals = 4000;
  const QuadratureResult q = integrate(
      [a, b](double r) { return std::pow(std::cos(r), a) * std::pow(std::sin(r), b - 1); }, 0.0,
      rho, opts);
  return q.value;
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 0.5 * kPi + 1e-15)) {
    throw std::domain_error("tube: rho outside [0, pi/2]");
  }
}

// G_{a,b}(rho) * exp(-log_div).
double g_scaled(int a, int b, double rho, double log_div) {
  if (a < 0 || b < 1) throw std::invalid_argument("g_ab: requires a >= 0, b >= 1");
  check_rho(rho);
  const double integral = cos_sin_integral(a, b, rho);
  if (integral == 0.0) return 0.0;
  return std::exp(log_omega(b) - log_div) * integral;
}

double f_scaled(int N, int j, double rho, double log_div) {
  if (j < 0 || j > N - 2) {
    throw std::invalid_argument("f_nj: requires 0 <= j <= N - 2 (N = " + std::to_string(N) +
                                ", j = " + std::to_string(j) + ")");
  }
  double sum = 0.0;
  double coeff = 1.0;  // (-4 pi)^{-k} / k! * j! / (j - 2k)!
  for (int k = 0; 2 * k <= j; ++k) {
    if (k > 0) {
      coeff *= -(j - 2.0 * k + 2.0) * (j - 2.0 * k + 1.0) / (4.0 * kPi * k);
    }
    sum += coeff * g_scaled(j - 2 * k, N - 1 + 2 * k - j, rho, log_div);
  }
  return sum;
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double parity_kappa(int n) { return n % 2 == 0 ? 0.5 : 1.0; }

}  // namespace

double g_ab(int a, int b, double rho) { return g_scaled(a, b, rho, 0.0); }

double f_nj(int N, int j, double rho) { return f_scaled(N, j, rho, 0.0); }

double f_nj_normalized(int N, int j, double rho) { return f_scaled(N, j, rho, log_omega(N)); }

double lk_sphere(int d, int j, double scale) {
  if (d < 0 || j < 0 || j > d) throw std::invalid_argument("lk_sphere: requires 0 <= j <= d");
  if (scale < 0.0) throw std::invalid_argument("lk_sphere: scale must be >= 0");
  if ((d - j) % 2 != 0) return 0.0;
  const double ratio = std::exp(log_omega(d + 1) - log_omega(d + 1 - j));
  return std::pow(scale, 0.5 * j) * 2.0 * std::round(binomial(d, j)) * ratio;
}

TubeSpec tube_spec_for(const HarmonicIndex& idx) {
  TubeSpec spec;
  const std::uint64_t k = dimension(idx);
  if (k > 1000000) throw std::overflow_error("tube_spec_for: dimension too large");
  spec.ambient_n = static_cast<int>(k);
  if (spec.ambient_n < idx.d + 2) {
    throw std::domain_error("tube_spec_for: image is not a proper submanifold (k < d + 2)");
  }
  const double a = endpoint_derivative(idx);
  for (int j = 0; j <= idx.d; ++j) spec.lk.push_back(lk_sphere(idx.d, j, a));
  spec.kappa = parity_kappa(idx.n);
  return spec;
}

double tube_volume(const TubeSpec& spec, double rho) {
  double sum = 0.0;
  for (std::size_t j = 0; j < spec.lk.size(); ++j) {
    if (spec.lk[j] == 0.0) continue;
    sum += f_nj(spec.ambient_n, static_cast<int>(j), rho) * spec.lk[j];
  }
  return spec.kappa * sum;
}

double tube_fraction(const TubeSpec& spec, double rho) {
  double sum = 0.0;
  for (std::size_t j = 0; j < spec.lk.size(); ++j) {
    if (spec.lk[j] == 0.0) continue;
    sum += f_nj_normalized(spec.ambient_n, static_cast<int>(j), rho) * spec.lk[j];
  }
  return spec.kappa * sum;
}

double max_amplitude(const HarmonicIndex& idx) {
  return std::sqrt(static_cast<double>(dimension(idx)) / sphere_area(idx.d));
}

TailResult tail_probability(const HarmonicIndex& idx, double u, double rho_d,
                            std::optional<double> kappa_override) {
  TubeSpec spec = tube_spec_for(idx);
  if (kappa_override) spec.kappa = *kappa_override;
  const double top = max_amplitude(idx);
  if (!(u > 0.0 && u <= top)) {
    throw std::domain_error("tail_probability: u must lie in (0, sqrt(k / s_d)]");
  }
  TailResult out;
  out.u = u;
  out.rho = std::acos(std::min(1.0, u / top));
  out.valid = out.rho <= rho_d;
  out.kappa = spec.kappa;
  const double log_area = log_omega(spec.ambient_n);
  out.ambient_area = std::exp(log_area);
  double normalized = 0.0;
  for (std::size_t j = 0; j < spec.lk.size(); ++j) {
    double c = 0.0;
    if (spec.lk[j] != 0.0) {
      c = f_nj_normalized(spec.ambient_n, static_cast<int>(j), out.rho) * spec.lk[j];
    }
    normalized += c;
    out.components.push_back(c * out.ambient_area);
  }
  out.probability = spec.kappa * normalized;
  return out;
}

TailResult tail_probability_2d(int n, double u, double rho_2) {
  if (n < 2) throw std::invalid_argument("tail_probability_2d: requires n >= 2");
  const double top = std::sqrt((2.0 * n + 1.0) / (4.0 * kPi));
  if (!(u > 0.0 && u <= top)) {
    throw std::domain_error("tail_probability_2d: u must lie in (0, sqrt((2n+1)/(4 pi))]");
  }
  TailResult out;
  out.u = u;
  out.rho = std::acos(std::min(1.0, u / top));
  out.valid = out.rho <= rho_2;
  out.kappa = parity_kappa(n);
  out.ambient_area = std::exp(log_omega(2 * n + 1));
  const double nn = n;
  const double ratio = (2.0 * nn - 1.0) / (2.0 * nn - 2.0);
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-14;
  const double integral =
      integrate(
          [&](double r) {
            const double s = std::sin(r);
            const double s2 = s * s;
            return std::pow(s, 2 * n - 3) *
                   (2.0 * (nn * nn + nn) * (1.0 - ratio * s2) + 2.0 * s2 / (nn - 1.0));
          },
          0.0, out.rho, opts)
          .value;
  const double prefactor =
      std::exp(std::lgamma(nn + 0.5) - 0.5 * std::log(kPi) - std::lgamma(nn - 1.0));
  out.probability = out.kappa * prefactor * integral;
  return out;
}

TailResult tail_probability_2d(int n, double u) {
  return tail_probability_2d(n, u, spherical_reach(HarmonicIndex{n, 2}).value);
}

EulerCharExpectation expected_euler_characteristic(const HarmonicIndex& idx, double u,
                                                   double rho_d) {
  const TailResult t = tail_probability(idx, u, rho_d);
  return EulerCharExpectation{t.probability / t.kappa, t.valid};
}

}  // namespace sphreach
