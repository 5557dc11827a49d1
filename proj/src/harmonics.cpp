// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphreach/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphreach {

namespace {

constexpr double kPi = std::numbers::pi;

void check_supported(const HarmonicIndex& idx) {
  if (idx.n < 1) throw std::invalid_argument("harmonics: n must be >= 1");
  if (idx.d != 1 && idx.d != 2) {
    throw std::invalid_argument("harmonics: explicit bases exist only for d = 1 and d = 2");
  }
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Column m of the normalized associated Legendre table, evaluated at degree n
// only. Returns abar_n^m(x) given abar_m^m.
double column_to_degree(int n, int m, double x, double diag) {
  if (n == m) return diag;
  double prev = diag;
  double cur = std::sqrt(2.0 * m + 3.0) * x * diag;
  for (int l = m + 2; l <= n; ++l) {
    const double l2 = static_cast<double>(l) * l;
    const double m2 = static_cast<double>(m) * m;
    const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
    const double lm1 = l - 1.0;
    const double b = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

Vec3 SpherePoint::cartesian() const {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

SpherePoint SpherePoint::from_cartesian(const Vec3& v) {
  const double rho = std::hypot(v[0], v[1]);
  SpherePoint p;
  p.theta = std::atan2(rho, v[2]);
  p.phi = std::atan2(v[1], v[0]);
  if (p.phi < 0.0) p.phi += 2.0 * kPi;
  return p;
}

double angle_between(const Vec3& x, const Vec3& y) {
  const Vec3 c = cross(x, y);
  const double s = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  return std::atan2(s, dot);
}

double angle_between(const SpherePoint& x, const SpherePoint& y) {
  return angle_between(x.cartesian(), y.cartesian());
}

void basis_eval_s2(int n, const Vec3& v, std::span<double> out, std::span<double> scratch) {
  if (out.size() < static_cast<std::size_t>(2 * n + 1) ||
      scratch.size() < static_cast<std::size_t>(n + 1)) {
    throw std::invalid_argument("basis_eval_s2: buffers too small");
  }
  const double rho = std::hypot(v[0], v[1]);
  const double norm = std::hypot(rho, v[2]);
  const double x = v[2] / norm;
  const double s = rho / norm;
  // cos(m phi), sin(m phi) by complex multiplication; phi = 0 at the poles.
  const double c1 = rho > 0.0 ? v[0] / rho : 1.0;
  const double s1 = rho > 0.0 ? v[1] / rho : 0.0;

  double diag = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= n; ++m) {
    if (m > 0) diag *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    scratch[m] = column_to_degree(n, m, x, diag);
  }
  out[n] = scratch[0];
  double cm = 1.0, sm = 0.0;
  for (int m = 1; m <= n; ++m) {
    const double c = cm * c1 - sm * s1;
    sm = sm * c1 + cm * s1;
    cm = c;
    const double a = std::numbers::sqrt2 * scratch[m];
    out[n + m] = a * cm;
    out[n - m] = a * sm;
  }
}

std::vector<double> basis_eval(const HarmonicIndex& idx, const SpherePoint& x) {
  check_supported(idx);
  if (idx.d == 1) {
    const double r = 1.0 / std::sqrt(kPi);
    return {r * std::cos(idx.n * x.theta), r * std::sin(idx.n * x.theta)};
  }
  std::vector<double> out(2 * idx.n + 1);
  std::vector<double> scratch(idx.n + 1);
  basis_eval_s2(idx.n, x.cartesian(), out, scratch);
  return out;
}

std::vector<double> immersion(const HarmonicIndex& idx, const SpherePoint& x) {
  std::vector<double> b = basis_eval(idx, x);
  const double scale = std::sqrt(sphere_area(idx.d) / static_cast<double>(dimension(idx)));
  for (double& v : b) v *= scale;
  return b;
}

double kernel(const HarmonicIndex& idx, const SpherePoint& x, const SpherePoint& y) {
  if (idx.n < 0 || idx.d < 1) throw std::invalid_argument("kernel: bad index");
  double c;
  if (idx.d == 1) {
    c = std::cos(x.theta - y.theta);
  } else {
    c = std::cos(angle_between(x, y));
  }
  return zonal(idx.n, idx.d, c);
}

double kernel_summed(const HarmonicIndex& idx, const SpherePoint& x, const SpherePoint& y) {
  const std::vector<double> a = immersion(idx, x);
  const std::vector<double> b = immersion(idx, y);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double field_eval(const HarmonicIndex& idx, std::span<const double> a, const SpherePoint& x) {
  check_supported(idx);
  if (a.size() != dimension(idx)) throw std::invalid_argument("field_eval: wrong length");
  double norm2 = 0.0;
  for (double v : a) norm2 += v * v;
  if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw std::invalid_argument("field_eval: coefficient vector must be a unit vector");
  }
  const std::vector<double> b = basis_eval(idx, x);
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace sphreach
