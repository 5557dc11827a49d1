// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphreach/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sphreach {

namespace {

using u128 = unsigned __int128;
constexpr u128 kU64Max = std::numeric_limits<std::uint64_t>::max();

void check_order(double nu) {
  if (!(nu >= -0.5) || nu > 5.0) {
    throw std::domain_error("bessel_j: order " + std::to_string(nu) +
                            " outside the supported range [-1/2, 5]");
  }
}

// Power series in extended precision. Largest term near x = 16 is ~1e5, so
// the 64-bit mantissa keeps the absolute error well below 1e-13.
long double series_j(long double nu, long double x) {
  const long double half = x / 2;
  const long double q = -half * half;
  long double term = std::pow(half, nu) / std::tgamma(nu + 1);
  long double sum = term;
  for (int j = 1; j < 200; ++j) {
    term *= q / (static_cast<long double>(j) * (j + nu));
    sum += term;
    if (j > half && std::fabs(term) < 1e-22L) break;
  }
  return sum;
}

long double series_j_prime(long double nu, long double x) {
  const long double half = x / 2;
  const long double q = -half * half;
  long double term = std::pow(half, nu) / std::tgamma(nu + 1);
  long double sum = nu * term;
  for (int j = 1; j < 200; ++j) {
    term *= q / (static_cast<long double>(j) * (j + nu));
    sum += (2 * j + nu) * term;
    if (j > half && std::fabs(term) < 1e-22L) break;
  }
  return sum / x;
}

struct Hankel {
  double p = 0.0, q = 0.0, dp = 0.0, dq = 0.0;
};

// Asymptotic P, Q series and their x-derivatives; summation stops once the
// terms stop decreasing.
Hankel hankel_series(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  Hankel h;
  double a = 1.0;  // a_k(nu) / x^k
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= (mu - odd * odd) / (8.0 * k * x);
    }
    const double mag = std::fabs(a);
    if (mag > prev) break;
    prev = mag;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      h.p += sign * a;
      h.dp += sign * a * (-k / x);
    } else {
      h.q += sign * a;
      h.dq += sign * a * (-k / x);
    }
    if (mag < 1e-18) break;
  }
  return h;
}

double hankel_j(double nu, double x) {
  const Hankel h = hankel_series(nu, x);
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         (h.p * std::cos(chi) - h.q * std::sin(chi));
}

double hankel_j_prime(double nu, double x) {
  const Hankel h = hankel_series(nu, x);
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  const double base = h.p * c - h.q * s;
  return amp * (-base / (2.0 * x) + h.dp * c - h.p * s - h.dq * s - h.q * c);
}

}  // namespace

std::uint64_t dimension(const HarmonicIndex& idx) {
  if (idx.n < 1 || idx.d < 1) {
    throw std::invalid_argument("dimension: requires n >= 1 and d >= 1");
  }
  const std::uint64_t n = static_cast<std::uint64_t>(idx.n);
  const std::uint64_t d = static_cast<std::uint64_t>(idx.d);
  // binomial(n+d-1, d-1) via the shorter of the two symmetric products.
  const std::uint64_t m = n + d - 1;
  const std::uint64_t r = std::min(d - 1, n);
  u128 binom = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    binom = binom * (m - r + i) / i;
    if (binom > kU64Max) throw std::overflow_error("dimension: exceeds 64 bits");
  }
  const u128 k = binom * (2 * n + d - 1) / (n + d - 1);
  if (k > kU64Max) throw std::overflow_error("dimension: exceeds 64 bits");
  return static_cast<std::uint64_t>(k);
}

double sphere_area(int d) {
  if (d < 0) throw std::invalid_argument("sphere_area: d must be >= 0");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double ambient_sphere_area(int m) {
  if (m < 1) throw std::invalid_argument("ambient_sphere_area: m must be >= 1");
  return sphere_area(m - 1);
}

double zonal(int n, int d, double x) {
  if (n < 0 || d < 1) throw std::invalid_argument("zonal: requires n >= 0, d >= 1");
  if (!(std::fabs(x) <= 1.0)) throw std::domain_error("zonal: x must lie in [-1, 1]");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int m = 2; m <= n; ++m) {
    const double next =
        ((2.0 * m + d - 3.0) * x * cur - (m - 1.0) * prev) / (m + d - 2.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double endpoint_derivative(const HarmonicIndex& idx) {
  return static_cast<double>(idx.n) * (idx.n + idx.d - 1.0) / idx.d;
}

double endpoint_second_derivative(const HarmonicIndex& idx) {
  if (idx.n < 2) return 0.0;
  const HarmonicIndex lifted{idx.n - 1, idx.d + 2};
  return endpoint_derivative(idx) * endpoint_derivative(lifted);
}

LegendreEval legendre(const HarmonicIndex& idx, double x) {
  if (!(std::fabs(x) <= 1.0 + 1e-12)) {
    throw std::domain_error("legendre: argument outside [-1, 1]");
  }
  x = std::clamp(x, -1.0, 1.0);
  LegendreEval out;
  out.value = zonal(idx.n, idx.d, x);
  // d/dx of the normalized Gegenbauer polynomial is P'(1) times the level
  // n-1 zonal polynomial on S^{d+2}; no division by 1 - x^2 is involved.
  if (idx.n >= 1) {
    out.derivative = endpoint_derivative(idx) * zonal(idx.n - 1, idx.d + 2, x);
  }
  return out;
}

std::vector<double> endpoint_taylor(const HarmonicIndex& idx, int count) {
  std::vector<double> p(static_cast<std::size_t>(std::max(count, 0)), 0.0);
  if (p.empty()) return p;
  p[0] = 1.0;
  const double n = idx.n;
  const double d = idx.d;
  for (int k = 1; k < count && k <= idx.n; ++k) {
    p[k] = -p[k - 1] * (n - k + 1.0) * (n + d - 2.0 + k) / (k * (d + 2.0 * k - 2.0));
  }
  return p;
}

double bessel_j(double nu, double x) {
  check_order(nu);
  if (x < 0.0) throw std::domain_error("bessel_j: x must be >= 0");
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  if (x <= kBesselSeriesLimit) return static_cast<double>(series_j(nu, x));
  return hankel_j(nu, x);
}

double bessel_j_derivative(double nu, double x) {
  check_order(nu);
  if (x < 0.0) throw std::domain_error("bessel_j_derivative: x must be >= 0");
  if (x == 0.0) {
    if (nu == 0.0 || nu > 1.0) return 0.0;
    if (nu == 1.0) return 0.5;
    return std::numeric_limits<double>::infinity();
  }
  if (x <= kBesselSeriesLimit) return static_cast<double>(series_j_prime(nu, x));
  return hankel_j_prime(nu, x);
}

std::vector<double> j_inf_series(int d, int count) {
  std::vector<double> c(static_cast<std::size_t>(std::max(count, 0)), 0.0);
  if (c.empty()) return c;
  c[0] = 1.0;
  const double h = 0.5 * d;
  for (int j = 1; j < count; ++j) c[j] = -c[j - 1] / (j * (j - 1.0 + h));
  return c;
}

JInfEval j_inf(int d, double y) {
  if (d < 1) throw std::invalid_argument("j_inf: d must be >= 1");
  if (y < 0.0) throw std::domain_error("j_inf: y must be >= 0");
  JInfEval out;
  if (y <= kBesselSeriesLimit) {
    const long double z = static_cast<long double>(y) * y / 4;
    const long double h = 0.5L * d;
    long double c = 1.0L;
    long double zpow = 1.0L;  // z^{j-1}
    long double value = 1.0L;
    long double dz = 0.0L;  // d/dz
    for (int j = 1; j < 200; ++j) {
      c = -c / (j * (j - 1.0L + h));
      dz += j * c * zpow;
      zpow *= z;
      const long double term = c * zpow;
      value += term;
      if (j > y && std::fabs(term) < 1e-22L) break;
    }
    out.value = static_cast<double>(value);
    out.derivative = static_cast<double>(dz * y / 2);
    return out;
  }
  const double nu = 0.5 * d - 1.0;
  const double scale = std::tgamma(0.5 * d) * std::pow(0.5 * y, -nu);
  out.value = scale * bessel_j(nu, y);
  out.derivative = -scale * bessel_j(nu + 1.0, y);
  return out;
}

}  // namespace sphreach
