// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sphreach/reach.hpp"

namespace sphreach {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kTail = 1.0 / std::sqrt(2.0);

// Below this y the small-y objective is summed as a series in z = y^2/4 with
// the vanishing leading order cancelled analytically.
constexpr double kSeriesY = 2.0;
constexpr int kSeriesTerms = 30;
constexpr double kGridStep = 0.005;
constexpr double kBaseScan = 60.0;

void check_d(int d) {
  if (d < 1) throw std::invalid_argument("bound: d must be >= 1");
  if (d > 10) throw std::domain_error("bound: d > 10 exceeds the supported Bessel orders");
}

// With J = sum c_j z^j: 1 - J = z G(z), J' = (y/2) dJ/dz = -(y/2) H(z), and
// 2 - 2J - d J'^2 = z (2G - d H^2) = z^2 q(z) since q_0 = 0.
double small_y_series(int d, double y) {
  const std::vector<double> c = j_inf_series(d, kSeriesTerms + 1);
  const double z = 0.25 * y * y;
  std::vector<double> g(kSeriesTerms), h(kSeriesTerms);
  for (int k = 0; k < kSeriesTerms; ++k) {
    g[k] = -c[k + 1];
    h[k] = -(k + 1.0) * c[k + 1];
  }
  double g_sum = 0.0, q_sum = 0.0;
  double zk = 1.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    g_sum += g[k] * zk;
    zk *= z;
  }
  double zk1 = 1.0;
  for (int k = 1; k < kSeriesTerms; ++k) {
    double h2 = 0.0;
    for (int i = 0; i <= k; ++i) h2 += h[i] * h[k - i];
    q_sum += (2.0 * g[k] - d * h2) * zk1;
    zk1 *= z;
  }
  return g_sum / std::sqrt(q_sum);
}

double small_y_direct(int d, double y) {
  const JInfEval j = j_inf(d, y);
  const double rad = 2.0 - 2.0 * j.value - d * j.derivative * j.derivative;
  if (rad <= 0.0) return kInf;
  return (1.0 - j.value) / std::sqrt(rad);
}

double reduce_circle(double y) {
  double t = std::fmod(y, 2.0 * kPi);
  if (t > kPi) t = 2.0 * kPi - t;
  return t;
}

double amplitude_envelope(int d, double y) {
  // |J_mu(y)| <= sqrt(2/(pi y)) (1 + c/y) for mu <= nu + 1 and y past the
  // start of the asymptotic regime; c covers the first Hankel corrections.
  const double nu = 0.5 * d - 1.0;
  const double c = std::fabs(4.0 * (nu + 1.0) * (nu + 1.0) - 1.0) / 4.0 + 1.0;
  return std::tgamma(0.5 * d) * std::pow(0.5 * y, -nu) * std::sqrt(2.0 / (kPi * y)) *
         (1.0 + c / y);
}

double envelope_start(int d) {
  const double nu = 0.5 * d - 1.0;
  return 8.0 + 2.0 * (nu + 1.0) * (nu + 1.0);
}

struct Scan {
  Minimum small, odd;
};

Scan scan(int d, double lo, double hi) {
  const int points = std::max(3, static_cast<int>(std::ceil((hi - lo) / kGridStep)) + 1);
  auto small = [d](double y) { return small_y_objective(d, y); };
  auto odd = [d](double y) { return odd_objective(d, y); };
  return Scan{global_minimize(small, lo, hi, points, 1e-10, 1e-3),
              global_minimize(odd, lo, hi, points, 1e-10, 1e-3)};
}

}  // namespace

double small_y_objective(int d, double y) {
  check_d(d);
  if (!(y >= 0.0)) throw std::domain_error("small_y_objective: y must be >= 0");
  if (d == 1) {
    // J = cos y, J' = -sin y: the objective is identically 1 away from the
    // zeros of 1 - cos y, where the series gives the same limit.
    y = reduce_circle(y);
  }
  if (y <= kSeriesY) return small_y_series(d, y);
  return small_y_direct(d, y);
}

double odd_objective(int d, double y) {
  check_d(d);
  if (!(y >= 0.0)) throw std::domain_error("odd_objective: y must be >= 0");
  if (d == 1) return small_y_objective(1, kPi - reduce_circle(y));
  const JInfEval j = j_inf(d, y);
  const double rad = 2.0 + 2.0 * j.value - d * j.derivative * j.derivative;
  if (rad <= 0.0) return kInf;
  return (1.0 + j.value) / std::sqrt(rad);
}

double tail_deviation_bound(int d, double y) {
  check_d(d);
  if (d == 1 || y < envelope_start(d)) return kInf;
  const double a = amplitude_envelope(d, y);
  const double upper_rad = 2.0 - 2.0 * a - d * a * a;
  if (upper_rad <= 0.0 || a >= 1.0) return kInf;
  const double above = (1.0 + a) / std::sqrt(upper_rad) - kTail;
  const double below = kTail - (1.0 - a) / std::sqrt(2.0 + 2.0 * a);
  return std::max(above, below);
}

double bound_y_max(int d, double tol) {
  check_d(d);
  if (d == 1) return 2.0 * kPi;
  double lo = envelope_start(d);
  double hi = lo;
  while (tail_deviation_bound(d, hi) > tol) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) throw std::runtime_error("bound_y_max: envelope does not decay");
  }
  // The envelope decreases monotonically past its start, so bisect in log y.
  for (int i = 0; i < 100 && hi / lo > 1.0 + 1e-9; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (tail_deviation_bound(d, mid) > tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

BoundReport asymptotic_lower_bound(int d) {
  check_d(d);
  BoundReport out;
  out.d = d;
  out.term_tail = kTail;
  out.y_max = bound_y_max(d);

  double y_scan = d == 1 ? out.y_max : std::min(out.y_max, kBaseScan);
  Scan s = scan(d, 0.0, y_scan);
  // Past y_scan both objectives stay within the envelope deviation of 1/sqrt 2;
  // extend until that band cannot undercut the minima already found.
  while (y_scan < out.y_max) {
    const double dev = tail_deviation_bound(d, y_scan);
    if (std::isfinite(dev) && s.small.value <= kTail - dev && s.odd.value <= kTail - dev) break;
    const double next = std::min(out.y_max, 2.0 * y_scan);
    const Scan more = scan(d, y_scan, next);
    if (more.small.value < s.small.value) s.small = more.small;
    if (more.odd.value < s.odd.value) s.odd = more.odd;
    y_scan = next;
  }
  out.y_scan = y_scan;
  out.term_small_y = s.small.value;
  out.argmin_small_y = s.small.x;
  out.term_odd = s.odd.value;
  out.argmin_odd = s.odd.x;
  out.bound = std::min({out.term_small_y, out.term_tail, out.term_odd});
  return out;
}

}  // namespace sphreach
