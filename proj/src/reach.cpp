// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphreach/reach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sphreach {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Series regime when P'(1) * (1 - cos theta) is at most this. The Taylor
// coefficients in t = 1 - x are then dominated by (P'(1) t)^k / k!.
constexpr double kSeriesReach = 0.5;
constexpr int kSeriesTerms = 32;

void check_index(const HarmonicIndex& idx) {
  if (idx.n < 1 || idx.d < 1) {
    throw std::invalid_argument("reach: requires n >= 1 and d >= 1");
  }
}

double check_radicand(double r, const char* what) {
  if (r < -kRadicandClampTol) {
    throw std::runtime_error(std::string("reach: negative radicand in ") + what + " (" +
                             std::to_string(r) + ")");
  }
  return r;
}

// Reduce (n, d, theta) to an equivalent evaluation point.
// d = 1: P_{n,1}(cos theta) = cos(n theta), which is level 1 at angle n theta.
// Even n: the functional is symmetric about pi/2.
struct Reduced {
  HarmonicIndex idx;
  double theta;
};

Reduced reduce(const HarmonicIndex& idx, double theta) {
  Reduced r{idx, theta};
  if (idx.d == 1 && idx.n > 1) {
    double t = std::fmod(idx.n * theta, 2.0 * kPi);
    if (t > kPi) t = 2.0 * kPi - t;
    r.idx = HarmonicIndex{1, 1};
    r.theta = t;
  }
  if (r.idx.n % 2 == 0 && r.theta > 0.5 * kPi) r.theta = kPi - r.theta;
  return r;
}

PairTerms series_terms(const HarmonicIndex& idx, double t) {
  const int count = std::min(idx.n + 1, kSeriesTerms);
  const std::vector<double> p = endpoint_taylor(idx, count);
  const double a = endpoint_derivative(idx);
  const int m = count - 1;  // number of g, h coefficients
  std::vector<double> g(m), h(m);
  for (int k = 0; k < m; ++k) {
    g[k] = -p[k + 1];
    h[k] = -(k + 1.0) * p[k + 1];
  }
  // 2(1-P) - sin^2 P'^2 / a = t^2 (2 qt + h^2/a), with sin^2 = t (2 - t) and
  // q_k = g_k - (h^2)_k / a. q_0 vanishes identically, so it is dropped.
  double g_sum = 0.0, h_sum = 0.0, q_sum = 0.0;
  double tk = 1.0;
  for (int k = 0; k < m; ++k) {
    g_sum += g[k] * tk;
    h_sum += h[k] * tk;
    tk *= t;
  }
  // h^2 has degree 2(m-1); keep all of it so low levels stay exact.
  double tk1 = 1.0;  // t^{k-1}
  for (int k = 1; k <= 2 * (m - 1); ++k) {
    double h2 = 0.0;
    for (int i = std::max(0, k - m + 1); i <= std::min(k, m - 1); ++i) h2 += h[i] * h[k - i];
    const double gk = k < m ? g[k] : 0.0;
    q_sum += (gk - h2 / a) * tk1;
    tk1 *= t;
  }
  PairTerms out;
  out.scale = t;
  out.numerator = g_sum;
  out.radicand_euclidean = 2.0 * q_sum + h_sum * h_sum / a;
  out.radicand_spherical = out.radicand_euclidean - g_sum * g_sum;
  return out;
}

double limit_value(const HarmonicIndex& idx, ReachMode mode) {
  // theta -> 0 with a = P'(1), b = P''(1): the chord ratio tends to
  // a / sqrt(a + 3b) and the geodesic one to arctan(a / sqrt(a + 3b - a^2)).
  const double a = endpoint_derivative(idx);
  const double b = endpoint_second_derivative(idx);
  if (mode == ReachMode::euclidean) return a / std::sqrt(a + 3.0 * b);
  const double rad = a + 3.0 * b - a * a;
  return rad > 0.0 ? std::atan2(a, std::sqrt(rad)) : 0.5 * kPi;
}

}  // namespace

std::string_view to_string(ReachMode mode) {
  return mode == ReachMode::euclidean ? "euclidean" : "spherical";
}

ReachMode parse_reach_mode(std::string_view text) {
  if (text == "euclidean") return ReachMode::euclidean;
  if (text == "spherical") return ReachMode::spherical;
  throw std::invalid_argument("unknown reach mode '" + std::string(text) + "'");
}

PairTerms pair_terms(const HarmonicIndex& idx, double theta) {
  check_index(idx);
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::domain_error("reach: theta outside [0, pi]");
  }
  const double a = endpoint_derivative(idx);
  const double half = std::sin(0.5 * theta);
  const double t = 2.0 * half * half;  // 1 - cos theta without cancellation
  if (a * t <= kSeriesReach) return series_terms(idx, t);
  const LegendreEval pe = legendre(idx, std::cos(theta));
  const double s = std::sin(theta);
  const double tangent = pe.derivative * s;
  const double tangent_sq = tangent * tangent / a;
  PairTerms out;
  out.scale = 1.0;
  out.numerator = 1.0 - pe.value;
  out.radicand_euclidean = 2.0 * (1.0 - pe.value) - tangent_sq;
  out.radicand_spherical = (1.0 - pe.value) * (1.0 + pe.value) - tangent_sq;
  return out;
}

FunctionalValue evaluate_functional(const HarmonicIndex& idx, double theta, ReachMode mode) {
  check_index(idx);
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::domain_error("reach: theta outside [0, pi]");
  }
  const Reduced r = reduce(idx, theta);
  if (r.theta == 0.0) return {limit_value(r.idx, mode), false};
  const PairTerms pt = pair_terms(r.idx, r.theta);
  const double s2 = pt.scale * pt.scale;
  FunctionalValue out;
  if (mode == ReachMode::euclidean) {
    const double rad = check_radicand(pt.radicand_euclidean * s2, "euclidean functional");
    if (rad <= 0.0) return {kInf, true};
    out.value = pt.numerator / std::sqrt(pt.radicand_euclidean);
  } else {
    const double rad = check_radicand(pt.radicand_spherical * s2, "spherical functional");
    if (rad <= 0.0) return {0.5 * kPi, true};
    out.value = std::atan2(pt.numerator, std::sqrt(pt.radicand_spherical));
  }
  return out;
}

double reach_functional(const HarmonicIndex& idx, double theta) {
  return evaluate_functional(idx, theta, ReachMode::euclidean).value;
}

double spherical_functional(const HarmonicIndex& idx, double theta) {
  return evaluate_functional(idx, theta, ReachMode::spherical).value;
}

double euclidean_pair_radius(double c, double tangent_sq) {
  const double rad = check_radicand(2.0 * (1.0 - c) - tangent_sq, "pair radius");
  if (rad <= 0.0) return kInf;
  return (1.0 - c) / std::sqrt(rad);
}

double spherical_pair_radius(double c, double tangent_sq) {
  const double rad = check_radicand(1.0 - c * c - tangent_sq, "spherical pair radius");
  if (rad <= 0.0) return 0.5 * kPi;
  return std::atan2(1.0 - c, std::sqrt(rad));
}

Minimum golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? Minimum{x1, f1, false} : Minimum{x2, f2, false};
}

namespace {

struct GridPass {
  Minimum best;
  bool failed = false;
};

GridPass grid_pass(const std::function<double(double)>& f, double lo, double hi, int points,
                   double tol, double margin) {
  std::vector<double> xs(points), fs(points);
  const double step = (hi - lo) / (points - 1);
  double grid_min = kInf;
  std::size_t grid_arg = 0;
  for (int i = 0; i < points; ++i) {
    xs[i] = (i == points - 1) ? hi : lo + step * i;
    fs[i] = f(xs[i]);
    if (fs[i] < grid_min) {
      grid_min = fs[i];
      grid_arg = static_cast<std::size_t>(i);
    }
  }
  GridPass out;
  out.best = Minimum{xs[grid_arg], grid_min, false};
  if (!std::isfinite(grid_min)) return out;
  for (int i = 0; i < points; ++i) {
    if (!std::isfinite(fs[i]) || fs[i] > grid_min + margin) continue;
    const bool left_ok = i == 0 || fs[i] <= fs[i - 1];
    const bool right_ok = i == points - 1 || fs[i] <= fs[i + 1];
    if (!left_ok || !right_ok) continue;
    const double a = xs[std::max(i - 1, 0)];
    const double b = xs[std::min(i + 1, points - 1)];
    Minimum m = golden_section(f, a, b, tol);
    // An endpoint minimum is its own refinement.
    if (fs[i] < m.value) {
      const bool at_edge = i == 0 || i == points - 1;
      if (!at_edge && m.value > fs[i] + 1e-12 * std::max(1.0, std::fabs(fs[i]))) out.failed = true;
      m = Minimum{xs[i], fs[i], false};
    }
    if (m.value < out.best.value) out.best = m;
  }
  return out;
}

}  // namespace

Minimum global_minimize(const std::function<double(double)>& f, double lo, double hi, int points,
                        double tol, double margin) {
  if (!(hi > lo) || points < 3) throw std::invalid_argument("global_minimize: bad grid");
  GridPass pass = grid_pass(f, lo, hi, points, tol, margin);
  if (!pass.failed) return pass.best;
  pass = grid_pass(f, lo, hi, 4 * (points - 1) + 1, tol, margin);
  if (pass.failed) {
    throw std::runtime_error("global_minimize: refinement failed to bracket a minimum");
  }
  pass.best.densified = true;
  return pass.best;
}

ReachResult critical_radius(const HarmonicIndex& idx, ReachMode mode, const ReachOptions& opts) {
  check_index(idx);
  const double hi = (idx.n % 2 == 0) ? 0.5 * kPi : kPi;
  const int points = std::max(opts.min_grid, opts.grid_per_level * idx.n);
  auto objective = [&](double theta) {
    const FunctionalValue v = evaluate_functional(idx, theta, mode);
    return v.clamped ? kInf : v.value;
  };
  ReachResult out;
  out.mode = mode;
  out.grid_points = points;
  const Minimum m = global_minimize(objective, 0.0, hi, points, opts.theta_tol);
  if (std::isfinite(m.value)) {
    out.value = m.value;
    out.argmin_theta = m.x;
  } else {
    // Every point clamped (d = 1 in spherical mode): the radicand is zero on
    // the whole domain and the geodesic functional is pi/2 throughout.
    out.value = evaluate_functional(idx, 0.5 * hi, mode).value;
    out.argmin_theta = 0.5 * hi;
  }
  out.densified = m.densified;

  const int stride = std::max(1, points / std::max(opts.trace_points, 1));
  const double step = hi / (points - 1);
  bool placed = false;
  for (int i = 0; i < points; i += stride) {
    const double theta = (i == points - 1) ? hi : step * i;
    if (!placed && theta >= out.argmin_theta) {
      if (theta != out.argmin_theta) out.trace.emplace_back(out.argmin_theta, out.value);
      placed = true;
    }
    const FunctionalValue v = evaluate_functional(idx, theta, mode);
    out.trace.emplace_back(theta, v.value);
  }
  if (!placed) out.trace.emplace_back(out.argmin_theta, out.value);
  return out;
}

ReachResult spherical_reach(const HarmonicIndex& idx, const ReachOptions& opts) {
  return critical_radius(idx, ReachMode::spherical, opts);
}

double min_normal_radicand(const HarmonicIndex& idx, int points) {
  check_index(idx);
  // Even n identifies antipodes; d = 1 with n > 1 wraps the circle n times,
  // so the first coincidence sits at 2 pi / n.
  const double hi = (idx.d == 1 && idx.n > 1) ? 2.0 * kPi / idx.n : kPi;
  double lowest = kInf;
  for (int i = 1; i < points; ++i) {
    const double theta = hi * i / points;
    const Reduced r = reduce(idx, theta);
    if (r.theta == 0.0) continue;
    const PairTerms pt = pair_terms(r.idx, r.theta);
    // Divided by (1 - P)^2 the common scale cancels; this is 1 / F^2.
    if (pt.numerator <= 0.0) continue;
    lowest = std::min(lowest, pt.radicand_euclidean / (pt.numerator * pt.numerator));
  }
  return lowest;
}

int immersion_level_proxy(int d, int n_max) {
  if (d < 1 || n_max < 1) throw std::invalid_argument("immersion_level_proxy: bad range");
  int level = n_max + 1;
  for (int n = n_max; n >= 1; --n) {
    if (!(min_normal_radicand(HarmonicIndex{n, d}, 4000) > 0.0)) break;
    level = n;
  }
  return level;
}

}  // namespace sphreach
