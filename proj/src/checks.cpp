// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphreach/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

#include "sphreach/harmonics.hpp"
#include "sphreach/mesh.hpp"
#include "sphreach/montecarlo.hpp"
#include "sphreach/quadrature.hpp"
#include "sphreach/reach.hpp"
#include "sphreach/specfun.hpp"
#include "sphreach/tube.hpp"

namespace sphreach {

namespace {

constexpr double kPi = std::numbers::pi;

using Outcome = std::pair<bool, std::string>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Outcome max_error(double err, double tol) {
  return {err <= tol, "max error " + fmt(err) + " (tol " + fmt(tol) + ")"};
}

SpherePoint random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return SpherePoint::from_cartesian({g(rng), g(rng), g(rng)});
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec3 along(const Vec3& p, const Vec3& dir, double t) {
  return {std::cos(t) * p[0] + std::sin(t) * dir[0], std::cos(t) * p[1] + std::sin(t) * dir[1],
          std::cos(t) * p[2] + std::sin(t) * dir[2]};
}

std::array<Vec3, 2> frame(const Vec3& p) {
  const Vec3 axis = std::fabs(p[0]) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1{p[1] * axis[2] - p[2] * axis[1], p[2] * axis[0] - p[0] * axis[2],
          p[0] * axis[1] - p[1] * axis[0]};
  const double r = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& v : e1) v /= r;
  const Vec3 e2{p[1] * e1[2] - p[2] * e1[1], p[2] * e1[0] - p[0] * e1[2],
                p[0] * e1[1] - p[1] * e1[0]};
  return {e1, e2};
}

// Fourth-order central difference of the immersion along a great circle.
std::vector<double> immersion_tangent(const HarmonicIndex& idx, const Vec3& p, const Vec3& dir,
                                      double h) {
  auto at = [&](double t) { return immersion(idx, SpherePoint::from_cartesian(along(p, dir, t))); };
  const auto f2 = at(2 * h), f1 = at(h), m1 = at(-h), m2 = at(-2 * h);
  std::vector<double> out(f1.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (-f2[i] + 8 * f1[i] - 8 * m1[i] + m2[i]) / (12 * h);
  }
  return out;
}

// |projection of v onto span(t1, t2)|^2 via the 2x2 Gram system.
double projection_sq(const std::vector<double>& v, const std::vector<double>& t1,
                     const std::vector<double>& t2) {
  const double g11 = dot(t1, t1), g12 = dot(t1, t2), g22 = dot(t2, t2);
  const double b1 = dot(v, t1), b2 = dot(v, t2);
  const double det = g11 * g22 - g12 * g12;
  const double c1 = (g22 * b1 - g12 * b2) / det;
  const double c2 = (g11 * b2 - g12 * b1) / det;
  return c1 * b1 + c2 * b2;
}

std::vector<std::pair<double, double>> gauss_legendre(int m) {
  std::vector<std::pair<double, double>> nodes;
  for (int i = 1; i <= m; ++i) {
    double x = std::cos(kPi * (i - 0.25) / (m + 0.5));
    for (int it = 0; it < 100; ++it) {
      const LegendreEval e = legendre(HarmonicIndex{m, 2}, x);
      const double dx = e.value / e.derivative;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double dp = legendre(HarmonicIndex{m, 2}, x).derivative;
    nodes.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
  }
  return nodes;
}

// ---- specfun ---------------------------------------------------------------

Outcome check_parity() {
  double worst = 0.0;
  for (int d = 2; d <= 4; ++d) {
    for (int n = 1; n <= 200; ++n) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 1000;
        worst = std::max(worst, std::fabs(zonal(n, d, -x) - sign * zonal(n, d, x)));
      }
    }
  }
  return max_error(worst, 1e-10);
}

Outcome check_endpoint_derivative() {
  double worst = 0.0;
  for (int d = 1; d <= 4; ++d) {
    for (int n = 1; n <= 500; ++n) {
      const HarmonicIndex idx{n, d};
      const double want = n * (n + d - 1.0) / d;
      worst = std::max(worst, std::fabs(legendre(idx, 1.0).derivative / want - 1.0));
    }
  }
  return max_error(worst, 1e-12);
}

Outcome check_derivative_fd() {
  double worst = 0.0;
  const double h = 1e-6;
  for (int d = 2; d <= 3; ++d) {
    for (int n = 1; n <= 30; ++n) {
      const HarmonicIndex idx{n, d};
      for (int i = 0; i <= 200; ++i) {
        const double x = -0.95 + 1.9 * i / 200;
        const double fd = (legendre(idx, x + h).value - legendre(idx, x - h).value) / (2 * h);
        const double an = legendre(idx, x).derivative;
        worst = std::max(worst, std::fabs(fd - an) / std::max(1.0, std::fabs(an)));
      }
    }
  }
  return max_error(worst, 1e-5);
}

Outcome check_bessel_identity() {
  double worst = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = 100.0 * i / 10000;
    worst = std::max(worst, std::fabs(bessel_j_derivative(0.0, x) + bessel_j(1.0, x)));
  }
  return max_error(worst, 1e-11);
}

Outcome check_hilb() {
  double worst = 0.0;  // largest |exact - leading| / bound
  for (int d = 2; d <= 4; ++d) {
    for (int n : {20, 50, 100, 200}) {
      const HarmonicIndex idx{n, d};
      for (int i = 1; i <= 500; ++i) {
        const double theta = 0.5 * kPi * i / 500;
        const HilbApprox h = hilb_approx(idx, theta);
        const double err = std::fabs(zonal(n, d, std::cos(theta)) - h.leading);
        if (err > 1e-13) worst = std::max(worst, err / h.remainder_bound);
      }
    }
  }
  return {worst <= 1.0, "max error/bound " + fmt(worst)};
}

// ---- reach -----------------------------------------------------------------

Outcome check_d1_identity() {
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    for (int i = 1; i <= 1000; ++i) {
      const double theta = kPi * i / 1000;
      if (std::cos(n * theta) > 1.0 - 1e-9) continue;
      worst = std::max(worst, std::fabs(reach_functional(HarmonicIndex{n, 1}, theta) - 1.0));
    }
  }
  return max_error(worst, 1e-12);
}

Outcome check_theorem1(bool fast) {
  const BoundReport b = asymptotic_lower_bound(2);
  const double limit = std::min(b.term_small_y, b.term_tail);
  double prev_gap = 1.0;
  std::ostringstream os;
  bool ok = true;
  const std::vector<int> levels = fast ? std::vector<int>{50, 100, 200}
                                       : std::vector<int>{50, 100, 200, 400, 800};
  for (int n : levels) {
    const double r = critical_radius(HarmonicIndex{n, 2}, ReachMode::euclidean).value;
    const double gap = std::fabs(r - limit);
    ok = ok && r >= b.bound - 0.01 && gap < prev_gap;
    prev_gap = gap;
    os << "n=" << n << " gap " << fmt(gap) << "; ";
  }
  return {ok, os.str()};
}

Outcome check_rotation_invariance() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int n : {3, 4, 7}) {
    const HarmonicIndex idx{n, 2};
    const double want = critical_radius(idx, ReachMode::euclidean).value;
    const double h = 1e-3 / n;
    for (int trial = 0; trial < 20; ++trial) {
      const Vec3 y = random_point(rng).cartesian();
      const auto e = frame(y);
      const auto iy = immersion(idx, SpherePoint::from_cartesian(y));
      const auto t1 = immersion_tangent(idx, y, e[0], h);
      const auto t2 = immersion_tangent(idx, y, e[1], h);
      std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
      const double psi = ang(rng);
      const Vec3 dir{std::cos(psi) * e[0][0] + std::sin(psi) * e[1][0],
                     std::cos(psi) * e[0][1] + std::sin(psi) * e[1][1],
                     std::cos(psi) * e[0][2] + std::sin(psi) * e[1][2]};
      auto f = [&](double theta) {
        // Both ends are degenerate pairs: x = y, and for even n the
        // antipode, which has the same image.
        if (theta < 1e-3 || (n % 2 == 0 && theta > kPi - 1e-3)) {
          return std::numeric_limits<double>::infinity();
        }
        const auto ix = immersion(idx, SpherePoint::from_cartesian(along(y, dir, theta)));
        std::vector<double> diff(ix.size());
        for (std::size_t i = 0; i < ix.size(); ++i) diff[i] = ix[i] - iy[i];
        return euclidean_pair_radius(dot(ix, iy), projection_sq(diff, t1, t2));
      };
      const Minimum m = global_minimize(f, 0.0, kPi, 4001, 1e-10, 1e-2);
      // The small-angle limit is never the minimum for these n.
      worst = std::max(worst, std::fabs(m.value - want));
    }
  }
  return max_error(worst, 1e-8);
}

Outcome check_projection_norm() {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int n = 1; n <= 30; ++n) {
    const HarmonicIndex idx{n, 2};
    const double a = endpoint_derivative(idx);
    const double h = 2e-4;
    for (int trial = 0; trial < 4; ++trial) {
      const SpherePoint xs = random_point(rng), ys = random_point(rng);
      const Vec3 x = xs.cartesian(), y = ys.cartesian();
      const auto e = frame(y);
      const auto t1 = immersion_tangent(idx, y, e[0], h);
      const auto t2 = immersion_tangent(idx, y, e[1], h);
      const auto ix = immersion(idx, xs), iy = immersion(idx, ys);
      std::vector<double> diff(ix.size());
      for (std::size_t i = 0; i < ix.size(); ++i) diff[i] = ix[i] - iy[i];
      const double direct = projection_sq(diff, t1, t2);
      const double c = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
      const double p1 = legendre(idx, std::clamp(c, -1.0, 1.0)).derivative;
      const double d1 = x[0] * e[0][0] + x[1] * e[0][1] + x[2] * e[0][2];
      const double d2 = x[0] * e[1][0] + x[1] * e[1][1] + x[2] * e[1][2];
      const double closed = (p1 * d1) * (p1 * d1) / a + (p1 * d2) * (p1 * d2) / a;
      worst = std::max(worst, std::fabs(direct - closed));
    }
  }
  return max_error(worst, 1e-8);
}

// ---- harmonics -------------------------------------------------------------

Outcome check_kernel_identities() {
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (int n = 1; n <= 50; ++n) {
    const HarmonicIndex idx{n, 2};
    for (int trial = 0; trial < 100; ++trial) {
      const SpherePoint x = random_point(rng), y = random_point(rng);
      const auto ix = immersion(idx, x), iy = immersion(idx, y);
      const double p = kernel(idx, x, y);
      worst = std::max(worst, std::fabs(dot(ix, iy) - p));
      double dist = 0.0;
      for (std::size_t i = 0; i < ix.size(); ++i) dist += (ix[i] - iy[i]) * (ix[i] - iy[i]);
      worst = std::max(worst, std::fabs(dist - 2.0 * (1.0 - p)));
      const auto b = basis_eval(idx, x);
      worst = std::max(worst, std::fabs(dot(b, b) - (2.0 * n + 1.0) / (4.0 * kPi)));
      const Vec3 xc = x.cartesian();
      const auto ia = immersion(idx, SpherePoint::from_cartesian({-xc[0], -xc[1], -xc[2]}));
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < ia.size(); ++i) {
        worst = std::max(worst, std::fabs(ia[i] - sign * ix[i]));
      }
    }
  }
  return max_error(worst, 1e-9);
}

Outcome check_orthonormality() {
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const HarmonicIndex idx{n, 2};
    const auto nodes = gauss_legendre(n + 2);
    const int nphi = 2 * n + 3;
    const int k = 2 * n + 1;
    std::vector<double> gram(static_cast<std::size_t>(k) * k, 0.0);
    for (const auto& [x, w] : nodes) {
      for (int j = 0; j < nphi; ++j) {
        const SpherePoint p{std::acos(x), 2.0 * kPi * j / nphi};
        const auto b = basis_eval(idx, p);
        const double weight = w * 2.0 * kPi / nphi;
        for (int r = 0; r < k; ++r) {
          for (int c = 0; c < k; ++c) gram[r * k + c] += weight * b[r] * b[c];
        }
      }
    }
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) {
        worst = std::max(worst, std::fabs(gram[r * k + c] - (r == c ? 1.0 : 0.0)));
      }
    }
  }
  return max_error(worst, 1e-7);
}

Outcome check_pullback_metric() {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int n = 1; n <= 50; ++n) {
    const HarmonicIndex idx2{n, 2};
    const double h = 1e-3 / n;
    const double want2 = std::sqrt(endpoint_derivative(idx2));
    for (int trial = 0; trial < 3; ++trial) {
      const Vec3 p = random_point(rng).cartesian();
      const Vec3 dir = frame(p)[0];
      const auto fp = immersion(idx2, SpherePoint::from_cartesian(along(p, dir, h)));
      const auto fm = immersion(idx2, SpherePoint::from_cartesian(along(p, dir, -h)));
      double s = 0.0;
      for (std::size_t i = 0; i < fp.size(); ++i) s += (fp[i] - fm[i]) * (fp[i] - fm[i]);
      worst = std::max(worst, std::fabs(std::sqrt(s) / (2 * h) / want2 - 1.0));
    }
    // d = 3: only the zonal kernel is available; the chord between points at
    // angle 2h has length sqrt(2 - 2 P(cos 2h)).
    const HarmonicIndex idx3{n, 3};
    const double want3 = std::sqrt(endpoint_derivative(idx3));
    const double chord = std::sqrt(2.0 * (1.0 - zonal(n, 3, std::cos(2.0 * h))));
    worst = std::max(worst, std::fabs(chord / (2 * h) / want3 - 1.0));
  }
  return max_error(worst, 1e-5);
}

// ---- bound -----------------------------------------------------------------

Outcome check_bound_components() {
  const BoundReport b = asymptotic_lower_bound(2);
  double worst = std::fabs(b.term_tail - 1.0 / std::sqrt(2.0)) / 1e-9;
  worst = std::max(worst, std::fabs(small_y_objective(2, 0.0) - std::sqrt(2.0 / 3.0)) / 1e-6);
  for (int i = 0; i <= 2000; ++i) {
    const double y = 0.5 + 49.5 * i / 2000;
    const double j0 = bessel_j(0.0, y), j1 = bessel_j(1.0, y);
    const double lb2_small = (1.0 - j0) / std::sqrt(2.0 - 2.0 * j0 - 2.0 * j1 * j1);
    const double lb2_odd = (1.0 + j0) / std::sqrt(2.0 + 2.0 * j0 - 2.0 * j1 * j1);
    worst = std::max(worst, std::fabs(small_y_objective(2, y) - lb2_small) / 1e-10);
    worst = std::max(worst, std::fabs(odd_objective(2, y) - lb2_odd) / 1e-10);
  }
  const bool positive = b.term_small_y > 0 && b.term_odd > 0 && b.bound > 0;
  return {worst <= 1.0 && positive, "worst error/tolerance " + fmt(worst)};
}

// ---- tube ------------------------------------------------------------------

Outcome check_tube_cap() {
  double worst = 0.0;
  for (int N = 3; N <= 8; ++N) {
    const double omega = ambient_sphere_area(N - 1);
    TubeSpec point;
    point.ambient_n = N;
    point.lk = {1.0};
    for (int m = 0; m <= N - 2; ++m) {
      // Great m-sphere: its tube is swept by normal caps of S^{N-m-2}.
      TubeSpec great;
      great.ambient_n = N;
      for (int j = 0; j <= m; ++j) great.lk.push_back(lk_sphere(m, j, 1.0));
      for (int i = 0; i <= 20; ++i) {
        const double rho = 0.5 * kPi * i / 20;
        if (m == 0) {
          const double cap = omega * integrate([N](double r) { return std::pow(std::sin(r), N - 2); },
                                               0.0, rho)
                                         .value;
          worst = std::max(worst, std::fabs(tube_volume(point, rho) - cap) / std::max(1.0, cap));
        }
        const double closed = ambient_sphere_area(m + 1) * ambient_sphere_area(N - m - 1) *
                              integrate(
                                  [m, N](double r) {
                                    return std::pow(std::cos(r), m) *
                                           std::pow(std::sin(r), N - m - 2);
                                  },
                                  0.0, rho)
                                  .value;
        const double vol = tube_volume(great, rho);
        worst = std::max(worst, std::fabs(vol - closed) / std::max(1.0, closed));
      }
    }
  }
  return max_error(worst, 1e-10);
}

Outcome check_tube_specialization() {
  double worst = 0.0;
  for (int n = 3; n <= 12; ++n) {
    const HarmonicIndex idx{n, 2};
    const double rho2 = spherical_reach(idx).value;
    const double top = max_amplitude(idx);
    const double lo = top * std::cos(rho2);
    for (int i = 0; i < 20; ++i) {
      const double u = lo + (top - lo) * (i + 0.5) / 20;
      const double general = tail_probability(idx, u, rho2).probability;
      const double closed = tail_probability_2d(n, u, rho2).probability;
      worst = std::max(worst, std::fabs(general - closed) / std::fabs(closed));
    }
  }
  return max_error(worst, 1e-8);
}

Outcome check_tube_properties() {
  std::ostringstream os;
  bool ok = true;
  for (int d = 2; d <= 4; ++d) {
    for (int n = 2; n <= 8; ++n) {
      const HarmonicIndex idx{n, d};
      const double rho = spherical_reach(idx).value;
      const double top = max_amplitude(idx);
      const double lo = top * std::cos(rho);
      double prev = 2.0;
      for (int i = 0; i <= 30; ++i) {
        const double u = i == 30 ? top : lo + (top - lo) * i / 30;
        if (u <= 0.0) continue;
        const TailResult t = tail_probability(idx, u, rho);
        if (!(t.probability >= -1e-15 && t.probability <= 1.0 + 1e-12)) {
          ok = false;
          os << "out of [0,1] at n=" << n << " d=" << d << "; ";
        }
        if (t.probability > prev + 1e-14) {
          ok = false;
          os << "increase at n=" << n << " d=" << d << "; ";
        }
        prev = t.probability;
        for (int j = 0; j <= d; ++j) {
          if ((d - j) % 2 != 0 && t.components[j] != 0.0) {
            ok = false;
            os << "odd component nonzero; ";
          }
        }
      }
      const double expect = tail_probability(idx, top, rho).probability;
      if (expect != 0.0) {
        ok = false;
        os << "nonzero at the maximum; ";
      }
    }
  }
  return {ok, ok ? "bounds, monotonicity, parity of components" : os.str()};
}

// ---- Monte Carlo -----------------------------------------------------------

struct McCase {
  HarmonicIndex idx;
  double rho2 = 0.0;
  std::vector<double> u_grid;
  SimulationResult result;
};

McCase run_mc_case(int n, const VerifyOptions& opts) {
  McCase c;
  c.idx = HarmonicIndex{n, 2};
  c.rho2 = spherical_reach(c.idx).value;
  const double top = max_amplitude(c.idx);
  const double lo = top * std::cos(c.rho2);
  for (double f : {0.01, 0.1, 0.2, 0.3}) c.u_grid.push_back(lo + (top - lo) * f);
  SimulationConfig cfg;
  cfg.idx = c.idx;
  cfg.u_grid = c.u_grid;
  cfg.n_samples = opts.mc_samples;
  cfg.seed = opts.seed;
  cfg.threads = opts.threads;
  cfg.rho_d = c.rho2;
  const SphereMesh mesh = icosphere(mesh_level_for(n));
  c.result = simulate(cfg, mesh);
  return c;
}

Outcome check_mc_tail(const McCase& c) {
  double worst = 0.0;
  for (std::size_t j = 0; j < c.u_grid.size(); ++j) {
    if (!c.result.valid[j]) continue;
    const double p = tail_probability(c.idx, c.u_grid[j], c.rho2).probability;
    const double sigma = std::sqrt(p * (1.0 - p) / c.result.tail[j].n_samples);
    worst = std::max(worst, std::fabs(c.result.tail[j].estimate - p) / sigma);
  }
  return {worst <= 3.0, "max deviation " + fmt(worst) + " sigma"};
}

Outcome check_mc_ec(const McCase& c) {
  double worst = 0.0;
  const double kappa = c.idx.n % 2 == 0 ? 0.5 : 1.0;
  for (std::size_t j = 0; j < c.u_grid.size(); ++j) {
    if (!c.result.valid[j]) continue;
    const SimReport& t = c.result.tail[j];
    const SimReport& e = c.result.ec[j];
    const double sigma = std::hypot(t.std_error, kappa * e.std_error);
    if (sigma == 0.0) continue;
    worst = std::max(worst, std::fabs(kappa * e.estimate - t.estimate) / sigma);
  }
  const bool lemma = c.result.lemma_violations == 0;
  return {worst <= 3.0 && lemma, "max deviation " + fmt(worst) + " sigma; lemma violations " +
                                      std::to_string(c.result.lemma_violations) + " of " +
                                      std::to_string(c.result.lemma_checked)};
}

Outcome check_mc_tube(const McCase& c) {
  double worst = 0.0;
  const TubeSpec spec = tube_spec_for(c.idx);
  for (std::size_t j = 0; j < c.u_grid.size(); ++j) {
    if (!c.result.valid[j]) continue;
    const SimReport& r = c.result.tube[j];
    const double p = tube_fraction(spec, r.level);
    const double sigma = std::sqrt(p * (1.0 - p) / r.n_samples);
    worst = std::max(worst, std::fabs(r.estimate - p) / sigma);
  }
  return {worst <= 3.0, "max deviation " + fmt(worst) + " sigma"};
}

Outcome check_mc_determinism(const VerifyOptions& opts) {
  SimulationConfig cfg;
  cfg.idx = HarmonicIndex{3, 2};
  cfg.u_grid = {0.0, 0.7, 0.9};
  cfg.n_samples = 600;
  cfg.seed = opts.seed;
  cfg.rho_d = 0.55;
  const SphereMesh mesh = icosphere(mesh_level_for(3));
  cfg.threads = 1;
  const SimulationResult a = simulate(cfg, mesh);
  cfg.threads = 3;
  const SimulationResult b = simulate(cfg, mesh);
  bool same = a.mean_sup == b.mean_sup && a.lemma_checked == b.lemma_checked;
  for (std::size_t j = 0; j < cfg.u_grid.size(); ++j) {
    same = same && a.tail[j].estimate == b.tail[j].estimate &&
           a.ec[j].estimate == b.ec[j].estimate && a.tube[j].estimate == b.tube[j].estimate;
  }
  return {same, same ? "1 and 3 workers agree bit for bit" : "results depend on worker count"};
}

Outcome check_l2_identity(const VerifyOptions& opts) {
  double worst = 0.0;
  for (int n : {1, 2, 5, 10, 20}) {
    const HarmonicIndex idx{n, 2};
    const auto nodes = gauss_legendre(n + 2);
    const int nphi = 2 * n + 3;
    for (std::uint64_t s = 0; s < 3; ++s) {
      const FieldSample sample = sample_ensemble(static_cast<int>(dimension(idx)), opts.seed, s);
      double total = 0.0;
      for (const auto& [x, w] : nodes) {
        for (int j = 0; j < nphi; ++j) {
          const double f = field_eval(idx, sample.a, SpherePoint{std::acos(x), 2.0 * kPi * j / nphi});
          total += w * 2.0 * kPi / nphi * f * f;
        }
      }
      worst = std::max(worst, std::fabs(total - 1.0));
    }
  }
  return max_error(worst, 1e-6);
}

Outcome check_mesh_stability(const VerifyOptions& opts) {
  const int n = 3;
  const HarmonicIndex idx{n, 2};
  const double rho2 = spherical_reach(idx).value;
  const double top = max_amplitude(idx);
  const double lo = top * std::cos(rho2);
  const std::vector<double> us = {lo + 0.01 * (top - lo), lo + 0.2 * (top - lo)};
  const SphereMesh coarse = icosphere(mesh_level_for(n));
  const SphereMesh fine = icosphere(mesh_level_for(n) + 1);
  const FieldEvaluator ec(idx, coarse), ef(idx, fine);
  std::vector<double> vc(coarse.vertices.size()), vf(fine.vertices.size());
  int pairs = 0, agree = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const FieldSample sample = sample_ensemble(ec.k(), opts.seed + 1, s);
    ec.vertex_values(sample.a, vc);
    ef.vertex_values(sample.a, vf);
    const SupEstimate sc = locate_peaks(ec, sample.a, vc, us.front());
    const SupEstimate sf = locate_peaks(ef, sample.a, vf, us.front());
    for (double u : us) {
      ++pairs;
      const int a = excursion_topology(coarse, vc, sc.peaks, u).euler_char;
      const int b = excursion_topology(fine, vf, sf.peaks, u).euler_char;
      if (a == b) ++agree;
    }
  }
  const double frac = static_cast<double>(agree) / pairs;
  return {frac >= 0.99, "agreement " + fmt(frac) + " over " + std::to_string(pairs) + " pairs"};
}

CheckResult run_check(const std::string& name, const std::function<Outcome()>& fn) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = fn();
    r.passed = o.first;
    r.detail = o.second;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  out.push_back(run_check("specfun.parity", check_parity));
  out.push_back(run_check("specfun.endpoint_derivative", check_endpoint_derivative));
  out.push_back(run_check("specfun.derivative_fd", check_derivative_fd));
  out.push_back(run_check("specfun.bessel_j0_prime", check_bessel_identity));
  out.push_back(run_check("specfun.hilb_sandwich", check_hilb));
  out.push_back(run_check("reach.d1_identity", check_d1_identity));
  out.push_back(run_check("reach.lower_bound_convergence", [&] { return check_theorem1(opts.fast); }));
  out.push_back(run_check("reach.rotation_invariance", check_rotation_invariance));
  out.push_back(run_check("reach.projection_norm", check_projection_norm));
  out.push_back(run_check("harmonics.kernel_identities", check_kernel_identities));
  out.push_back(run_check("harmonics.orthonormality", check_orthonormality));
  out.push_back(run_check("harmonics.pullback_metric", check_pullback_metric));
  out.push_back(run_check("bound.components", check_bound_components));
  out.push_back(run_check("tube.cap", check_tube_cap));
  out.push_back(run_check("tube.specialization_2d", check_tube_specialization));
  out.push_back(run_check("tube.properties", check_tube_properties));
  if (opts.fast) return out;

  out.push_back(run_check("montecarlo.l2_identity", [&] { return check_l2_identity(opts); }));
  out.push_back(run_check("montecarlo.determinism", [&] { return check_mc_determinism(opts); }));
  out.push_back(run_check("montecarlo.mesh_stability", [&] { return check_mesh_stability(opts); }));
  McCase mc;
  const CheckResult setup = run_check("montecarlo.run_n3", [&] {
    mc = run_mc_case(3, opts);
    return Outcome{true, std::to_string(opts.mc_samples) + " samples"};
  });
  out.push_back(setup);
  if (!setup.passed) return out;
  out.push_back(run_check("montecarlo.tail_vs_formula", [&] { return check_mc_tail(mc); }));
  out.push_back(run_check("montecarlo.euler_char_vs_tail", [&] { return check_mc_ec(mc); }));
  out.push_back(run_check("montecarlo.tube_vs_volume", [&] { return check_mc_tube(mc); }));
  return out;
}

}  // namespace sphreach
