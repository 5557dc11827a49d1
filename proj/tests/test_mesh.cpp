// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "sphreach/mesh.hpp"

using namespace sphreach;

namespace {

double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

double arc(const Vec3& a, const Vec3& b) {
  const double c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const Vec3 x{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  return std::atan2(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), c);
}

}  // namespace

TEST_CASE("icosphere combinatorics") {
  for (int level = 0; level <= 5; ++level) {
    const SphereMesh m = icosphere(level);
    const std::size_t q = std::size_t{1} << (2 * level);
    CHECK(m.vertices.size() == 10 * q + 2);
    CHECK(m.edges.size() == 30 * q);
    CHECK(m.faces.size() == 20 * q);
    CHECK(m.euler_characteristic() == 2);
    CHECK(m.level == level);

    std::set<std::pair<int, int>> seen;
    for (const auto& e : m.edges) {
      CHECK(e[0] < e[1]);
      seen.insert({e[0], e[1]});
    }
    CHECK(seen.size() == m.edges.size());
    for (const auto& f : m.faces) {
      for (int i = 0; i < 3; ++i) {
        const int a = std::min(f[i], f[(i + 1) % 3]), b = std::max(f[i], f[(i + 1) % 3]);
        CHECK(seen.count({a, b}) == 1);
      }
    }
    CHECK(m.neighbor_index.size() == 2 * m.edges.size());
    CHECK(m.face_index.size() == 3 * m.faces.size());
    CHECK(m.owned_face_index.size() == m.faces.size());
    CHECK(m.owned_edge_offsets.back() == static_cast<int>(m.edges.size()));
    for (std::size_t v = 0; v + 1 < m.owned_edge_offsets.size(); ++v) {
      for (int e = m.owned_edge_offsets[v]; e < m.owned_edge_offsets[v + 1]; ++e) {
        CHECK(m.edges[e][0] == static_cast<int>(v));
      }
      for (int i = m.owned_face_offsets[v]; i < m.owned_face_offsets[v + 1]; ++i) {
        const auto& f = m.faces[m.owned_face_index[i]];
        CHECK(*std::min_element(f.begin(), f.end()) == static_cast<int>(v));
      }
    }
  }
  CHECK_THROWS_AS(icosphere(-1), std::invalid_argument);
  CHECK_THROWS_AS(icosphere(10), std::invalid_argument);
}

TEST_CASE("vertices are unit vectors and faces are counter-clockwise") {
  const SphereMesh m = icosphere(3);
  for (const Vec3& v : m.vertices) {
    CHECK(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] == doctest::Approx(1.0).epsilon(1e-15));
  }
  for (const auto& f : m.faces) {
    CHECK(det3(m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]) > 0.0);
  }
}

TEST_CASE("edge lengths and covering radius") {
  const double table[] = {1.107, 0.628, 0.326, 0.1648, 0.08263, 0.04134, 0.02067};
  for (int level = 0; level <= 6; ++level) {
    const SphereMesh m = icosphere(level);
    double longest = 0.0;
    for (const auto& e : m.edges) longest = std::max(longest, arc(m.vertices[e[0]], m.vertices[e[1]]));
    CHECK(m.max_edge == doctest::Approx(longest).epsilon(1e-12));
    CHECK(m.max_edge == doctest::Approx(table[level]).epsilon(2e-3));
  }
  const SphereMesh m = icosphere(2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 3000; ++t) {
    Vec3 p{g(rng), g(rng), g(rng)};
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (double& x : p) x /= r;
    double nearest = 10.0;
    for (const Vec3& v : m.vertices) nearest = std::min(nearest, arc(p, v));
    CHECK(nearest <= m.max_circumradius + 1e-12);
    int hits = 0;
    for (const auto& f : m.faces) {
      if (in_spherical_triangle(p, m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]])) ++hits;
    }
    CHECK(hits >= 1);
  }
}

TEST_CASE("mesh resolution rule") {
  CHECK(mesh_level_for(1) == 3);
  CHECK(mesh_level_for(2) == 4);
  CHECK(mesh_level_for(3) == 4);
  CHECK(mesh_level_for(4) == 5);
  CHECK(mesh_level_for(10) == 6);
  CHECK_THROWS(mesh_level_for(40));
  CHECK_THROWS_AS(require_resolution(icosphere(3), 3), std::invalid_argument);
  CHECK_NOTHROW(require_resolution(icosphere(4), 3));
}
