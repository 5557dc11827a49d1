// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphreach/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sphreach {

namespace {

Vec3 normalized(const Vec3& v) {
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / r, v[1] / r, v[2] / r};
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

void build_csr(int count, const std::vector<std::pair<int, int>>& pairs, std::vector<int>& offsets,
               std::vector<int>& index) {
  offsets.assign(count + 1, 0);
  for (const auto& p : pairs) ++offsets[p.first + 1];
  for (int i = 0; i < count; ++i) offsets[i + 1] += offsets[i];
  index.assign(pairs.size(), 0);
  std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& p : pairs) index[cursor[p.first]++] = p.second;
}

}  // namespace

int SphereMesh::euler_characteristic() const {
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(faces.size());
}

SphereMesh icosphere(int level) {
  if (level < 0 || level > 9) throw std::invalid_argument("icosphere: level must be in [0, 9]");
  const double t = 0.5 * (1.0 + std::sqrt(5.0));
  SphereMesh m;
  m.level = level;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : m.vertices) v = normalized(v);
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::unordered_map<std::uint64_t, int> cache;
    auto midpoint = [&](int a, int b) {
      const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                                static_cast<std::uint32_t>(std::max(a, b));
      const auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      const Vec3& p = m.vertices[a];
      const Vec3& q = m.vertices[b];
      m.vertices.push_back(normalized({p[0] + q[0], p[1] + q[1], p[2] + q[2]}));
      const int id = static_cast<int>(m.vertices.size()) - 1;
      cache.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int ab = midpoint(f[0], f[1]);
      const int bc = midpoint(f[1], f[2]);
      const int ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }

  std::vector<std::pair<int, int>> vf, vv;
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    const auto& f = m.faces[i];
    for (int c = 0; c < 3; ++c) {
      vf.emplace_back(f[c], static_cast<int>(i));
      const int a = f[c];
      const int b = f[(c + 1) % 3];
      if (a < b) m.edges.push_back({a, b});
      vv.emplace_back(a, b);
      vv.emplace_back(b, a);
    }
    const Vec3& a = m.vertices[f[0]];
    const Vec3& b = m.vertices[f[1]];
    const Vec3& c = m.vertices[f[2]];
    const Vec3 center = normalized(cross(sub(b, a), sub(c, a)));
    m.max_circumradius = std::max(m.max_circumradius, angle_between(center, a));
  }
  // Every edge appears once with a < b in a closed oriented surface.
  std::sort(m.edges.begin(), m.edges.end());
  for (const auto& e : m.edges) {
    m.max_edge = std::max(m.max_edge, angle_between(m.vertices[e[0]], m.vertices[e[1]]));
  }
  std::sort(vv.begin(), vv.end());
  vv.erase(std::unique(vv.begin(), vv.end()), vv.end());
  const int nv = static_cast<int>(m.vertices.size());
  build_csr(nv, vf, m.face_offsets, m.face_index);
  build_csr(nv, vv, m.neighbor_offsets, m.neighbor_index);
  m.owned_edge_offsets.assign(nv + 1, 0);
  for (const auto& e : m.edges) ++m.owned_edge_offsets[e[0] + 1];
  for (int i = 0; i < nv; ++i) m.owned_edge_offsets[i + 1] += m.owned_edge_offsets[i];
  std::vector<std::pair<int, int>> owned;
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    const auto& f = m.faces[i];
    owned.emplace_back(std::min({f[0], f[1], f[2]}), static_cast<int>(i));
  }
  build_csr(nv, owned, m.owned_face_offsets, m.owned_face_index);
  return m;
}

int mesh_level_for(int n) {
  if (n < 1) throw std::invalid_argument("mesh_level_for: n must be >= 1");
  // Longest edge of the level-L icosphere as built by icosphere(L).
  static const double kMaxEdge[] = {1.1071487177940904,   0.628318530717959,
                                    0.32636622180660874,  0.16483370321401764,
                                    0.08262746962887337,  0.04134019969865334,
                                    0.020673412288513455};
  for (int level = 0; level < 7; ++level) {
    if (kMaxEdge[level] <= 1.0 / (4.0 * n)) return level;
  }
  throw std::invalid_argument("mesh_level_for: n too large for meshes up to level 6");
}

void require_resolution(const SphereMesh& mesh, int n) {
  if (mesh.max_edge > 1.0 / (4.0 * n)) {
    throw std::invalid_argument("mesh level " + std::to_string(mesh.level) +
                                " too coarse for n = " + std::to_string(n) + " (longest edge " +
                                std::to_string(mesh.max_edge) + " > 1/(4n))");
  }
}

bool in_spherical_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const double tol = -1e-14;
  return dot(cross(a, b), p) >= tol && dot(cross(b, c), p) >= tol &&
         dot(cross(c, a), p) >= tol;
}

}  // namespace sphreach
