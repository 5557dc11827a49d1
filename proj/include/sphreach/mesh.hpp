// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_MESH_HPP
#define SPHREACH_MESH_HPP

#include <array>
#include <vector>

#include "sphreach/harmonics.hpp"

namespace sphreach {

/// Geodesic icosahedral triangulation of S^2.
struct SphereMesh {
  int level = 0;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 2>> edges;  ///< (i, j) with i < j
  std::vector<std::array<int, 3>> faces;  ///< counter-clockwise seen from outside
  double max_edge = 0.0;                  ///< longest edge, radians
  double max_circumradius = 0.0;          ///< every point lies this close to a vertex

  /// Vertex to incident faces, CSR layout.
  std::vector<int> face_offsets;
  std::vector<int> face_index;
  /// Vertex to neighbouring vertices, CSR layout.
  std::vector<int> neighbor_offsets;
  std::vector<int> neighbor_index;
  /// Edges and faces owned by their lowest-numbered vertex, CSR layout, so a
  /// cell can only be present in a subcomplex if its owner is.
  std::vector<int> owned_edge_offsets;  ///< into edges (sorted by owner)
  std::vector<int> owned_face_offsets;
  std::vector<int> owned_face_index;

  int euler_characteristic() const;
};

/// Level-L subdivision of the icosahedron: 10 * 4^L + 2 vertices.
SphereMesh icosphere(int level);

/// Smallest level whose longest edge is at most 1/(4n) radians.
int mesh_level_for(int n);

/// Throws std::invalid_argument if the mesh edges exceed 1/(4n).
void require_resolution(const SphereMesh& mesh, int n);

/// Whether p lies in the spherical triangle (a, b, c), boundary included.
bool in_spherical_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace sphreach

#endif  // SPHREACH_MESH_HPP
