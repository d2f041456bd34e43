#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "reebsplit/scalar_field.hpp"

namespace reebsplit {

using Vec3 = std::array<double, 3>;
using Triangle = std::array<int, 3>;

// Triangulated surface. Only the combinatorics matter; positions are carried
// along for export.
//
// Edges are undirected, stored as (lo, hi) with lo < hi and numbered in
// lexicographic order, so edge ids depend only on the triangle list.
class TriangleMesh {
 public:
  TriangleMesh() = default;
  // Throws Error(IndexOutOfRange) for empty input or bad indices. Degenerate
  // triangles are accepted here and rejected by validate_surface.
  TriangleMesh(std::vector<Vec3> positions, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return positions_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  const Vec3& position(int v) const { return positions_[v]; }
  std::span<const Vec3> positions() const { return positions_; }
  const Triangle& triangle(int t) const { return triangles_[t]; }
  std::span<const Triangle> triangles() const { return triangles_; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }

  // -1 when u and v are not adjacent.
  int find_edge(int u, int v) const;
  std::span<const int> edge_triangles(int e) const { return edge_triangles_[e]; }
  std::span<const int> vertex_triangles(int v) const { return vertex_triangles_[v]; }
  // Sorted, without duplicates.
  std::span<const int> neighbors(int v) const { return neighbors_[v]; }

  bool is_boundary_edge(int e) const { return edge_triangles_[e].size() == 1; }
  bool is_boundary_vertex(int v) const;
  bool has_degenerate_triangle() const { return has_degenerate_; }

  // Link of a vertex as an ordered list of neighbours: a cycle for interior
  // vertices, a path (first and last on the boundary) for boundary vertices.
  // Only meaningful once validate_surface has accepted the mesh.
  struct Link {
    std::vector<int> ring;
    bool closed = true;
  };
  Link vertex_link(int v) const;

  // Boundary components as ordered vertex cycles, sorted by smallest vertex.
  std::vector<std::vector<int>> boundary_cycles() const;

  int euler_characteristic() const {
    return static_cast<int>(num_vertices()) - static_cast<int>(num_edges()) +
           static_cast<int>(num_triangles());
  }

 private:
  std::vector<Vec3> positions_;
  std::vector<Triangle> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::vector<int>> edge_triangles_;
  std::vector<std::vector<int>> vertex_triangles_;
  std::vector<std::vector<int>> neighbors_;
  bool has_degenerate_ = false;
};

struct SurfaceReport {
  bool closed = false;
  bool orientable = false;
  int genus = 0;
  int boundary_count = 0;
  int euler = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t triangles = 0;
};

// Checks every manifold invariant. Throws Error with DegenerateTriangle,
// NonManifoldEdge, PinchedVertex, IsolatedVertex, NonOrientable or
// Disconnected.
SurfaceReport validate_surface(const TriangleMesh& mesh);

// Same triangles, re-wound so that every interior edge is traversed in
// opposite directions by its two triangles. The winding of the lowest
// triangle of each component is kept. Throws NonOrientable.
TriangleMesh orient_consistently(const TriangleMesh& mesh);

struct MeshWithField {
  TriangleMesh mesh;
  ScalarField field;
};

// A crossing of the level set with mesh edge `edge` at parameter t, measured
// from the lower-indexed endpoint.
struct Crossing {
  int edge = -1;
  double t = 0.0;
};

// Closed curve of a level set, stored as the ordered edge crossings.
// Consecutive crossings share a triangle.
struct LevelCycle {
  double value = 0.0;
  std::vector<Crossing> crossings;
  bool closed = true;
};

struct CutResult {
  MeshWithField below;  // contains the side where f < value
  MeshWithField above;
  std::size_t crossings = 0;
};

// Splits a closed sphere along a level cycle into two disks. Each crossing
// becomes one new boundary vertex in each disk, carrying the field value of
// the cycle exactly. Throws CycleNotLevel or CutNotSeparating.
CutResult cut_along_cycle(const TriangleMesh& mesh, const ScalarField& field,
                          const LevelCycle& cycle);

}  // namespace reebsplit
