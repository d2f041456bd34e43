#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "reebsplit/field.hpp"
#include "reebsplit/mesh.hpp"
#include "reebsplit/scalar_field.hpp"
#include "reebsplit/treeaut.hpp"

namespace reebsplit {

enum class ReebVertexKind { Minimum, Maximum, Saddle, Boundary };

std::string_view to_string(ReebVertexKind kind);

struct ReebVertex {
  int id = -1;
  double label = 0.0;
  ReebVertexKind kind = ReebVertexKind::Minimum;
  int multiplicity = 0;      // saddles: degree - 2
  std::vector<int> preimage;  // mesh vertices of the level component, sorted
};

struct ReebEdge {
  int id = -1;
  int lower = -1;
  int upper = -1;
  // Regular mesh vertices swept by the edge, in ascending sweep order.
  std::vector<int> vertex_preimage;
  // Triangles containing a point that maps into the open edge, sorted.
  std::vector<int> triangles;
  // Representative mesh vertex of each level component along the edge,
  // endpoints included, in ascending order.
  std::vector<int> chain;
};

// Kronrod-Reeb graph of a PL field on a genus-0 surface. Vertices are
// numbered in sweep order, edges by (lower, upper).
class ReebGraph {
 public:
  std::vector<ReebVertex> vertices;
  std::vector<ReebEdge> edges;
  // image[v] >= 0: mesh vertex v lies in Reeb vertex image[v];
  // image[v] < 0: it lies inside Reeb edge (-image[v] - 1).
  std::vector<int> image;

  std::vector<int> incident_edges(int v) const;
  int find_edge(int a, int b) const;
};

// Contour tree by join/split sweeps over the flat-contracted vertex graph,
// with regular (one down, one up) nodes suppressed. Throws GenusNotZero,
// InvalidFieldClass, or the validate_surface errors.
ReebGraph build_reeb(const TriangleMesh& mesh, const ScalarField& field);

// The Reeb graph as a labeled tree, vertex and edge ids preserved.
LabeledTree reeb_tree(const ReebGraph& graph);

// Midpoint of the largest gap between consecutive distinct field values
// inside the open label interval of an edge (first gap on ties).
double choose_cut_value(const ScalarField& field, const ReebGraph& graph, int edge);

// The level-c cycle over the point of `edge` at height c. Throws EdgeNotFound
// or ValueCollision (c is a vertex value or outside the edge).
LevelCycle level_cycle(const TriangleMesh& mesh, const ScalarField& field, const ReebGraph& graph, int edge,
                       double c);

// Deterministic DOT text; edges point from lower to upper vertex.
std::string export_dot(const ReebGraph& graph);

// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace reebsplit
