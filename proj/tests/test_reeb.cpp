#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "reebsplit/error.hpp"
#include "reebsplit/field.hpp"
#include "reebsplit/gen.hpp"
#include "reebsplit/reeb.hpp"

using namespace reebsplit;

namespace {

void expect_tree_invariants(const ReebGraph& g, const MeshWithField& m) {
  EXPECT_EQ(g.edges.size() + 1, g.vertices.size());
  for (const ReebEdge& e : g.edges) EXPECT_LT(g.vertices[e.lower].label, g.vertices[e.upper].label);
  const FieldClassReport cls = classify_field(m.mesh, m.field);
  int leaves = 0;
  for (const ReebVertex& v : g.vertices) {
    const int degree = static_cast<int>(g.incident_edges(v.id).size());
    if (degree == 1) {
      ++leaves;
    } else {
      EXPECT_GE(degree, 3);
      EXPECT_EQ(v.kind, ReebVertexKind::Saddle);
      EXPECT_EQ(v.multiplicity, degree - 2);
    }
    for (int w : v.preimage) EXPECT_EQ(m.field[w], v.label);
  }
  EXPECT_EQ(leaves, cls.minima + cls.maxima + cls.boundary_components);
  // Preimages partition the mesh vertices.
  ASSERT_EQ(g.image.size(), m.mesh.num_vertices());
  std::vector<int> count(m.mesh.num_vertices(), 0);
  for (const ReebVertex& v : g.vertices) {
    for (int w : v.preimage) {
      ++count[w];
      EXPECT_EQ(g.image[w], v.id);
    }
  }
  for (const ReebEdge& e : g.edges) {
    for (int w : e.vertex_preimage) {
      ++count[w];
      EXPECT_EQ(g.image[w], -e.id - 1);
    }
  }
  for (int c : count) EXPECT_EQ(c, 1);
}

MeshWithField relabel(const MeshWithField& m, std::uint64_t seed) {
  const int n = static_cast<int>(m.mesh.num_vertices());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec3> positions(n);
  std::vector<double> values(n);
  for (int v = 0; v < n; ++v) {
    positions[perm[v]] = m.mesh.position(v);
    values[perm[v]] = m.field[v];
  }
  std::vector<Triangle> tris;
  for (const Triangle& t : m.mesh.triangles()) tris.push_back({perm[t[0]], perm[t[1]], perm[t[2]]});
  std::shuffle(tris.begin(), tris.end(), rng);
  return {TriangleMesh(std::move(positions), std::move(tris)), ScalarField(std::move(values))};
}

}  // namespace

TEST(BuildReeb, OctahedronIsPath) {
  const auto m = octahedron_height();
  const ReebGraph g = build_reeb(m.mesh, m.field);
  ASSERT_EQ(g.vertices.size(), 2u);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.vertices[0].kind, ReebVertexKind::Minimum);
  EXPECT_EQ(g.vertices[1].kind, ReebVertexKind::Maximum);
  EXPECT_EQ(g.vertices[0].preimage, std::vector<int>{5});
  EXPECT_EQ(g.vertices[1].preimage, std::vector<int>{4});
  EXPECT_EQ(g.edges[0].vertex_preimage.size(), 4u);
  expect_tree_invariants(g, m);
}

TEST(BuildReeb, ThreeBumpIsStar) {
  const auto m = realize_tree(star_tree(3));
  const ReebGraph g = build_reeb(m.mesh, m.field);
  ASSERT_EQ(g.vertices.size(), 5u);
  int centre = -1;
  for (const ReebVertex& v : g.vertices) {
    if (v.kind == ReebVertexKind::Saddle) centre = v.id;
  }
  ASSERT_GE(centre, 0);
  EXPECT_EQ(g.vertices[centre].multiplicity, 2);
  int down = 0;
  std::set<double> max_labels;
  for (int e : g.incident_edges(centre)) {
    const ReebEdge& edge = g.edges[e];
    if (edge.upper == centre) {
      ++down;
      EXPECT_EQ(g.vertices[edge.lower].kind, ReebVertexKind::Minimum);
    } else {
      EXPECT_EQ(g.vertices[edge.upper].kind, ReebVertexKind::Maximum);
      max_labels.insert(g.vertices[edge.upper].label);
    }
  }
  EXPECT_EQ(down, 1);
  EXPECT_EQ(max_labels.size(), 1u);
  expect_tree_invariants(g, m);
}

TEST(BuildReeb, CutDiskHasBoundaryLeaf) {
  const auto m = realize_tree(star_tree(3));
  const ReebGraph g = build_reeb(m.mesh, m.field);
  int min_edge = -1;
  for (const ReebEdge& e : g.edges) {
    if (g.vertices[e.lower].kind == ReebVertexKind::Minimum) min_edge = e.id;
  }
  const double c = choose_cut_value(m.field, g, min_edge);
  const CutResult cut = cut_along_cycle(m.mesh, m.field, level_cycle(m.mesh, m.field, g, min_edge, c));
  const ReebGraph b = build_reeb(cut.above.mesh, cut.above.field);
  ASSERT_EQ(b.vertices.size(), 5u);
  int boundary = 0;
  for (const ReebVertex& v : b.vertices) {
    if (v.kind == ReebVertexKind::Boundary) {
      ++boundary;
      EXPECT_EQ(v.label, c);
    }
    EXPECT_NE(v.kind, ReebVertexKind::Minimum);
  }
  EXPECT_EQ(boundary, 1);
  expect_tree_invariants(b, cut.above);
}

TEST(BuildReeb, InvariantsOnRandomFields) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto m = subdivided_sphere(1 + static_cast<int>(seed % 2));
    m.field = random_field(m.mesh, seed);
    expect_tree_invariants(build_reeb(m.mesh, m.field), m);
  }
}

TEST(BuildReeb, RoundTripThroughGenerator) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const RealizableTree t = random_realizable_tree(2 + static_cast<int>(seed % 15), 1 + seed % 4, seed);
    const auto m = realize_tree(t);
    const ReebGraph g = build_reeb(m.mesh, m.field);
    EXPECT_TRUE(label_isomorphic(reeb_tree(g), t.tree())) << "seed " << seed;
    expect_tree_invariants(g, m);
  }
}

TEST(BuildReeb, InvariantUnderVertexRelabeling) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MeshWithField m = seed % 2 ? realize_tree(random_realizable_tree(10, 2, seed)) : subdivided_sphere(1);
    if (seed % 2 == 0) m.field = random_field(m.mesh, seed);
    const LabeledTree a = reeb_tree(build_reeb(m.mesh, m.field));
    const MeshWithField shuffled = relabel(m, seed + 99);
    const LabeledTree b = reeb_tree(build_reeb(shuffled.mesh, shuffled.field));
    EXPECT_TRUE(label_isomorphic(a, b)) << "seed " << seed;
  }
}

TEST(BuildReeb, TiedExtremaOnDistinctComponents) {
  // Double fork: two pairs of maxima at exactly equal values.
  const auto m = realize_tree(double_fork_tree());
  const ReebGraph g = build_reeb(m.mesh, m.field);
  EXPECT_TRUE(label_isomorphic(reeb_tree(g), double_fork_tree().tree()));
}

TEST(BuildReeb, RejectsTorus) {
  std::vector<Triangle> tris;
  auto id = [](int i, int j) { return ((i + 4) % 4) * 4 + (j + 4) % 4; };
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  std::vector<double> values(16);
  for (int v = 0; v < 16; ++v) values[v] = v;
  const TriangleMesh torus(std::vector<Vec3>(16, Vec3{0, 0, 0}), tris);
  try {
    build_reeb(torus, ScalarField(values));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GenusNotZero);
  }
}

TEST(BuildReeb, RejectsInvalidField) {
  const auto m = octahedron_height();
  try {
    build_reeb(m.mesh, ScalarField(std::vector<double>(6, 0.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidFieldClass);
  }
}

TEST(LevelCycle, OctahedronSquare) {
  const auto m = octahedron_height();
  const ReebGraph g = build_reeb(m.mesh, m.field);
  const double c = choose_cut_value(m.field, g, 0);
  // Largest gap is between the equator and the top.
  EXPECT_GT(c, 0.4);
  EXPECT_LT(c, 0.6);
  const LevelCycle cycle = level_cycle(m.mesh, m.field, g, 0, c);
  EXPECT_TRUE(cycle.closed);
  EXPECT_EQ(cycle.crossings.size(), 4u);
  std::set<int> edges;
  for (const Crossing& x : cycle.crossings) {
    EXPECT_GT(x.t, 0.0);
    EXPECT_LT(x.t, 1.0);
    edges.insert(x.edge);
    const auto& [u, v] = m.mesh.edge(x.edge);
    EXPECT_LT(u, v);
    EXPECT_NEAR(m.field[u] + x.t * (m.field[v] - m.field[u]), c, 1e-12);
  }
  EXPECT_EQ(edges.size(), 4u);
}

TEST(LevelCycle, ConsecutiveCrossingsShareATriangle) {
  const auto m = realize_tree(double_fork_tree());
  const ReebGraph g = build_reeb(m.mesh, m.field);
  for (const ReebEdge& e : g.edges) {
    const LevelCycle cycle = level_cycle(m.mesh, m.field, g, e.id, choose_cut_value(m.field, g, e.id));
    const std::size_t k = cycle.crossings.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto t1 = m.mesh.edge_triangles(cycle.crossings[i].edge);
      const auto t2 = m.mesh.edge_triangles(cycle.crossings[(i + 1) % k].edge);
      bool shared = false;
      for (int a : t1) shared = shared || std::find(t2.begin(), t2.end(), a) != t2.end();
      EXPECT_TRUE(shared);
      EXPECT_GT(cycle.crossings[i].t, 0.0);
      EXPECT_LT(cycle.crossings[i].t, 1.0);
    }
  }
}

TEST(LevelCycle, Errors) {
  const auto m = octahedron_height();
  const ReebGraph g = build_reeb(m.mesh, m.field);
  auto code = [&](int edge, double c) {
    try {
      level_cycle(m.mesh, m.field, g, edge, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InternalInconsistency;
  };
  EXPECT_EQ(code(3, 0.5), ErrorCode::EdgeNotFound);
  EXPECT_EQ(code(0, m.field[0]), ErrorCode::ValueCollision);
  EXPECT_EQ(code(0, 5.0), ErrorCode::ValueCollision);
}

TEST(ExportDot, PathAndStar) {
  const auto path = octahedron_height();
  const std::string a = export_dot(build_reeb(path.mesh, path.field));
  EXPECT_EQ(a.rfind("digraph reeb {", 0), 0u);
  auto count = [](const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (std::size_t p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count(a, "[label=\""), 3u);  // 2 nodes + 1 edge
  EXPECT_EQ(count(a, "->"), 1u);
  const auto star = realize_tree(star_tree(3));
  const ReebGraph g = build_reeb(star.mesh, star.field);
  const std::string b = export_dot(g);
  EXPECT_EQ(count(b, "->"), 4u);
  EXPECT_EQ(count(b, "[label=\""), 9u);
  EXPECT_EQ(b, export_dot(build_reeb(star.mesh, star.field)));
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(std::stod(format_number(0.1 + 0.2)), 0.1 + 0.2);
}
