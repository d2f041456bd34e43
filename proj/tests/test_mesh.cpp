#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "reebsplit/error.hpp"
#include "reebsplit/gen.hpp"
#include "reebsplit/mesh.hpp"
#include "reebsplit/reeb.hpp"

using namespace reebsplit;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InternalInconsistency;
}

TriangleMesh make(std::vector<Vec3> p, std::vector<Triangle> t) { return TriangleMesh(std::move(p), std::move(t)); }

std::vector<Vec3> points(int n) { return std::vector<Vec3>(static_cast<std::size_t>(n), Vec3{0, 0, 0}); }

}  // namespace

TEST(Validate, OctahedronIsSphere) {
  const auto m = octahedron_height();
  const SurfaceReport r = validate_surface(m.mesh);
  EXPECT_TRUE(r.closed);
  EXPECT_TRUE(r.orientable);
  EXPECT_EQ(r.genus, 0);
  EXPECT_EQ(r.euler, 2);
  EXPECT_EQ(r.boundary_count, 0);
  EXPECT_EQ(r.vertices, 6u);
  EXPECT_EQ(r.edges, 12u);
  EXPECT_EQ(r.triangles, 8u);
}

TEST(Validate, SingleTriangleIsDisk) {
  const SurfaceReport r = validate_surface(make(points(3), {{0, 1, 2}}));
  EXPECT_FALSE(r.closed);
  EXPECT_EQ(r.boundary_count, 1);
  EXPECT_EQ(r.euler, 1);
  EXPECT_EQ(r.genus, 0);
}

TEST(Validate, PillowIsSphere) {
  const SurfaceReport r = validate_surface(make(points(3), {{0, 1, 2}, {0, 2, 1}}));
  EXPECT_TRUE(r.closed);
  EXPECT_EQ(r.euler, 2);
  EXPECT_EQ(r.genus, 0);
}

TEST(Validate, NonManifoldEdge) {
  const auto mesh = make(points(5), {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}});
  EXPECT_EQ(code_of([&] { validate_surface(mesh); }), ErrorCode::NonManifoldEdge);
}

TEST(Validate, DegenerateTriangle) {
  const auto mesh = make(points(3), {{0, 1, 1}});
  EXPECT_EQ(code_of([&] { validate_surface(mesh); }), ErrorCode::DegenerateTriangle);
}

TEST(Validate, PinchedVertex) {
  // Two triangles touching at vertex 0 only.
  const auto mesh = make(points(5), {{0, 1, 2}, {0, 3, 4}});
  EXPECT_EQ(code_of([&] { validate_surface(mesh); }), ErrorCode::PinchedVertex);
}

TEST(Validate, NonOrientableMobius) {
  // Five-triangle Moebius strip.
  const auto mesh = make(points(5), {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {3, 4, 0}, {4, 0, 1}});
  EXPECT_EQ(code_of([&] { validate_surface(mesh); }), ErrorCode::NonOrientable);
}

TEST(Validate, Disconnected) {
  const auto mesh = make(points(6), {{0, 1, 2}, {3, 4, 5}});
  EXPECT_EQ(code_of([&] { validate_surface(mesh); }), ErrorCode::Disconnected);
}

TEST(Validate, IsolatedVertex) {
  const auto mesh = make(points(4), {{0, 1, 2}});
  EXPECT_EQ(code_of([&] { validate_surface(mesh); }), ErrorCode::IsolatedVertex);
}

TEST(Validate, IndexOutOfRange) {
  EXPECT_EQ(code_of([] { make(points(3), {{0, 1, 3}}); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of([] { make({}, {}); }), ErrorCode::IndexOutOfRange);
}

TEST(Validate, TorusHasGenusOne) {
  // 3x3 grid torus.
  std::vector<Triangle> tris;
  auto id = [](int i, int j) { return ((i + 3) % 3) * 3 + (j + 3) % 3; };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  const SurfaceReport r = validate_surface(make(points(9), tris));
  EXPECT_TRUE(r.closed);
  EXPECT_EQ(r.euler, 0);
  EXPECT_EQ(r.genus, 1);
}

TEST(Validate, SubdividedSpheres) {
  for (int levels = 0; levels <= 3; ++levels) {
    const auto m = subdivided_sphere(levels);
    const SurfaceReport r = validate_surface(m.mesh);
    EXPECT_TRUE(r.closed);
    EXPECT_EQ(r.genus, 0);
    EXPECT_EQ(r.triangles, 8u << (2 * levels));
  }
}

TEST(Mesh, EdgeIdsAreLexicographic) {
  const auto m = octahedron_height();
  for (std::size_t e = 1; e < m.mesh.num_edges(); ++e) EXPECT_LT(m.mesh.edge(e - 1), m.mesh.edge(e));
  EXPECT_EQ(m.mesh.find_edge(4, 0), m.mesh.find_edge(0, 4));
  EXPECT_EQ(m.mesh.find_edge(4, 5), -1);
}

TEST(Mesh, VertexLinks) {
  const auto m = octahedron_height();
  const auto link = m.mesh.vertex_link(4);
  EXPECT_TRUE(link.closed);
  EXPECT_EQ(std::set<int>(link.ring.begin(), link.ring.end()), (std::set<int>{0, 1, 2, 3}));
  const auto disk = make(points(3), {{0, 1, 2}});
  EXPECT_FALSE(disk.vertex_link(0).closed);
  EXPECT_EQ(disk.vertex_link(0).ring.size(), 2u);
}

TEST(Mesh, OrientConsistentlyFixesWinding) {
  auto m = octahedron_height();
  std::vector<Triangle> tris(m.mesh.triangles().begin(), m.mesh.triangles().end());
  std::swap(tris[3][0], tris[3][1]);
  std::swap(tris[6][1], tris[6][2]);
  const TriangleMesh oriented = orient_consistently(make({m.mesh.positions().begin(), m.mesh.positions().end()}, tris));
  // Every edge is traversed once in each direction.
  std::set<std::pair<int, int>> directed;
  for (const auto& t : oriented.triangles()) {
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(directed.insert({t[i], t[(i + 1) % 3]}).second);
  }
  for (const auto& [a, b] : directed) EXPECT_TRUE(directed.count({b, a}));
}

TEST(Cut, OctahedronEquator) {
  const auto m = octahedron_height();
  const ReebGraph g = build_reeb(m.mesh, m.field);
  const double c = choose_cut_value(m.field, g, 0);
  const LevelCycle cycle = level_cycle(m.mesh, m.field, g, 0, c);
  EXPECT_EQ(cycle.crossings.size(), 4u);
  const CutResult cut = cut_along_cycle(m.mesh, m.field, cycle);
  for (const MeshWithField* piece : {&cut.below, &cut.above}) {
    const SurfaceReport r = validate_surface(piece->mesh);
    EXPECT_EQ(r.euler, 1);
    EXPECT_EQ(r.boundary_count, 1);
    EXPECT_EQ(r.genus, 0);
    const auto cycles = piece->mesh.boundary_cycles();
    ASSERT_EQ(cycles.size(), 1u);
    EXPECT_EQ(cycles[0].size(), 4u);
    for (int v : cycles[0]) EXPECT_EQ(piece->field[v], c);
  }
  EXPECT_EQ(cut.below.mesh.num_vertices() + cut.above.mesh.num_vertices(), 6u + 2 * 4);
  EXPECT_EQ(cut.below.mesh.num_triangles() + cut.above.mesh.num_triangles(), 8u + 2 * 4);
}

TEST(Cut, ThreeBumpMinSide) {
  const auto m = realize_tree(star_tree(3));
  const ReebGraph g = build_reeb(m.mesh, m.field);
  int min_edge = -1;
  for (const ReebEdge& e : g.edges) {
    if (g.vertices[e.lower].kind == ReebVertexKind::Minimum) min_edge = e.id;
  }
  ASSERT_GE(min_edge, 0);
  const double c = choose_cut_value(m.field, g, min_edge);
  const CutResult cut = cut_along_cycle(m.mesh, m.field, level_cycle(m.mesh, m.field, g, min_edge, c));
  auto critical = [](const MeshWithField& piece) {
    const ReebGraph pg = build_reeb(piece.mesh, piece.field);
    return std::count_if(pg.vertices.begin(), pg.vertices.end(),
                         [](const ReebVertex& v) { return v.kind != ReebVertexKind::Boundary; });
  };
  EXPECT_EQ(critical(cut.below), 1);
  EXPECT_EQ(critical(cut.above), 4);
}

TEST(Cut, ConservationOnCorpus) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto m = realize_tree(random_realizable_tree(8 + static_cast<int>(seed % 8), 1 + seed % 3, seed));
    const ReebGraph g = build_reeb(m.mesh, m.field);
    for (const ReebEdge& e : g.edges) {
      const double c = choose_cut_value(m.field, g, e.id);
      const LevelCycle cycle = level_cycle(m.mesh, m.field, g, e.id, c);
      const CutResult cut = cut_along_cycle(m.mesh, m.field, cycle);
      const std::size_t k = cycle.crossings.size();
      EXPECT_EQ(cut.crossings, k);
      EXPECT_EQ(cut.below.mesh.num_vertices() + cut.above.mesh.num_vertices(), m.mesh.num_vertices() + 2 * k);
      EXPECT_EQ(cut.below.mesh.num_triangles() + cut.above.mesh.num_triangles(), m.mesh.num_triangles() + 2 * k);
      EXPECT_EQ(validate_surface(cut.below.mesh).euler, 1);
      EXPECT_EQ(validate_surface(cut.above.mesh).euler, 1);
    }
  }
}

TEST(Cut, RejectsCycleAtWrongLevel) {
  const auto m = octahedron_height();
  const ReebGraph g = build_reeb(m.mesh, m.field);
  LevelCycle cycle = level_cycle(m.mesh, m.field, g, 0, 0.5);
  cycle.value = 0.25;
  EXPECT_EQ(code_of([&] { cut_along_cycle(m.mesh, m.field, cycle); }), ErrorCode::CycleNotLevel);
}
