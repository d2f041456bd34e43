#include "reebsplit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "reebsplit/error.hpp"

namespace reebsplit {

namespace {

std::string vertex_str(int v) { return "vertex " + std::to_string(v); }

// Does triangle t traverse u -> v in its winding?
bool traverses(const Triangle& t, int u, int v) {
  for (int i = 0; i < 3; ++i) {
    if (t[i] == u && t[(i + 1) % 3] == v) return true;
  }
  return false;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Per-triangle flip flags that make the winding consistent, or nullopt-like
// failure reported through the return flag.
bool consistent_flips(const TriangleMesh& mesh, std::vector<char>& flip) {
  const std::size_t nt = mesh.num_triangles();
  flip.assign(nt, 0);
  std::vector<char> seen(nt, 0);
  for (std::size_t root = 0; root < nt; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<int> queue;
    queue.push(static_cast<int>(root));
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop();
      const Triangle& tri = mesh.triangle(t);
      for (int i = 0; i < 3; ++i) {
        const int u = tri[i], v = tri[(i + 1) % 3];
        const int e = mesh.find_edge(u, v);
        for (int other : mesh.edge_triangles(e)) {
          if (other == t) continue;
          // After flipping, t runs u->v iff flip[t] == 0; the neighbour must
          // run the other way.
          const bool other_same = traverses(mesh.triangle(other), u, v);
          const char want = static_cast<char>(flip[t] ^ (other_same ? 1 : 0));
          if (!seen[other]) {
            seen[other] = 1;
            flip[other] = want;
            queue.push(other);
          } else if (flip[other] != want) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec3> positions, std::vector<Triangle> triangles)
    : positions_(std::move(positions)), triangles_(std::move(triangles)) {
  if (positions_.empty() || triangles_.empty()) {
    throw Error(ErrorCode::IndexOutOfRange, "mesh needs at least one vertex and one triangle");
  }
  const int nv = static_cast<int>(positions_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t]) {
      if (v < 0 || v >= nv) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "triangle " + std::to_string(t) + " references " + vertex_str(v));
      }
    }
  }

  std::vector<std::array<int, 2>> all;
  all.reserve(triangles_.size() * 3);
  for (const Triangle& t : triangles_) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      has_degenerate_ = true;
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      all.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  edges_ = std::move(all);

  edge_triangles_.resize(edges_.size());
  vertex_triangles_.resize(positions_.size());
  neighbors_.resize(positions_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const Triangle& tri = triangles_[t];
    for (int v : tri) {
      auto& vt = vertex_triangles_[v];
      if (vt.empty() || vt.back() != static_cast<int>(t)) vt.push_back(static_cast<int>(t));
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) continue;
    for (int i = 0; i < 3; ++i) {
      edge_triangles_[find_edge(tri[i], tri[(i + 1) % 3])].push_back(static_cast<int>(t));
    }
  }
  for (const auto& [a, b] : edges_) {
    neighbors_[a].push_back(b);
    neighbors_[b].push_back(a);
  }
  for (auto& n : neighbors_) std::sort(n.begin(), n.end());
}

int TriangleMesh::find_edge(int u, int v) const {
  const std::array<int, 2> key{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

bool TriangleMesh::is_boundary_vertex(int v) const {
  for (int u : neighbors_[v]) {
    if (is_boundary_edge(find_edge(u, v))) return true;
  }
  return false;
}

TriangleMesh::Link TriangleMesh::vertex_link(int v) const {
  Link link;
  const auto& tris = vertex_triangles_[v];
  if (tris.empty()) return link;

  auto other_two = [&](int t) {
    const Triangle& tri = triangles_[t];
    int i = 0;
    while (tri[i] != v) ++i;
    return std::array<int, 2>{tri[(i + 1) % 3], tri[(i + 2) % 3]};
  };

  // Start from a boundary edge if there is one, so that a path is walked
  // from one end.
  int start_tri = tris.front();
  int first = other_two(start_tri)[0];
  int second = other_two(start_tri)[1];
  for (int u : neighbors_[v]) {
    const int e = find_edge(u, v);
    if (!is_boundary_edge(e)) continue;
    link.closed = false;
    start_tri = edge_triangles_[e][0];
    const auto pair = other_two(start_tri);
    first = u;
    second = pair[0] == u ? pair[1] : pair[0];
    break;
  }

  std::vector<char> used(triangles_.size(), 0);
  used[start_tri] = 1;
  link.ring = {first, second};
  int current = second;
  for (;;) {
    const int e = find_edge(v, current);
    int next_tri = -1;
    for (int t : edge_triangles_[e]) {
      if (!used[t]) {
        next_tri = t;
        break;
      }
    }
    if (next_tri < 0) break;
    used[next_tri] = 1;
    const auto pair = other_two(next_tri);
    current = pair[0] == current ? pair[1] : pair[0];
    link.ring.push_back(current);
  }
  if (link.closed && link.ring.size() > 1 && link.ring.back() == link.ring.front()) {
    link.ring.pop_back();
  }
  return link;
}

std::vector<std::vector<int>> TriangleMesh::boundary_cycles() const {
  std::vector<std::vector<int>> next(positions_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!is_boundary_edge(static_cast<int>(e))) continue;
    next[edges_[e][0]].push_back(edges_[e][1]);
    next[edges_[e][1]].push_back(edges_[e][0]);
  }
  std::vector<std::vector<int>> cycles;
  std::vector<char> seen(positions_.size(), 0);
  for (std::size_t v = 0; v < positions_.size(); ++v) {
    if (seen[v] || next[v].empty()) continue;
    std::vector<int> cycle;
    int prev = -1;
    int cur = static_cast<int>(v);
    while (!seen[cur]) {
      seen[cur] = 1;
      cycle.push_back(cur);
      int step = -1;
      for (int w : next[cur]) {
        if (w != prev && !seen[w]) {
          step = w;
          break;
        }
      }
      if (step < 0) break;
      prev = cur;
      cur = step;
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

SurfaceReport validate_surface(const TriangleMesh& mesh) {
  if (mesh.has_degenerate_triangle()) {
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const Triangle& tri = mesh.triangle(static_cast<int>(t));
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
        throw Error(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(t) + " repeats a vertex");
      }
    }
  }
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_triangles(static_cast<int>(e)).size() > 2) {
      const auto& [a, b] = mesh.edge(static_cast<int>(e));
      throw Error(ErrorCode::NonManifoldEdge, "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                                  ") is shared by " +
                                                  std::to_string(mesh.edge_triangles(static_cast<int>(e)).size()) +
                                                  " triangles");
    }
  }

  bool closed = true;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const int vi = static_cast<int>(v);
    if (mesh.vertex_triangles(vi).empty()) {
      throw Error(ErrorCode::IsolatedVertex, vertex_str(vi) + " is not used by any triangle");
    }
    // The walk visits every incident triangle exactly when the link is
    // connected.
    const auto link = mesh.vertex_link(vi);
    const std::size_t walked = link.closed ? link.ring.size() : link.ring.size() - 1;
    if (walked != mesh.vertex_triangles(vi).size()) {
      throw Error(ErrorCode::PinchedVertex, "link of " + vertex_str(vi) + " is not a single cycle or path");
    }
    if (!link.closed) closed = false;
  }

  std::vector<char> flip;
  if (!consistent_flips(mesh, flip)) {
    throw Error(ErrorCode::NonOrientable, "no consistent winding exists");
  }

  DisjointSets sets(mesh.num_vertices());
  for (const Triangle& t : mesh.triangles()) {
    sets.unite(t[0], t[1]);
    sets.unite(t[1], t[2]);
  }
  for (std::size_t v = 1; v < mesh.num_vertices(); ++v) {
    if (sets.find(static_cast<int>(v)) != 0) {
      throw Error(ErrorCode::Disconnected, vertex_str(static_cast<int>(v)) + " is not connected to vertex 0");
    }
  }

  SurfaceReport report;
  report.closed = closed;
  report.orientable = true;
  report.boundary_count = static_cast<int>(mesh.boundary_cycles().size());
  report.euler = mesh.euler_characteristic();
  report.genus = (2 - report.euler - report.boundary_count) / 2;
  report.vertices = mesh.num_vertices();
  report.edges = mesh.num_edges();
  report.triangles = mesh.num_triangles();
  return report;
}

TriangleMesh orient_consistently(const TriangleMesh& mesh) {
  std::vector<char> flip;
  if (!consistent_flips(mesh, flip)) {
    throw Error(ErrorCode::NonOrientable, "no consistent winding exists");
  }
  std::vector<Triangle> tris(mesh.triangles().begin(), mesh.triangles().end());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    if (flip[t]) std::swap(tris[t][1], tris[t][2]);
  }
  return TriangleMesh(std::vector<Vec3>(mesh.positions().begin(), mesh.positions().end()), std::move(tris));
}

CutResult cut_along_cycle(const TriangleMesh& mesh, const ScalarField& field, const LevelCycle& cycle) {
  const double c = cycle.value;
  const std::size_t k = cycle.crossings.size();
  if (!cycle.closed || k < 3) {
    throw Error(ErrorCode::CycleNotLevel, "cut needs a closed cycle with at least three crossings");
  }
  const double scale = std::max(1.0, std::max(std::abs(field.min_value()), std::abs(field.max_value())));

  std::vector<int> crossing_of_edge(mesh.num_edges(), -1);
  for (std::size_t i = 0; i < k; ++i) {
    const Crossing& x = cycle.crossings[i];
    if (x.edge < 0 || x.edge >= static_cast<int>(mesh.num_edges())) {
      throw Error(ErrorCode::CycleNotLevel, "crossing " + std::to_string(i) + " names no mesh edge");
    }
    if (crossing_of_edge[x.edge] >= 0) {
      throw Error(ErrorCode::CycleNotLevel, "edge " + std::to_string(x.edge) + " crossed twice");
    }
    crossing_of_edge[x.edge] = static_cast<int>(i);
    const auto& [u, v] = mesh.edge(x.edge);
    const double fu = field[u], fv = field[v];
    const bool straddles = (fu < c && c < fv) || (fv < c && c < fu);
    if (!straddles || !(x.t > 0.0 && x.t < 1.0) || std::abs(fu + x.t * (fv - fu) - c) > 1e-9 * scale) {
      throw Error(ErrorCode::CycleNotLevel, "crossing " + std::to_string(i) + " is not at level " + std::to_string(c));
    }
  }

  // The triangle between consecutive crossings i and i+1.
  std::vector<int> crossed_tri(k, -1);
  std::vector<int> tri_pair(mesh.num_triangles(), -1);
  for (std::size_t i = 0; i < k; ++i) {
    const int ea = cycle.crossings[i].edge;
    const int eb = cycle.crossings[(i + 1) % k].edge;
    for (int t : mesh.edge_triangles(ea)) {
      const auto et = mesh.edge_triangles(eb);
      if (tri_pair[t] < 0 && std::find(et.begin(), et.end(), t) != et.end()) {
        crossed_tri[i] = t;
        tri_pair[t] = static_cast<int>(i);
        break;
      }
    }
    if (crossed_tri[i] < 0) {
      throw Error(ErrorCode::CycleNotLevel, "crossings " + std::to_string(i) + " and " +
                                                std::to_string((i + 1) % k) + " share no triangle");
    }
  }

  const int nv = static_cast<int>(mesh.num_vertices());
  auto below_copy = [&](int i) { return nv + i; };
  auto above_copy = [&](int i) { return nv + static_cast<int>(k) + i; };

  std::vector<Triangle> tris;
  tris.reserve(mesh.num_triangles() + 2 * k);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangle(static_cast<int>(t));
    if (tri_pair[t] < 0) {
      tris.push_back(tri);
      continue;
    }
    const int i = tri_pair[t];
    const int ea = cycle.crossings[i].edge;
    const int eb = cycle.crossings[(i + 1) % k].edge;
    // Rotate so the apex (the vertex shared by both crossed edges) is first.
    int r = 0;
    for (; r < 3; ++r) {
      const int x = tri[r], y = tri[(r + 1) % 3], z = tri[(r + 2) % 3];
      const int exy = mesh.find_edge(x, y), exz = mesh.find_edge(x, z);
      if ((exy == ea && exz == eb) || (exy == eb && exz == ea)) break;
    }
    const int x = tri[r], y = tri[(r + 1) % 3], z = tri[(r + 2) % 3];
    const int p = crossing_of_edge[mesh.find_edge(x, y)];
    const int q = crossing_of_edge[mesh.find_edge(x, z)];
    const bool apex_below = field[x] < c;
    const int p_apex = apex_below ? below_copy(p) : above_copy(p);
    const int q_apex = apex_below ? below_copy(q) : above_copy(q);
    const int p_base = apex_below ? above_copy(p) : below_copy(p);
    const int q_base = apex_below ? above_copy(q) : below_copy(q);
    tris.push_back({x, p_apex, q_apex});
    if (y < z) {
      tris.push_back({p_base, y, q_base});
      tris.push_back({y, z, q_base});
    } else {
      tris.push_back({p_base, y, z});
      tris.push_back({p_base, z, q_base});
    }
  }

  const int total = nv + 2 * static_cast<int>(k);
  DisjointSets sets(static_cast<std::size_t>(total));
  for (const Triangle& t : tris) {
    sets.unite(t[0], t[1]);
    sets.unite(t[1], t[2]);
  }
  const int below_root = sets.find(below_copy(0));
  const int above_root = sets.find(above_copy(0));
  if (below_root == above_root) {
    throw Error(ErrorCode::CutNotSeparating, "cut leaves the surface connected");
  }
  for (int v = 0; v < total; ++v) {
    const int root = sets.find(v);
    if (root != below_root && root != above_root) {
      throw Error(ErrorCode::CutNotSeparating, "cut produces more than two pieces");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (sets.find(below_copy(static_cast<int>(i))) != below_root ||
        sets.find(above_copy(static_cast<int>(i))) != above_root) {
      throw Error(ErrorCode::InternalInconsistency, "cut copies landed on the wrong side");
    }
  }

  auto build_piece = [&](int root) {
    std::vector<int> remap(static_cast<std::size_t>(total), -1);
    std::vector<Vec3> positions;
    std::vector<double> values;
    for (int v = 0; v < total; ++v) {
      if (sets.find(v) != root) continue;
      remap[v] = static_cast<int>(positions.size());
      if (v < nv) {
        positions.push_back(mesh.position(v));
        values.push_back(field[v]);
      } else {
        const Crossing& x = cycle.crossings[(v - nv) % static_cast<int>(k)];
        const auto& [a, b] = mesh.edge(x.edge);
        const Vec3& pa = mesh.position(a);
        const Vec3& pb = mesh.position(b);
        positions.push_back({pa[0] + x.t * (pb[0] - pa[0]), pa[1] + x.t * (pb[1] - pa[1]),
                             pa[2] + x.t * (pb[2] - pa[2])});
        values.push_back(c);
      }
    }
    std::vector<Triangle> piece_tris;
    for (const Triangle& t : tris) {
      if (sets.find(t[0]) != root) continue;
      piece_tris.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
    }
    return MeshWithField{TriangleMesh(std::move(positions), std::move(piece_tris)), ScalarField(std::move(values))};
  };

  CutResult result;
  result.below = build_piece(below_root);
  result.above = build_piece(above_root);
  result.crossings = k;
  return result;
}

}  // namespace reebsplit
