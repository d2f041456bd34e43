#include "reebsplit/reeb.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <numeric>
#include <queue>
#include <sstream>

#include "reebsplit/error.hpp"

namespace reebsplit {

std::string_view to_string(ReebVertexKind kind) {
  switch (kind) {
    case ReebVertexKind::Minimum: return "minimum";
    case ReebVertexKind::Maximum: return "maximum";
    case ReebVertexKind::Saddle: return "saddle";
    case ReebVertexKind::Boundary: return "boundary";
  }
  return "?";
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Returns the surviving root.
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

 private:
  std::vector<int> parent_;
};

void erase_value(std::vector<int>& v, int x) { v.erase(std::find(v.begin(), v.end(), x)); }

// Augmented contour tree over ranks 0..n-1 (rank order = sweep order).
// `neighbors[r]` lists adjacent ranks. Returns arcs (lower rank, upper rank).
std::vector<std::pair<int, int>> contour_tree(const std::vector<std::vector<int>>& neighbors) {
  const int n = static_cast<int>(neighbors.size());
  std::vector<std::vector<int>> jt_down(n), st_up(n);
  std::vector<int> jt_up(n, -1), st_down(n, -1);

  {
    // Join tree: components of sublevel sets merging on the way up.
    UnionFind uf(n);
    std::vector<int> head(n);
    for (int r = 0; r < n; ++r) {
      head[r] = r;
      for (int nb : neighbors[r]) {
        if (nb >= r) continue;
        const int root = uf.find(nb);
        if (root == uf.find(r)) continue;
        const int h = head[root];
        jt_down[r].push_back(h);
        jt_up[h] = r;
        head[uf.unite(root, r)] = r;
      }
      head[uf.find(r)] = r;
    }
  }
  {
    UnionFind uf(n);
    std::vector<int> head(n);
    for (int r = n - 1; r >= 0; --r) {
      head[r] = r;
      for (int nb : neighbors[r]) {
        if (nb <= r) continue;
        const int root = uf.find(nb);
        if (root == uf.find(r)) continue;
        const int h = head[root];
        st_up[r].push_back(h);
        st_down[h] = r;
        head[uf.unite(root, r)] = r;
      }
      head[uf.find(r)] = r;
    }
  }

  auto is_upper_leaf = [&](int x) { return st_up[x].empty() && jt_down[x].size() == 1; };
  auto is_lower_leaf = [&](int x) { return jt_down[x].empty() && st_up[x].size() == 1; };

  std::vector<std::pair<int, int>> arcs;
  std::vector<char> removed(n, 0);
  std::deque<int> queue;
  for (int x = 0; x < n; ++x) {
    if (is_upper_leaf(x) || is_lower_leaf(x)) queue.push_back(x);
  }
  int remaining = n;
  while (remaining > 1 && !queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    if (removed[x]) continue;
    if (is_upper_leaf(x)) {
      const int y = st_down[x];
      arcs.emplace_back(y, x);
      erase_value(st_up[y], x);
      const int z = jt_down[x][0];
      const int w = jt_up[x];
      jt_up[z] = w;
      if (w >= 0) {
        erase_value(jt_down[w], x);
        jt_down[w].push_back(z);
      }
      removed[x] = 1;
      --remaining;
      for (int c : {y, z, w}) {
        if (c >= 0 && !removed[c] && (is_upper_leaf(c) || is_lower_leaf(c))) queue.push_back(c);
      }
    } else if (is_lower_leaf(x)) {
      const int y = jt_up[x];
      arcs.emplace_back(x, y);
      erase_value(jt_down[y], x);
      const int z = st_up[x][0];
      const int w = st_down[x];
      st_down[z] = w;
      if (w >= 0) {
        erase_value(st_up[w], x);
        st_up[w].push_back(z);
      }
      removed[x] = 1;
      --remaining;
      for (int c : {y, z, w}) {
        if (c >= 0 && !removed[c] && (is_upper_leaf(c) || is_lower_leaf(c))) queue.push_back(c);
      }
    }
  }
  if (remaining != 1) {
    throw Error(ErrorCode::GenusNotZero, "join and split trees do not merge into a tree");
  }
  return arcs;
}

// Reeb-tree path between two tree vertices as a list of edge ids.
struct RootedTree {
  std::vector<int> parent;
  std::vector<int> parent_edge;
  std::vector<int> depth;

  void path_edges(int a, int b, std::vector<int>& out) const {
    while (a != b) {
      if (depth[a] >= depth[b]) {
        out.push_back(parent_edge[a]);
        a = parent[a];
      } else {
        out.push_back(parent_edge[b]);
        b = parent[b];
      }
    }
  }
};

}  // namespace

std::vector<int> ReebGraph::incident_edges(int v) const {
  std::vector<int> out;
  for (const ReebEdge& e : edges) {
    if (e.lower == v || e.upper == v) out.push_back(e.id);
  }
  return out;
}

int ReebGraph::find_edge(int a, int b) const {
  for (const ReebEdge& e : edges) {
    if ((e.lower == a && e.upper == b) || (e.lower == b && e.upper == a)) return e.id;
  }
  return -1;
}

ReebGraph build_reeb(const TriangleMesh& mesh, const ScalarField& field) {
  const SurfaceReport surface = validate_surface(mesh);
  if (surface.genus != 0) {
    throw Error(ErrorCode::GenusNotZero, "surface has genus " + std::to_string(surface.genus));
  }
  const FieldClassReport cls = classify_field(mesh, field);
  if (!cls.valid()) {
    throw Error(ErrorCode::InvalidFieldClass, std::string(to_string(*cls.problem)) + ": " + cls.detail);
  }
  const FlatContraction& zones = cls.contraction;
  const int nz = static_cast<int>(zones.size());

  std::vector<int> order(nz);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return zones.below(a, b); });
  std::vector<int> rank(nz);
  for (int r = 0; r < nz; ++r) rank[order[r]] = r;

  std::vector<std::vector<int>> rank_neighbors(nz);
  for (int z = 0; z < nz; ++z) {
    for (int w : zones.zone_neighbors[z]) rank_neighbors[rank[z]].push_back(rank[w]);
  }
  const auto arcs = contour_tree(rank_neighbors);

  // Arcs between equal values join zones of one level component.
  UnionFind nodes(nz);
  for (const auto& [lo, hi] : arcs) {
    if (zones.zone_value[order[lo]] == zones.zone_value[order[hi]]) nodes.unite(lo, hi);
  }
  // Node adjacency in rank space, keyed by the lowest rank of each node.
  std::vector<std::vector<int>> down(nz), up(nz);
  for (const auto& [lo, hi] : arcs) {
    const int a = nodes.find(lo), b = nodes.find(hi);
    if (a == b) continue;
    up[a].push_back(b);
    down[b].push_back(a);
  }
  std::vector<std::vector<int>> node_zones(nz);
  for (int r = 0; r < nz; ++r) node_zones[nodes.find(r)].push_back(order[r]);

  auto is_boundary_node = [&](int node) {
    for (int z : node_zones[node]) {
      if (cls.zone_criticality[z].kind == CriticalKind::BoundaryRegular) return true;
    }
    return false;
  };

  std::vector<char> kept(nz, 0);
  for (int r = 0; r < nz; ++r) {
    if (nodes.find(r) != r) continue;
    const std::size_t degree = down[r].size() + up[r].size();
    if (node_zones[r].size() == 1) {
      // Local link classification and contour-tree degree must agree.
      const Criticality& crit = cls.zone_criticality[node_zones[r][0]];
      std::size_t expected = 2;
      switch (crit.kind) {
        case CriticalKind::Minimum:
        case CriticalKind::Maximum:
        case CriticalKind::BoundaryRegular: expected = 1; break;
        case CriticalKind::Saddle: expected = static_cast<std::size_t>(crit.multiplicity) + 2; break;
        case CriticalKind::Regular: expected = 2; break;
      }
      if (degree != expected) {
        throw Error(ErrorCode::InternalInconsistency,
                    "contour tree degree " + std::to_string(degree) + " at vertex " +
                        std::to_string(node_zones[r][0]) + " disagrees with its link (" +
                        std::string(to_string(crit.kind)) + ")");
      }
    }
    kept[r] = !(down[r].size() == 1 && up[r].size() == 1 && !is_boundary_node(r));
  }

  ReebGraph graph;
  std::vector<int> vertex_of_node(nz, -1);
  for (int r = 0; r < nz; ++r) {
    if (!kept[r] || nodes.find(r) != r) continue;
    ReebVertex v;
    v.id = static_cast<int>(graph.vertices.size());
    v.label = zones.zone_value[order[r]];
    if (is_boundary_node(r)) {
      v.kind = ReebVertexKind::Boundary;
    } else if (down[r].empty()) {
      v.kind = ReebVertexKind::Minimum;
    } else if (up[r].empty()) {
      v.kind = ReebVertexKind::Maximum;
    } else {
      v.kind = ReebVertexKind::Saddle;
      v.multiplicity = static_cast<int>(down[r].size() + up[r].size()) - 2;
    }
    for (int z : node_zones[r]) v.preimage.insert(v.preimage.end(), zones.zones[z].begin(), zones.zones[z].end());
    std::sort(v.preimage.begin(), v.preimage.end());
    vertex_of_node[r] = v.id;
    graph.vertices.push_back(std::move(v));
  }

  for (const ReebVertex& v : graph.vertices) {
    // Find the node of this vertex again via its first preimage vertex.
    const int start = nodes.find(rank[zones.zone_of[v.preimage.front()]]);
    for (int next : up[start]) {
      ReebEdge e;
      e.lower = v.id;
      e.chain.push_back(zones.zones[order[start]].front());
      int cur = next;
      while (!kept[cur]) {
        for (int z : node_zones[cur]) {
          e.vertex_preimage.insert(e.vertex_preimage.end(), zones.zones[z].begin(), zones.zones[z].end());
        }
        e.chain.push_back(zones.zones[order[cur]].front());
        cur = up[cur][0];
      }
      e.chain.push_back(zones.zones[order[cur]].front());
      e.upper = vertex_of_node[cur];
      graph.edges.push_back(std::move(e));
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(),
            [](const ReebEdge& a, const ReebEdge& b) { return std::pair(a.lower, a.upper) < std::pair(b.lower, b.upper); });
  for (std::size_t i = 0; i < graph.edges.size(); ++i) graph.edges[i].id = static_cast<int>(i);

  if (graph.edges.size() + 1 != graph.vertices.size()) {
    throw Error(ErrorCode::InternalInconsistency, "Reeb graph is not a tree");
  }

  graph.image.assign(mesh.num_vertices(), 0);
  for (const ReebVertex& v : graph.vertices) {
    for (int w : v.preimage) graph.image[w] = v.id;
  }
  for (const ReebEdge& e : graph.edges) {
    for (int w : e.vertex_preimage) graph.image[w] = -e.id - 1;
  }

  // Root the tree at vertex 0 to read paths between images.
  const int nv = static_cast<int>(graph.vertices.size());
  RootedTree rooted{std::vector<int>(nv, -1), std::vector<int>(nv, -1), std::vector<int>(nv, 0)};
  {
    std::vector<std::vector<std::pair<int, int>>> adj(nv);
    for (const ReebEdge& e : graph.edges) {
      adj[e.lower].emplace_back(e.upper, e.id);
      adj[e.upper].emplace_back(e.lower, e.id);
    }
    std::vector<char> seen(nv, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    while (!queue.empty()) {
      const int a = queue.front();
      queue.pop();
      for (const auto& [b, eid] : adj[a]) {
        if (seen[b]) continue;
        seen[b] = 1;
        rooted.parent[b] = a;
        rooted.parent_edge[b] = eid;
        rooted.depth[b] = rooted.depth[a] + 1;
        queue.push(b);
      }
    }
  }
  std::vector<int> touched;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangle(static_cast<int>(t));
    touched.clear();
    int anchor[3];
    for (int i = 0; i < 3; ++i) {
      const int img = graph.image[tri[i]];
      if (img >= 0) {
        anchor[i] = img;
      } else {
        const int eid = -img - 1;
        touched.push_back(eid);
        anchor[i] = graph.edges[eid].lower;
      }
    }
    rooted.path_edges(anchor[0], anchor[1], touched);
    rooted.path_edges(anchor[0], anchor[2], touched);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int eid : touched) graph.edges[eid].triangles.push_back(static_cast<int>(t));
  }
  return graph;
}

LabeledTree reeb_tree(const ReebGraph& graph) {
  std::vector<double> labels;
  labels.reserve(graph.vertices.size());
  for (const ReebVertex& v : graph.vertices) labels.push_back(v.label);
  std::vector<std::pair<int, int>> edges;
  for (const ReebEdge& e : graph.edges) edges.emplace_back(e.lower, e.upper);
  return LabeledTree(std::move(labels), std::move(edges));
}

double choose_cut_value(const ScalarField& field, const ReebGraph& graph, int edge) {
  if (edge < 0 || edge >= static_cast<int>(graph.edges.size())) {
    throw Error(ErrorCode::EdgeNotFound, "no Reeb edge " + std::to_string(edge));
  }
  const double lo = graph.vertices[graph.edges[edge].lower].label;
  const double hi = graph.vertices[graph.edges[edge].upper].label;
  std::vector<double> cuts{lo, hi};
  for (double v : field.values()) {
    if (v > lo && v < hi) cuts.push_back(v);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] > cuts[best + 1] - cuts[best]) best = i;
  }
  const double c = cuts[best] + 0.5 * (cuts[best + 1] - cuts[best]);
  if (!(c > cuts[best] && c < cuts[best + 1])) {
    throw Error(ErrorCode::ValueCollision, "no representable value strictly inside the largest gap");
  }
  return c;
}

LevelCycle level_cycle(const TriangleMesh& mesh, const ScalarField& field, const ReebGraph& graph, int edge,
                       double c) {
  if (edge < 0 || edge >= static_cast<int>(graph.edges.size())) {
    throw Error(ErrorCode::EdgeNotFound, "no Reeb edge " + std::to_string(edge));
  }
  const ReebEdge& e = graph.edges[edge];
  if (!(c > graph.vertices[e.lower].label && c < graph.vertices[e.upper].label)) {
    throw Error(ErrorCode::ValueCollision, "level " + format_number(c) + " lies outside edge " + std::to_string(edge));
  }
  for (std::size_t v = 0; v < field.size(); ++v) {
    if (field[v] == c) {
      throw Error(ErrorCode::ValueCollision, "level " + format_number(c) + " is the value of vertex " + std::to_string(v));
    }
  }
  // Components along the edge bracketing c.
  std::size_t i = 0;
  while (i + 1 < e.chain.size() && !(field[e.chain[i]] < c && c < field[e.chain[i + 1]])) ++i;
  if (i + 1 >= e.chain.size()) {
    throw Error(ErrorCode::InternalInconsistency, "edge chain does not bracket the level");
  }

  // Sublevel component below and superlevel component above the point.
  const std::size_t nv = mesh.num_vertices();
  std::vector<signed char> side(nv, 0);
  auto flood = [&](int seed, signed char mark, bool below) {
    std::queue<int> queue;
    queue.push(seed);
    side[seed] = mark;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int u : mesh.neighbors(v)) {
        if (side[u] != 0) continue;
        if (below ? field[u] < c : field[u] > c) {
          side[u] = mark;
          queue.push(u);
        }
      }
    }
  };
  flood(e.chain[i], -1, true);
  flood(e.chain[i + 1], 1, false);

  std::vector<char> in_preimage(mesh.num_triangles(), 0);
  for (int t : e.triangles) in_preimage[t] = 1;
  std::vector<char> crossed(mesh.num_edges(), 0);
  std::size_t count = 0;
  for (std::size_t id = 0; id < mesh.num_edges(); ++id) {
    const auto& [a, b] = mesh.edge(static_cast<int>(id));
    if (side[a] * side[b] == -1) {
      crossed[id] = 1;
      ++count;
      for (int t : mesh.edge_triangles(static_cast<int>(id))) {
        if (!in_preimage[t]) {
          throw Error(ErrorCode::InternalInconsistency, "level cycle leaves the preimage of edge " + std::to_string(edge));
        }
      }
    }
  }
  if (count == 0) {
    throw Error(ErrorCode::InternalInconsistency, "no crossings found for edge " + std::to_string(edge));
  }

  LevelCycle cycle;
  cycle.value = c;
  const int first = static_cast<int>(std::find(crossed.begin(), crossed.end(), 1) - crossed.begin());
  auto crossing_at = [&](int id) {
    const auto& [a, b] = mesh.edge(id);
    return Crossing{id, (c - field[a]) / (field[b] - field[a])};
  };
  int cur = first;
  int prev_tri = -1;
  do {
    cycle.crossings.push_back(crossing_at(cur));
    int next_tri = -1;
    for (int t : mesh.edge_triangles(cur)) {
      if (t != prev_tri) {
        next_tri = t;
        break;
      }
    }
    int next = -1;
    const Triangle& tri = mesh.triangle(next_tri);
    for (int k = 0; k < 3; ++k) {
      const int id = mesh.find_edge(tri[k], tri[(k + 1) % 3]);
      if (id != cur && crossed[id]) next = id;
    }
    if (next < 0 || cycle.crossings.size() > count) {
      throw Error(ErrorCode::InternalInconsistency, "level set does not close up");
    }
    prev_tri = next_tri;
    cur = next;
  } while (cur != first);
  if (cycle.crossings.size() != count) {
    throw Error(ErrorCode::InternalInconsistency, "level set at the edge is not a single cycle");
  }
  return cycle;
}

std::string export_dot(const ReebGraph& graph) {
  std::ostringstream out;
  out << "digraph reeb {\n";
  out << "  node [shape=circle];\n";
  for (const ReebVertex& v : graph.vertices) {
    out << "  v" << v.id << " [label=\"" << v.id << "\\n" << to_string(v.kind);
    if (v.kind == ReebVertexKind::Saddle) out << " x" << v.multiplicity;
    out << "\\n" << format_number(v.label) << "\"];\n";
  }
  for (const ReebEdge& e : graph.edges) {
    out << "  v" << e.lower << " -> v" << e.upper << " [label=\"e" << e.id << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace reebsplit
