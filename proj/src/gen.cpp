#include "reebsplit/gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "reebsplit/error.hpp"

namespace reebsplit {

RealizableTree::RealizableTree(LabeledTree tree) : tree_(std::move(tree)) {
  if (tree_.size() < 2) throw Error(ErrorCode::InvalidTree, "a realizable tree needs at least one edge");
  for (int v = 0; v < static_cast<int>(tree_.size()); ++v) {
    if (tree_.degree(v) == 1) continue;
    if (tree_.degree(v) < 3) {
      throw Error(ErrorCode::InvalidTree, "vertex " + std::to_string(v) + " has degree 2");
    }
    bool lower = false, upper = false;
    for (int u : tree_.neighbors(v)) {
      lower = lower || tree_.label(u) < tree_.label(v);
      upper = upper || tree_.label(u) > tree_.label(v);
    }
    if (!lower || !upper) {
      throw Error(ErrorCode::InvalidTree, "vertex " + std::to_string(v) + " needs neighbours above and below");
    }
  }
}

namespace {

class MeshBuilder {
 public:
  int add(Vec3 p, double value) {
    positions_.push_back(p);
    values_.push_back(value);
    return static_cast<int>(positions_.size()) - 1;
  }
  void tri(int a, int b, int c) { tris_.push_back({a, b, c}); }

  // Annulus between a closed polygon and a closed ring.
  void annulus(const std::vector<int>& poly, const std::vector<int>& ring) {
    const std::size_t n = poly.size(), m = ring.size();
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
      // Advance along whichever cycle is proportionally behind.
      const bool step_poly = j == m || (i < n && i * m <= j * n);
      if (step_poly) {
        tri(poly[i % n], poly[(i + 1) % n], ring[j % m]);
        ++i;
      } else {
        tri(poly[i % n], ring[(j + 1) % m], ring[j % m]);
        ++j;
      }
    }
  }

  void strip(const std::vector<int>& lo, const std::vector<int>& hi) {
    const std::size_t n = lo.size();
    for (std::size_t i = 0; i < n; ++i) {
      tri(lo[i], lo[(i + 1) % n], hi[i]);
      tri(lo[(i + 1) % n], hi[(i + 1) % n], hi[i]);
    }
  }

  void cone(int apex, const std::vector<int>& ring) {
    for (std::size_t i = 0; i < ring.size(); ++i) tri(apex, ring[i], ring[(i + 1) % ring.size()]);
  }

  MeshWithField finish() {
    TriangleMesh raw(std::move(positions_), std::move(tris_));
    return {orient_consistently(raw), ScalarField(std::move(values_))};
  }

 private:
  std::vector<Vec3> positions_;
  std::vector<double> values_;
  std::vector<Triangle> tris_;
};

// Saddle neighbourhood of one tree vertex: the saddle vertex, its link made of
// 2m runs of three vertices, one annulus per neighbouring region, and the
// pockets where nested regions meet.
class SaddlePiece {
 public:
  SaddlePiece(MeshBuilder& builder, const LabeledTree& tree, int s, double delta, int resolution, double x_pos,
              const std::vector<double>& x_of)
      : b_(builder) {
    std::vector<int> down, up;
    for (int u : tree.neighbors(s)) (tree.label(u) < tree.label(s) ? down : up).push_back(u);
    // Sector order around the saddle: d1 u1 d2 u1 ... dp u1 d1 u2 d1 u3 ... d1 uq.
    seq_.push_back(down[0]);
    for (std::size_t k = 1; k < down.size(); ++k) {
      seq_.push_back(up[0]);
      seq_.push_back(down[k]);
    }
    seq_.push_back(up[0]);
    for (std::size_t j = 1; j < up.size(); ++j) {
      seq_.push_back(down[0]);
      seq_.push_back(up[j]);
    }
    const double ls = tree.label(s);
    const int center = b_.add({x_pos, 0.0, ls}, ls);
    const std::size_t sectors = seq_.size();
    const double total = static_cast<double>(3 * sectors + 1);
    for (std::size_t k = 0; k < sectors; ++k) {
      const double sign = tree.label(seq_[k]) < ls ? -1.0 : 1.0;
      for (int j = 0; j < 3; ++j) {
        const double frac = static_cast<double>(3 * k + j + 1) / total;
        const double angle = 2.0 * M_PI * frac;
        const double value = ls + sign * delta * (1.0 + 0.1 * frac);
        link_.push_back(b_.add({x_pos + 0.3 * std::cos(angle), 0.3 * std::sin(angle), value}, value));
      }
    }
    for (std::size_t i = 0; i < link_.size(); ++i) b_.tri(center, link_[i], link_[(i + 1) % link_.size()]);

    for (int nb : tree.neighbors(s)) {
      const double sign = tree.label(nb) < ls ? -1.0 : 1.0;
      std::vector<int> ring;
      const double cx = x_pos + 0.5 * (x_of[nb] - x_pos);
      for (int i = 0; i < resolution; ++i) {
        const double frac = static_cast<double>(i + 1) / (resolution + 1);
        const double angle = 2.0 * M_PI * i / resolution;
        const double value = ls + sign * delta * (2.0 + 0.1 * frac);
        ring.push_back(b_.add({cx + 0.2 * std::cos(angle), 0.2 * std::sin(angle), value}, value));
      }
      rings_[nb] = std::move(ring);
    }

    const int root = seq_[0];
    std::vector<int> positions;
    for (std::size_t k = 0; k < sectors; ++k) {
      if (seq_[k] == root) positions.push_back(static_cast<int>(k));
    }
    b_.annulus(polygon(positions), rings_[root]);
    for (std::size_t t = 0; t < positions.size(); ++t) {
      const int from = positions[t];
      const int to = t + 1 < positions.size() ? positions[t + 1] : positions[0] + static_cast<int>(sectors);
      std::vector<int> inner;
      for (int k = from + 1; k < to; ++k) inner.push_back(k % static_cast<int>(sectors));
      fill_pocket(run_end(from), run_start(to % static_cast<int>(sectors)), inner);
    }
  }

  const std::vector<int>& ring_towards(int nb) const { return rings_.at(nb); }

 private:
  int run_start(int k) const { return link_[3 * k]; }
  int run_end(int k) const { return link_[3 * k + 2]; }

  std::vector<int> polygon(const std::vector<int>& sector_positions) const {
    std::vector<int> poly;
    for (int k : sector_positions) {
      for (int j = 0; j < 3; ++j) poly.push_back(link_[3 * k + j]);
    }
    return poly;
  }

  // Pocket bounded by x (end of a run of the enclosing region), the link
  // between, y (start of its next run) and the chord y-x.
  void fill_pocket(int x, int y, const std::vector<int>& inner) {
    const int region = seq_[inner.front()];
    if (seq_[inner.back()] != region) {
      throw Error(ErrorCode::InternalInconsistency, "saddle sectors are not properly nested");
    }
    const int t_start = run_start(inner.front());
    const int t_end = run_end(inner.back());
    b_.tri(x, t_start, t_end);
    b_.tri(x, t_end, y);
    std::vector<std::size_t> own;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (seq_[inner[i]] == region) own.push_back(i);
    }
    std::vector<int> positions;
    for (std::size_t i : own) positions.push_back(inner[i]);
    b_.annulus(polygon(positions), rings_.at(region));
    for (std::size_t a = 0; a + 1 < own.size(); ++a) {
      std::vector<int> sub(inner.begin() + static_cast<long>(own[a]) + 1, inner.begin() + static_cast<long>(own[a + 1]));
      fill_pocket(run_end(inner[own[a]]), run_start(inner[own[a + 1]]), sub);
    }
  }

  MeshBuilder& b_;
  std::vector<int> seq_;
  std::vector<int> link_;
  std::map<int, std::vector<int>> rings_;
};

// Horizontal layout: leaves in DFS order, inner vertices at the mean of
// their neighbours' positions. Decorative only.
std::vector<double> layout(const LabeledTree& tree) {
  const int n = static_cast<int>(tree.size());
  std::vector<double> x(n, 0.0);
  std::vector<int> order;
  std::vector<int> parent(n, -1);
  std::vector<int> stack{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int u : tree.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        parent[u] = v;
        stack.push_back(u);
      }
    }
  }
  double next = 0.0;
  for (int v : order) {
    if (tree.degree(v) == 1) x[v] = 2.0 * next++;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (tree.degree(v) == 1) continue;
    double sum = 0.0;
    int count = 0;
    for (int u : tree.neighbors(v)) {
      if (u != parent[v]) {
        sum += x[u];
        ++count;
      }
    }
    x[v] = sum / count;
  }
  return x;
}

}  // namespace

MeshWithField realize_tree(const RealizableTree& realizable, int resolution) {
  if (resolution < 3) throw Error(ErrorCode::InvalidTree, "resolution must be at least 3");
  const LabeledTree& tree = realizable.tree();
  const int n = static_cast<int>(tree.size());
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : tree.edges()) gap = std::min(gap, std::abs(tree.label(a) - tree.label(b)));
  const double delta = gap / 10.0;
  const std::vector<double> x_of = layout(tree);

  MeshBuilder builder;
  std::map<int, SaddlePiece> pieces;
  std::vector<int> apex(n, -1);
  for (int v = 0; v < n; ++v) {
    if (tree.degree(v) == 1) {
      apex[v] = builder.add({x_of[v], 0.0, tree.label(v)}, tree.label(v));
    } else {
      pieces.try_emplace(v, builder, tree, v, delta, resolution, x_of[v], x_of);
    }
  }

  for (const auto& [a, b] : tree.edges()) {
    const int lo = tree.label(a) < tree.label(b) ? a : b;
    const int hi = lo == a ? b : a;
    const bool lo_inner = pieces.count(lo) > 0;
    const bool hi_inner = pieces.count(hi) > 0;
    if (lo_inner && hi_inner) {
      builder.strip(pieces.at(lo).ring_towards(hi), pieces.at(hi).ring_towards(lo));
    } else if (lo_inner) {
      builder.cone(apex[hi], pieces.at(lo).ring_towards(hi));
    } else if (hi_inner) {
      builder.cone(apex[lo], pieces.at(hi).ring_towards(lo));
    } else {
      // Single edge: a ring halfway between two cone apexes.
      std::vector<int> ring;
      const double mid = tree.label(lo) + 0.5 * (tree.label(hi) - tree.label(lo));
      for (int i = 0; i < resolution; ++i) {
        const double angle = 2.0 * M_PI * i / resolution;
        const double value = mid + delta * 0.1 * i / resolution;
        ring.push_back(builder.add({x_of[lo] + 0.5 * std::cos(angle), 0.5 * std::sin(angle), value}, value));
      }
      builder.cone(apex[lo], ring);
      builder.cone(apex[hi], ring);
    }
  }
  return builder.finish();
}

MeshWithField octahedron_height() {
  std::vector<Vec3> positions{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Triangle> tris{{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  const double eps = 1e-6 * 2.0;
  std::vector<double> values;
  for (std::size_t i = 0; i < positions.size(); ++i) values.push_back(positions[i][2] + static_cast<double>(i) * eps);
  return {TriangleMesh(std::move(positions), std::move(tris)), ScalarField(std::move(values))};
}

MeshWithField subdivided_sphere(int levels) {
  MeshWithField base = octahedron_height();
  std::vector<Vec3> positions(base.mesh.positions().begin(), base.mesh.positions().end());
  std::vector<Triangle> tris(base.mesh.triangles().begin(), base.mesh.triangles().end());
  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 p{};
      for (int i = 0; i < 3; ++i) p[i] = 0.5 * (positions[a][i] + positions[b][i]);
      const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      for (double& c : p) c /= len;
      positions.push_back(p);
      return midpoint[key] = static_cast<int>(positions.size()) - 1;
    };
    std::vector<Triangle> next;
    for (const Triangle& t : tris) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  const double eps = 1e-6 * 2.0 / static_cast<double>(positions.size());
  std::vector<double> values;
  for (std::size_t i = 0; i < positions.size(); ++i) values.push_back(positions[i][2] + static_cast<double>(i) * eps);
  return {TriangleMesh(std::move(positions), std::move(tris)), ScalarField(std::move(values))};
}

MeshWithField monkey_saddle_disk() {
  std::vector<Vec3> positions{{0, 0, 0}};
  std::vector<double> values{0.0};
  for (int i = 0; i < 6; ++i) {
    const double angle = M_PI * i / 3.0;
    const double value = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.1 * i);
    positions.push_back({std::cos(angle), std::sin(angle), value});
    values.push_back(value);
  }
  std::vector<Triangle> tris;
  for (int i = 0; i < 6; ++i) tris.push_back({0, 1 + i, 1 + (i + 1) % 6});
  return {TriangleMesh(std::move(positions), std::move(tris)), ScalarField(std::move(values))};
}

RealizableTree star_tree(int branches) {
  std::vector<double> labels{1.0, 0.0};
  std::vector<std::pair<int, int>> edges{{0, 1}};
  for (int i = 0; i < branches; ++i) {
    labels.push_back(2.0);
    edges.emplace_back(0, 2 + i);
  }
  return RealizableTree(LabeledTree(std::move(labels), std::move(edges)));
}

RealizableTree double_fork_tree() {
  return RealizableTree(LabeledTree({0.0, 2.0, 3.5, 5.0, 5.0, 6.0, 6.0},
                                    {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}}));
}

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random tree shape with exactly n vertices (n != 3) whose inner vertices
// all have degree >= 3.
std::vector<std::pair<int, int>> random_shape(int n, Rng& rng) {
  std::vector<std::pair<int, int>> edges{{0, 1}};
  std::vector<int> degree{1, 1};
  int size = 2;
  while (size < n) {
    std::vector<int> leaves, inner;
    for (int v = 0; v < size; ++v) (degree[v] == 1 ? leaves : inner).push_back(v);
    const bool can_split = size + 2 <= n;
    const bool split = can_split && (inner.empty() || uniform_int(rng, 0, 1) == 0);
    if (split) {
      const int leaf = leaves[uniform_int(rng, 0, static_cast<int>(leaves.size()) - 1)];
      for (int i = 0; i < 2; ++i) {
        edges.emplace_back(leaf, size);
        degree.push_back(1);
        ++degree[leaf];
        ++size;
      }
    } else {
      const int v = inner[uniform_int(rng, 0, static_cast<int>(inner.size()) - 1)];
      edges.emplace_back(v, size);
      degree.push_back(1);
      ++degree[v];
      ++size;
    }
  }
  return edges;
}

// Orients every edge so that inner vertices see both directions, then labels
// vertices by a random topological order of the orientation.
std::vector<double> random_labels(int n, const std::vector<std::pair<int, int>>& edges, Rng& rng) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  // up[v][i]: neighbour adj[v][i] lies above v.
  std::map<std::pair<int, int>, bool> above;  // (a, b) -> b above a
  std::vector<int> parent(n, -1);
  std::vector<int> order{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int v = order[i];
    std::vector<int> children;
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        parent[u] = v;
        children.push_back(u);
        order.push_back(u);
      }
    }
    if (children.empty()) continue;
    std::vector<bool> child_up(children.size());
    for (std::size_t c = 0; c < children.size(); ++c) child_up[c] = uniform_int(rng, 0, 1) == 1;
    bool has_up = false, has_down = false;
    if (parent[v] >= 0) (above.at({v, parent[v]}) ? has_up : has_down) = true;
    for (bool u : child_up) (u ? has_up : has_down) = true;
    if (!has_up || !has_down) {
      const std::size_t flip = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(children.size()) - 1));
      if (parent[v] < 0 && children.size() == 1) {
        // root leaf: single child, any direction works
      } else if (!has_up) {
        child_up[flip] = true;
        if (parent[v] < 0 && std::all_of(child_up.begin(), child_up.end(), [](bool b) { return b; })) {
          child_up[(flip + 1) % children.size()] = false;
        }
      } else {
        child_up[flip] = false;
        if (parent[v] < 0 && std::none_of(child_up.begin(), child_up.end(), [](bool b) { return b; })) {
          child_up[(flip + 1) % children.size()] = true;
        }
      }
    }
    for (std::size_t c = 0; c < children.size(); ++c) {
      above[{v, children[c]}] = child_up[c];
      above[{children[c], v}] = !child_up[c];
    }
  }
  // Random topological order: repeatedly take a random source.
  std::vector<int> indegree(n, 0);
  for (const auto& [key, up] : above) {
    if (up) ++indegree[key.second];
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::vector<double> labels(n, 0.0);
  int position = 0;
  while (!ready.empty()) {
    const std::size_t pick = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ready.size()) - 1));
    const int v = ready[pick];
    ready.erase(ready.begin() + static_cast<long>(pick));
    labels[v] = static_cast<double>(position++);
    for (int u : adj[v]) {
      if (above.at({v, u}) && --indegree[u] == 0) ready.push_back(u);
    }
  }
  return labels;
}

}  // namespace

RealizableTree random_realizable_tree(int n, int symmetry, std::uint64_t seed) {
  Rng rng(seed);
  n = std::max(n, 2);
  const int k = std::max(symmetry, 1);

  int branch = 2;  // template size including its attachment leaf
  if (k >= 2) {
    std::vector<int> options{2};
    for (int b : {4, 5}) {
      if (n - k * (b - 1) >= 2) options.push_back(b);
    }
    branch = options[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(options.size()) - 1))];
  }
  // Occasionally the base is a single vertex carrying k min leaves below the
  // grafted bundle, so that no edge is fixed by the whole group.
  const bool two_sided = k >= 2 && uniform_int(rng, 0, 3) == 0;
  int base_n = k >= 2 ? std::max(2, n - k * (branch - 1)) : n;
  if (base_n == 3) base_n = 2;
  if (two_sided) base_n = 1;

  std::vector<std::pair<int, int>> edges;
  std::vector<double> labels{0.0};
  if (!two_sided) {
    edges = random_shape(base_n, rng);
    labels = random_labels(base_n, edges, rng);
  }

  if (k >= 2) {
    const int g = uniform_int(rng, 0, base_n - 1);
    auto t_edges = random_shape(branch, rng);
    auto t_labels = random_labels(branch, t_edges, rng);
    std::vector<int> t_degree(branch, 0);
    for (const auto& [a, b] : t_edges) {
      ++t_degree[a];
      ++t_degree[b];
    }
    std::vector<int> t_leaves;
    for (int v = 0; v < branch; ++v) {
      if (t_degree[v] == 1) t_leaves.push_back(v);
    }
    const int attach = t_leaves[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(t_leaves.size()) - 1))];
    int attach_nb = -1;
    for (const auto& [a, b] : t_edges) {
      if (a == attach) attach_nb = b;
      if (b == attach) attach_nb = a;
    }
    // Direction the copies must leave g in, if g is a leaf of the base tree.
    int g_degree = 0;
    int g_nb = -1;
    for (const auto& [a, b] : edges) {
      if (a == g || b == g) {
        ++g_degree;
        g_nb = a == g ? b : a;
      }
    }
    const bool copies_go_up =
        two_sided || (g_degree == 1 ? labels[g_nb] < labels[g] : uniform_int(rng, 0, 1) == 1);
    const bool template_goes_up = t_labels[attach_nb] > t_labels[attach];
    if (copies_go_up != template_goes_up) {
      for (double& l : t_labels) l = -l;
    }
    const double shift = labels[g] - t_labels[attach];
    for (int copy = 0; copy < k; ++copy) {
      std::vector<int> id(branch, -1);
      id[attach] = g;
      for (int v = 0; v < branch; ++v) {
        if (v == attach) continue;
        id[v] = static_cast<int>(labels.size());
        labels.push_back(t_labels[v] + shift);
      }
      for (const auto& [a, b] : t_edges) edges.emplace_back(id[a], id[b]);
    }
    if (two_sided) {
      for (int copy = 0; copy < k; ++copy) {
        edges.emplace_back(g, static_cast<int>(labels.size()));
        labels.push_back(labels[g] - 1.0);
      }
    }
  }
  return RealizableTree(LabeledTree(std::move(labels), std::move(edges)));
}

ScalarField random_field(const TriangleMesh& mesh, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(mesh.num_vertices());
  for (double& v : values) v = unit(rng);
  return ScalarField(std::move(values));
}

}  // namespace reebsplit
