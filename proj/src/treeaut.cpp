#include "reebsplit/treeaut.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>
#include <set>

#include "reebsplit/error.hpp"

namespace reebsplit {

namespace {

std::string exact_label(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

}  // namespace

LabeledTree::LabeledTree(std::vector<double> labels, std::vector<std::pair<int, int>> edges,
                         std::optional<int> marked)
    : labels_(std::move(labels)), marked_(marked) {
  const int n = static_cast<int>(labels_.size());
  if (n == 0) throw Error(ErrorCode::InvalidTree, "tree has no vertices");
  if (edges.size() + 1 != labels_.size()) {
    throw Error(ErrorCode::InvalidTree, std::to_string(edges.size()) + " edges on " + std::to_string(n) + " vertices");
  }
  if (marked_ && (*marked_ < 0 || *marked_ >= n)) throw Error(ErrorCode::InvalidTree, "marked vertex out of range");
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw Error(ErrorCode::InvalidTree, "bad edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    if (labels_[a] == labels_[b]) {
      throw Error(ErrorCode::InvalidTree,
                  "adjacent vertices " + std::to_string(a) + " and " + std::to_string(b) + " share a label");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorCode::InvalidTree, "repeated edge");
  }
  edges_ = std::move(edges);
  adjacency_.resize(n);
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  std::vector<char> seen(n, 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int u : adjacency_[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        queue.push(u);
      }
    }
  }
  if (count != n) throw Error(ErrorCode::InvalidTree, "edges do not connect all vertices");
}

int LabeledTree::find_edge(int u, int v) const {
  const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

LabeledTree LabeledTree::with_marked(std::optional<int> marked) const {
  return LabeledTree(labels_, edges_, marked);
}

LabeledTree LabeledTree::with_label(int v, double label) const {
  std::vector<double> labels = labels_;
  labels[v] = label;
  return LabeledTree(std::move(labels), edges_, marked_);
}

namespace {

std::string rooted_form(const LabeledTree& tree, int v, int parent) {
  std::vector<std::string> children;
  for (int u : tree.neighbors(v)) {
    if (u != parent) children.push_back(rooted_form(tree, u, v));
  }
  std::sort(children.begin(), children.end());
  std::string out = "(" + exact_label(tree.label(v));
  if (tree.marked() == v) out += "*";
  for (const auto& c : children) out += c;
  return out + ")";
}

std::vector<int> tree_centers(const LabeledTree& tree) {
  const int n = static_cast<int>(tree.size());
  if (n <= 2) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<int> degree(n);
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    degree[v] = tree.degree(v);
    if (degree[v] == 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer) {
      for (int u : tree.neighbors(v)) {
        if (--degree[u] == 1) next.push_back(u);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

}  // namespace

std::string canonical_form(const LabeledTree& tree) {
  std::string best;
  for (int c : tree_centers(tree)) {
    std::string form = rooted_form(tree, c, -1);
    if (best.empty() || form < best) best = std::move(form);
  }
  return best;
}

bool label_isomorphic(const LabeledTree& a, const LabeledTree& b) {
  return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t v = 0; v < b.size(); ++v) out[v] = a[b[v]];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) out[p[v]] = static_cast<int>(v);
  return out;
}

bool is_identity(const Permutation& p) {
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (p[v] != static_cast<int>(v)) return false;
  }
  return true;
}

int element_order(const Permutation& p) {
  // lcm of cycle lengths
  std::vector<char> seen(p.size(), 0);
  long long order = 1;
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (seen[v]) continue;
    long long len = 0;
    for (std::size_t w = v; !seen[w]; w = static_cast<std::size_t>(p[w])) {
      seen[w] = 1;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return static_cast<int>(order);
}

bool AutGroup::contains(const Permutation& p) const { return std::binary_search(elements.begin(), elements.end(), p); }

namespace {

// Stable colouring of the tree by iterated neighbour-multiset refinement.
std::vector<int> refine_colors(const LabeledTree& tree, bool use_labels) {
  const int n = static_cast<int>(tree.size());
  std::vector<double> distinct(tree.labels().begin(), tree.labels().end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<std::vector<long long>> signature(n);
  for (int v = 0; v < n; ++v) {
    const long long label_class =
        use_labels ? std::lower_bound(distinct.begin(), distinct.end(), tree.label(v)) - distinct.begin() : 0;
    signature[v] = {label_class, tree.degree(v), tree.marked() == v ? 1 : 0};
  }
  std::vector<int> color(n);
  std::size_t classes = 0;
  for (;;) {
    std::vector<std::vector<long long>> sorted = signature;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v = 0; v < n; ++v) {
      color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), signature[v]) - sorted.begin());
    }
    if (sorted.size() == classes) break;
    classes = sorted.size();
    for (int v = 0; v < n; ++v) {
      std::vector<long long> nb;
      for (int u : tree.neighbors(v)) nb.push_back(color[u]);
      std::sort(nb.begin(), nb.end());
      signature[v] = {color[v]};
      signature[v].insert(signature[v].end(), nb.begin(), nb.end());
    }
  }
  return color;
}

class AutomorphismSearch {
 public:
  AutomorphismSearch(const LabeledTree& tree, bool use_labels, std::size_t limit)
      : tree_(tree), color_(refine_colors(tree, use_labels)), limit_(limit) {
    const int n = static_cast<int>(tree.size());
    // Start from the smallest colour class to keep the root fan-out small.
    std::vector<int> class_size(n, 0);
    for (int c : color_) ++class_size[c];
    int root = 0;
    for (int v = 1; v < n; ++v) {
      if (class_size[color_[v]] < class_size[color_[root]]) root = v;
    }
    parent_.assign(n, -1);
    std::vector<char> seen(n, 0);
    std::queue<int> queue;
    queue.push(root);
    seen[root] = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      order_.push_back(v);
      for (int u : tree.neighbors(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          parent_[u] = v;
          queue.push(u);
        }
      }
    }
    image_.assign(n, -1);
    used_.assign(n, 0);
  }

  std::vector<Permutation> run() {
    extend(0);
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      found_.push_back(image_);
      if (found_.size() > limit_) {
        throw Error(ErrorCode::GroupTooLarge, "automorphism group exceeds " + std::to_string(limit_) + " elements");
      }
      return;
    }
    const int v = order_[depth];
    auto try_candidate = [&](int w) {
      if (used_[w] || color_[w] != color_[v]) return;
      image_[v] = w;
      used_[w] = 1;
      extend(depth + 1);
      used_[w] = 0;
      image_[v] = -1;
    };
    if (parent_[v] < 0) {
      for (int w = 0; w < static_cast<int>(tree_.size()); ++w) try_candidate(w);
    } else {
      for (int w : tree_.neighbors(image_[parent_[v]])) try_candidate(w);
    }
  }

  const LabeledTree& tree_;
  std::vector<int> color_;
  std::size_t limit_;
  std::vector<int> order_;
  std::vector<int> parent_;
  Permutation image_;
  std::vector<char> used_;
  std::vector<Permutation> found_;
};

std::vector<Permutation> closure_of(std::size_t degree, const std::vector<Permutation>& generators,
                                    std::size_t limit) {
  std::set<Permutation> seen{identity_permutation(degree)};
  std::queue<Permutation> queue;
  queue.push(identity_permutation(degree));
  while (!queue.empty()) {
    const Permutation x = queue.front();
    queue.pop();
    for (const Permutation& g : generators) {
      Permutation y = compose(g, x);
      if (seen.insert(y).second) {
        if (seen.size() > limit) {
          throw Error(ErrorCode::GroupTooLarge, "generated group exceeds " + std::to_string(limit) + " elements");
        }
        queue.push(std::move(y));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<Permutation> pick_generators(std::size_t degree, const std::vector<Permutation>& elements) {
  std::vector<Permutation> gens;
  std::vector<Permutation> span{identity_permutation(degree)};
  for (const Permutation& p : elements) {
    if (std::binary_search(span.begin(), span.end(), p)) continue;
    gens.push_back(p);
    span = closure_of(degree, gens, elements.size());
  }
  return gens;
}

}  // namespace

AutGroup make_group(std::size_t degree, std::vector<Permutation> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  AutGroup group;
  group.degree = degree;
  group.elements = std::move(elements);
  // Generators are only meaningful when the list is closed; pick them from
  // whatever was given otherwise.
  try {
    group.generators = pick_generators(degree, group.elements);
  } catch (const Error&) {
    group.generators.clear();
  }
  return group;
}

AutGroup generate_group(std::size_t degree, const std::vector<Permutation>& generators, std::size_t limit) {
  return make_group(degree, closure_of(degree, generators, limit));
}

AutGroup enumerate_aut(const LabeledTree& tree, std::size_t limit) {
  AutomorphismSearch search(tree, true, limit);
  return make_group(tree.size(), search.run());
}

AutGroup enumerate_unlabeled_aut(const LabeledTree& tree, std::size_t limit) {
  AutomorphismSearch search(tree, false, limit);
  return make_group(tree.size(), search.run());
}

std::size_t group_order(const AutGroup& group) { return group.order(); }

std::map<int, int> element_order_histogram(const AutGroup& group) {
  std::map<int, int> hist;
  for (const Permutation& p : group.elements) ++hist[element_order(p)];
  return hist;
}

bool verify_group_axioms(const AutGroup& group) {
  if (!group.contains(identity_permutation(group.degree))) return false;
  for (const Permutation& a : group.elements) {
    if (!group.contains(inverse(a))) return false;
    for (const Permutation& b : group.elements) {
      if (!group.contains(compose(a, b))) return false;
    }
  }
  return true;
}

std::optional<bool> groups_isomorphic(const AutGroup& a, const AutGroup& b) {
  if (a.order() != b.order()) return false;
  if (element_order_histogram(a) != element_order_histogram(b)) return false;
  if (a.order() > 64) return std::nullopt;
  if (a.order() == 1) return true;

  const std::vector<Permutation>& gens = a.generators;
  const std::size_t n = a.order();
  auto index_in = [](const AutGroup& g, const Permutation& p) {
    return static_cast<int>(std::lower_bound(g.elements.begin(), g.elements.end(), p) - g.elements.begin());
  };
  std::vector<int> gen_index;
  for (const auto& g : gens) gen_index.push_back(index_in(a, g));

  // Tries gen -> image assignments; a Cayley-graph walk from the identity
  // checks that they extend to a bijective homomorphism.
  std::vector<int> image_of_gen(gens.size(), -1);
  auto extends = [&]() {
    std::vector<int> phi(n, -1);
    const int id_a = index_in(a, identity_permutation(a.degree));
    const int id_b = index_in(b, identity_permutation(b.degree));
    phi[id_a] = id_b;
    std::queue<int> queue;
    queue.push(id_a);
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop();
      for (std::size_t g = 0; g < gens.size(); ++g) {
        const int y = index_in(a, compose(gens[g], a.elements[x]));
        const int fy = index_in(b, compose(b.elements[image_of_gen[g]], b.elements[phi[x]]));
        if (phi[y] < 0) {
          phi[y] = fy;
          queue.push(y);
        } else if (phi[y] != fy) {
          return false;
        }
      }
    }
    std::vector<int> sorted = phi;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() && sorted.front() >= 0;
  };
  auto search = [&](auto&& self, std::size_t g) -> bool {
    if (g == gens.size()) return extends();
    const int want = element_order(gens[g]);
    for (std::size_t i = 0; i < b.order(); ++i) {
      if (element_order(b.elements[i]) != want) continue;
      image_of_gen[g] = static_cast<int>(i);
      if (self(self, g + 1)) return true;
    }
    return false;
  };
  return search(search, 0);
}

FixedSet fixed_set(const AutGroup& group, const LabeledTree& tree) {
  const int n = static_cast<int>(tree.size());
  FixedSet out;
  for (int v = 0; v < n; ++v) {
    bool fixed = true;
    for (const Permutation& g : group.elements) fixed = fixed && g[v] == v;
    if (fixed) out.vertices.push_back(v);
  }
  if (!out.vertices.empty()) {
    std::vector<char> is_fixed(n, 0);
    for (int v : out.vertices) is_fixed[v] = 1;
    for (std::size_t e = 0; e < tree.num_edges(); ++e) {
      const auto& [a, b] = tree.edge(static_cast<int>(e));
      if (is_fixed[a] && is_fixed[b]) out.edges.push_back(static_cast<int>(e));
    }
    // A forest on k vertices is connected iff it has k - 1 edges.
    if (out.edges.size() + 1 != out.vertices.size()) {
      throw Error(ErrorCode::InternalInconsistency, "common fixed vertices do not span a subtree");
    }
    out.variant = FixedSet::Variant::Subtree;
    return out;
  }
  for (std::size_t e = 0; e < tree.num_edges(); ++e) {
    const auto& [a, b] = tree.edge(static_cast<int>(e));
    bool invariant = true;
    const Permutation* witness = nullptr;
    for (const Permutation& g : group.elements) {
      if (g[a] == b && g[b] == a) {
        if (!witness) witness = &g;
      } else if (!(g[a] == a && g[b] == b)) {
        invariant = false;
        break;
      }
    }
    if (invariant && witness) {
      out.variant = FixedSet::Variant::Midpoint;
      out.midpoint_edge = static_cast<int>(e);
      out.flip_witness = *witness;
      return out;
    }
  }
  throw Error(ErrorCode::InternalInconsistency, "group has neither a fixed vertex nor a reversed invariant edge");
}

TreeCut cut_tree_at(const LabeledTree& tree, int edge) {
  if (edge < 0 || edge >= static_cast<int>(tree.num_edges())) {
    throw Error(ErrorCode::EdgeNotFound, "no tree edge " + std::to_string(edge));
  }
  auto [lo, hi] = tree.edge(edge);
  if (tree.label(lo) > tree.label(hi)) std::swap(lo, hi);
  const double x_label = tree.label(lo) + 0.5 * (tree.label(hi) - tree.label(lo));
  const int n = static_cast<int>(tree.size());

  TreeCut cut;
  cut.edge = edge;
  cut.tree_to_a.assign(n, -1);
  cut.tree_to_b.assign(n, -1);

  auto build_side = [&](int start, int other, std::vector<int>& to_tree, std::vector<int>& from_tree) {
    std::vector<char> seen(n, 0);
    seen[start] = 1;
    seen[other] = 1;  // do not cross the cut edge
    std::vector<int> members{start};
    std::queue<int> queue;
    queue.push(start);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int u : tree.neighbors(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          members.push_back(u);
          queue.push(u);
        }
      }
    }
    std::sort(members.begin(), members.end());
    to_tree = members;
    to_tree.push_back(-1);
    for (std::size_t i = 0; i < members.size(); ++i) from_tree[members[i]] = static_cast<int>(i);
    std::vector<double> labels;
    for (int v : members) labels.push_back(tree.label(v));
    labels.push_back(x_label);
    const int x = static_cast<int>(members.size());
    std::vector<std::pair<int, int>> edges;
    for (const auto& [a, b] : tree.edges()) {
      if (from_tree[a] >= 0 && from_tree[b] >= 0) edges.emplace_back(from_tree[a], from_tree[b]);
    }
    edges.emplace_back(from_tree[start], x);
    return std::pair(LabeledTree(std::move(labels), std::move(edges), x), x);
  };

  std::tie(cut.side_a, cut.x_a) = build_side(lo, hi, cut.a_to_tree, cut.tree_to_a);
  std::tie(cut.side_b, cut.x_b) = build_side(hi, lo, cut.b_to_tree, cut.tree_to_b);
  return cut;
}

Permutation restrict_aut(const Permutation& g, const TreeCut& cut, Side side) {
  const auto& to_tree = side == Side::A ? cut.a_to_tree : cut.b_to_tree;
  const auto& from_tree = side == Side::A ? cut.tree_to_a : cut.tree_to_b;
  const int x = side == Side::A ? cut.x_a : cut.x_b;
  Permutation out(to_tree.size());
  for (std::size_t i = 0; i < to_tree.size(); ++i) {
    if (static_cast<int>(i) == x) {
      out[i] = x;
      continue;
    }
    const int image = from_tree[g[to_tree[i]]];
    if (image < 0) {
      throw Error(ErrorCode::SideNotInvariant,
                  "vertex " + std::to_string(to_tree[i]) + " leaves side " + (side == Side::A ? "A" : "B"));
    }
    out[i] = image;
  }
  // The attachment vertex of x must stay put, otherwise x is not fixed.
  const int attach = side == Side::A ? cut.side_a.neighbors(x)[0] : cut.side_b.neighbors(x)[0];
  if (out[attach] != attach) {
    throw Error(ErrorCode::SideNotInvariant, "cut edge is not fixed");
  }
  return out;
}

Permutation glue_aut(const Permutation& alpha, const Permutation& beta, const TreeCut& cut) {
  if (alpha[cut.x_a] != cut.x_a || beta[cut.x_b] != cut.x_b) {
    throw Error(ErrorCode::SideNotInvariant, "glued automorphisms must fix the cut vertex");
  }
  Permutation out(cut.tree_to_a.size(), -1);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (static_cast<int>(i) == cut.x_a) continue;
    out[cut.a_to_tree[i]] = cut.a_to_tree[alpha[i]];
  }
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (static_cast<int>(i) == cut.x_b) continue;
    out[cut.b_to_tree[i]] = cut.b_to_tree[beta[i]];
  }
  return out;
}

IsomorphismVerdict verify_isomorphism(const std::vector<Permutation>& group, const AutGroup& side_a_group,
                                      const AutGroup& side_b_group, const TreeCut& cut) {
  IsomorphismVerdict verdict;
  auto note = [&](const std::string& msg) {
    if (verdict.detail.empty()) verdict.detail = msg;
  };

  std::vector<Permutation> sorted = group;
  std::sort(sorted.begin(), sorted.end());
  auto in_group = [&](const Permutation& p) { return std::binary_search(sorted.begin(), sorted.end(), p); };

  using Image = std::pair<Permutation, Permutation>;
  std::vector<Image> images;
  images.reserve(group.size());
  verdict.well_defined = true;
  verdict.into_product = true;
  for (const Permutation& g : group) {
    try {
      images.emplace_back(restrict_aut(g, cut, Side::A), restrict_aut(g, cut, Side::B));
    } catch (const Error& err) {
      verdict.well_defined = false;
      note(err.what());
      images.emplace_back();
      continue;
    }
    if (!side_a_group.contains(images.back().first) || !side_b_group.contains(images.back().second)) {
      verdict.into_product = false;
      note("a restriction is not an automorphism of its marked side");
    }
  }

  if (verdict.well_defined) {
    verdict.homomorphism = true;
    for (std::size_t i = 0; i < group.size() && verdict.homomorphism; ++i) {
      for (std::size_t j = 0; j < group.size(); ++j) {
        const Permutation product = compose(group[i], group[j]);
        if (!in_group(product)) {
          verdict.homomorphism = false;
          note("element list is not closed under composition");
          break;
        }
        const Image direct{restrict_aut(product, cut, Side::A), restrict_aut(product, cut, Side::B)};
        const Image via{compose(images[i].first, images[j].first), compose(images[i].second, images[j].second)};
        if (direct != via) {
          verdict.homomorphism = false;
          note("phi does not respect composition");
          break;
        }
      }
    }

    std::vector<Image> distinct = images;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    verdict.image_size = distinct.size();
    verdict.kernel_size = static_cast<std::size_t>(std::count_if(
        images.begin(), images.end(), [](const Image& im) { return is_identity(im.first) && is_identity(im.second); }));
    verdict.injective = distinct.size() == group.size() && verdict.kernel_size == 1;
    if (!verdict.injective) note("phi is not injective");
  }

  verdict.surjective = true;
  for (const Permutation& alpha : side_a_group.elements) {
    for (const Permutation& beta : side_b_group.elements) {
      const Permutation glued = glue_aut(alpha, beta, cut);
      if (!in_group(glued)) {
        verdict.surjective = false;
        note("a glued pair is missing from the group");
        break;
      }
    }
    if (!verdict.surjective) break;
  }
  return verdict;
}

}  // namespace reebsplit
