#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace reebsplit {

// Vertex labels on a finite tree; adjacent labels must differ. An optional
// marked vertex must be fixed by every automorphism considered.
class LabeledTree {
 public:
  LabeledTree() = default;
  // Throws Error(InvalidTree) unless the edges form a tree on all vertices
  // with distinct labels at the ends of every edge.
  LabeledTree(std::vector<double> labels, std::vector<std::pair<int, int>> edges,
              std::optional<int> marked = std::nullopt);

  std::size_t size() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  double label(int v) const { return labels_[v]; }
  std::span<const double> labels() const { return labels_; }
  // Normalised (lo, hi) vertex pairs in lexicographic order; the index is
  // the edge id.
  std::span<const std::pair<int, int>> edges() const { return edges_; }
  const std::pair<int, int>& edge(int e) const { return edges_[e]; }
  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  std::optional<int> marked() const { return marked_; }
  int find_edge(int u, int v) const;

  LabeledTree with_marked(std::optional<int> marked) const;
  LabeledTree with_label(int v, double label) const;

 private:
  std::vector<double> labels_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::optional<int> marked_;
};

// Canonical string of a labeled tree (center-rooted AHU encoding carrying
// exact labels and the mark). Two trees have equal forms iff there is a
// label- and mark-preserving isomorphism between them.
std::string canonical_form(const LabeledTree& tree);
bool label_isomorphic(const LabeledTree& a, const LabeledTree& b);

// A vertex permutation, p[v] is the image of v.
using Permutation = std::vector<int>;

Permutation identity_permutation(std::size_t n);
// (a o b)(v) = a(b(v)).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
bool is_identity(const Permutation& p);
int element_order(const Permutation& p);

// Finite permutation group with every element stored, sorted
// lexicographically. `generators` is a subset that generates `elements`.
struct AutGroup {
  std::size_t degree = 0;
  std::vector<Permutation> elements;
  std::vector<Permutation> generators;

  std::size_t order() const { return elements.size(); }
  bool contains(const Permutation& p) const;
};

inline constexpr std::size_t kMaxGroupOrder = 10000;

// All label-preserving automorphisms (fixing the marked vertex if any).
// Colour refinement on (label, degree, mark) followed by backtracking.
// Throws GroupTooLarge past `limit` elements.
AutGroup enumerate_aut(const LabeledTree& tree, std::size_t limit = kMaxGroupOrder);

// All adjacency-preserving permutations, labels ignored (the mark is still
// honoured).
AutGroup enumerate_unlabeled_aut(const LabeledTree& tree, std::size_t limit = kMaxGroupOrder);

// Sorts and deduplicates a closed element list and picks generators. Does
// not check closure; see verify_group_axioms.
AutGroup make_group(std::size_t degree, std::vector<Permutation> elements);

// Closure of a generating set. Throws GroupTooLarge past `limit`.
AutGroup generate_group(std::size_t degree, const std::vector<Permutation>& generators,
                        std::size_t limit = kMaxGroupOrder);

std::size_t group_order(const AutGroup& group);
std::map<int, int> element_order_histogram(const AutGroup& group);
// Closure, identity and inverses, checked exhaustively.
bool verify_group_axioms(const AutGroup& group);

// Exhaustive isomorphism search between two small groups (order <= 64).
// Returns nullopt when the groups are too large to decide.
std::optional<bool> groups_isomorphic(const AutGroup& a, const AutGroup& b);

// Common fixed points of a group acting on a tree: either a nonempty
// connected subtree, or a single point inside an edge that some element
// reverses.
struct FixedSet {
  enum class Variant { Subtree, Midpoint };
  Variant variant = Variant::Subtree;
  std::vector<int> vertices;
  std::vector<int> edges;
  int midpoint_edge = -1;
  Permutation flip_witness;

  bool has_edge() const { return variant == Variant::Subtree && !edges.empty(); }
};

// Throws InternalInconsistency if neither variant applies.
FixedSet fixed_set(const AutGroup& group, const LabeledTree& tree);

// Result of subdividing an edge by a new vertex x and splitting the tree
// there. Side A holds the endpoint with the smaller label. In each side x is
// the last vertex and is marked.
struct TreeCut {
  int edge = -1;
  LabeledTree side_a;
  LabeledTree side_b;
  std::vector<int> a_to_tree;  // -1 for x
  std::vector<int> b_to_tree;
  std::vector<int> tree_to_a;  // -1 when the vertex lies on side B
  std::vector<int> tree_to_b;
  int x_a = -1;
  int x_b = -1;
};

enum class Side { A, B };

// Throws EdgeNotFound.
TreeCut cut_tree_at(const LabeledTree& tree, int edge);

// Restriction of a tree automorphism to one side of a cut. Throws
// SideNotInvariant unless it fixes the cut edge and maps the side onto itself.
Permutation restrict_aut(const Permutation& g, const TreeCut& cut, Side side);

// The automorphism of the whole tree acting as alpha on A and beta on B.
// Both must fix the cut vertex; throws SideNotInvariant otherwise.
Permutation glue_aut(const Permutation& alpha, const Permutation& beta, const TreeCut& cut);

// Element-wise check that g -> (g|A, g|B) is an isomorphism onto H x K.
// Failures are recorded, never thrown.
struct IsomorphismVerdict {
  bool well_defined = false;  // every element restricts to both sides
  bool into_product = false;  // restrictions lie in H and K
  bool homomorphism = false;  // closed, and phi(d o w) = phi(d) o phi(w)
  bool injective = false;     // images pairwise distinct, kernel trivial
  bool surjective = false;    // every glued pair of H x K is in G
  std::size_t kernel_size = 0;
  std::size_t image_size = 0;
  std::string detail;

  bool passed() const { return well_defined && into_product && homomorphism && injective && surjective; }
};

IsomorphismVerdict verify_isomorphism(const std::vector<Permutation>& group, const AutGroup& side_a_group,
                                      const AutGroup& side_b_group, const TreeCut& cut);

}  // namespace reebsplit
