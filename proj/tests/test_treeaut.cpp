#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "reebsplit/acceptance.hpp"
#include "reebsplit/error.hpp"
#include "reebsplit/gen.hpp"
#include "reebsplit/treeaut.hpp"

using namespace reebsplit;

namespace {

LabeledTree path3() { return LabeledTree({0.0, 1.0, 0.0}, {{0, 1}, {1, 2}}); }

Permutation perm(std::initializer_list<int> p) { return Permutation(p); }

std::vector<std::pair<int, int>> random_edges(int n, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  return edges;
}

std::vector<double> random_labels(int n, const std::vector<std::pair<int, int>>& edges, std::mt19937_64& rng) {
  // Parent always has a smaller index, so labels can be drawn in order.
  std::vector<double> labels(n, 0.0);
  std::vector<int> parent(n, -1);
  for (const auto& [a, b] : edges) parent[b] = a;
  for (int v = 1; v < n; ++v) {
    int c = std::uniform_int_distribution<int>(0, 1)(rng);
    if (c >= labels[parent[v]]) ++c;
    labels[v] = c;
  }
  return labels;
}

}  // namespace

TEST(LabeledTree, RejectsInvalid) {
  EXPECT_THROW(LabeledTree({0.0, 1.0, 2.0}, {{0, 1}}), Error);            // too few edges
  EXPECT_THROW(LabeledTree({0.0, 0.0}, {{0, 1}}), Error);                 // equal adjacent labels
  EXPECT_THROW(LabeledTree({0.0, 1.0, 2.0}, {{0, 1}, {0, 1}}), Error);    // repeated edge
  EXPECT_THROW(LabeledTree({0.0, 1.0, 2.0, 3.0}, {{0, 1}, {1, 0}, {2, 3}}), Error);
  EXPECT_THROW(LabeledTree({0.0, 1.0}, {{0, 2}}), Error);
  EXPECT_THROW(LabeledTree({0.0, 1.0}, {{0, 1}}, 5), Error);
}

TEST(EnumerateAut, PathMinMaxIsTrivial) {
  const AutGroup g = enumerate_aut(LabeledTree({0.0, 1.0}, {{0, 1}}));
  EXPECT_EQ(g.order(), 1u);
  EXPECT_EQ(element_order_histogram(g), (std::map<int, int>{{1, 1}}));
}

TEST(EnumerateAut, ThreeStarIsS3) {
  const LabeledTree t = star_tree(3).tree();
  const AutGroup g = enumerate_aut(t);
  EXPECT_EQ(g.order(), 6u);
  EXPECT_EQ(g.elements, brute_force_automorphisms(t));
  EXPECT_EQ(element_order_histogram(g), (std::map<int, int>{{1, 1}, {2, 3}, {3, 2}}));
  EXPECT_TRUE(verify_group_axioms(g));
}

TEST(EnumerateAut, DoubleForkIsKlein) {
  const LabeledTree t = double_fork_tree().tree();
  const AutGroup g = enumerate_aut(t);
  EXPECT_EQ(g.order(), 4u);
  EXPECT_EQ(g.elements, brute_force_automorphisms(t));
  EXPECT_EQ(element_order_histogram(g), (std::map<int, int>{{1, 1}, {2, 3}}));
}

TEST(EnumerateAut, StarsHaveFactorialOrder) {
  std::size_t factorial = 1;
  for (int n = 1; n <= 6; ++n) {
    factorial *= static_cast<std::size_t>(n);
    std::vector<double> labels{1.0, 0.0};
    std::vector<std::pair<int, int>> edges{{0, 1}};
    for (int i = 0; i < n; ++i) {
      labels.push_back(2.0);
      edges.emplace_back(0, 2 + i);
    }
    EXPECT_EQ(enumerate_aut(LabeledTree(labels, edges)).order(), factorial);
  }
}

TEST(EnumerateAut, MatchesBruteForceOnRandomTrees) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + i % 9;
    const auto edges = random_edges(n, rng);
    LabeledTree t(random_labels(n, edges, rng), edges);
    if (i % 4 == 0) t = t.with_marked(static_cast<int>(rng() % static_cast<unsigned>(n)));
    EXPECT_EQ(enumerate_aut(t, 1000000).elements, brute_force_automorphisms(t)) << canonical_form(t);
    EXPECT_EQ(enumerate_unlabeled_aut(t, 1000000).elements, brute_force_automorphisms(t, false))
        << canonical_form(t);
  }
}

TEST(EnumerateAut, ElementsPreserveLabels) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const LabeledTree t = random_realizable_tree(12, 3, seed).tree();
    for (const Permutation& p : enumerate_aut(t).elements) {
      for (int v = 0; v < static_cast<int>(t.size()); ++v) EXPECT_EQ(t.label(p[v]), t.label(v));
    }
  }
}

TEST(EnumerateAut, AffineLabelChangeKeepsGroup) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LabeledTree t = random_realizable_tree(10, 2, seed).tree();
    std::vector<double> labels(t.labels().begin(), t.labels().end());
    for (double& l : labels) l = 3.0 * l + 11.0;
    const LabeledTree u(labels, {t.edges().begin(), t.edges().end()});
    EXPECT_EQ(enumerate_aut(t).elements, enumerate_aut(u).elements);
  }
}

TEST(EnumerateAut, SymmetricGraftOrderDivisibleByFactorial) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    EXPECT_EQ(enumerate_aut(random_realizable_tree(14, 3, seed).tree()).order() % 6, 0u) << seed;
  }
}

TEST(EnumerateAut, GroupTooLarge) {
  std::vector<double> labels{1.0};
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 9; ++i) {
    labels.push_back(2.0);
    edges.emplace_back(0, i + 1);
  }
  try {
    enumerate_aut(LabeledTree(labels, edges));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GroupTooLarge);
  }
}

TEST(Canonical, IsomorphismInvariant) {
  const LabeledTree a({0.0, 1.0, 2.0, 2.0}, {{0, 1}, {1, 2}, {1, 3}});
  const LabeledTree b({2.0, 2.0, 1.0, 0.0}, {{2, 3}, {2, 0}, {2, 1}});
  const LabeledTree c({0.0, 1.0, 2.0, 3.0}, {{0, 1}, {1, 2}, {1, 3}});
  EXPECT_TRUE(label_isomorphic(a, b));
  EXPECT_FALSE(label_isomorphic(a, c));
  EXPECT_FALSE(label_isomorphic(a, a.with_marked(2)));
  EXPECT_TRUE(label_isomorphic(a.with_marked(2), a.with_marked(3)));
}

TEST(Permutations, Basics) {
  const Permutation a = perm({1, 2, 0});
  const Permutation b = perm({1, 0, 2});
  EXPECT_EQ(compose(a, b), perm({2, 1, 0}));
  EXPECT_EQ(compose(a, inverse(a)), identity_permutation(3));
  EXPECT_EQ(element_order(a), 3);
  EXPECT_EQ(element_order(b), 2);
  EXPECT_TRUE(is_identity(identity_permutation(4)));
}

TEST(Groups, GenerateAndAxioms) {
  const AutGroup s3 = generate_group(3, {perm({1, 2, 0}), perm({1, 0, 2})});
  EXPECT_EQ(group_order(s3), 6u);
  EXPECT_TRUE(verify_group_axioms(s3));
  AutGroup broken = s3;
  broken.elements.pop_back();
  EXPECT_FALSE(verify_group_axioms(broken));
  const AutGroup trivial = generate_group(3, {});
  EXPECT_EQ(trivial.order(), 1u);
  EXPECT_EQ(element_order_histogram(trivial), (std::map<int, int>{{1, 1}}));
  EXPECT_THROW(generate_group(9, {perm({1, 2, 3, 4, 5, 6, 7, 8, 0}), perm({1, 0, 2, 3, 4, 5, 6, 7, 8})}, 100), Error);
}

TEST(Groups, IsomorphismSearch) {
  const AutGroup z4 = generate_group(4, {perm({1, 2, 3, 0})});
  const AutGroup klein = generate_group(4, {perm({1, 0, 3, 2}), perm({2, 3, 0, 1})});
  const AutGroup klein2 = generate_group(4, {perm({1, 0, 2, 3}), perm({0, 1, 3, 2})});
  EXPECT_EQ(groups_isomorphic(z4, klein), false);
  EXPECT_EQ(groups_isomorphic(klein, klein2), true);
  const AutGroup s3 = generate_group(3, {perm({1, 2, 0}), perm({1, 0, 2})});
  const AutGroup z6 = generate_group(5, {perm({1, 2, 0, 4, 3})});
  EXPECT_EQ(groups_isomorphic(s3, z6), false);
}

TEST(FixedSet, PathSwapFixesCentre) {
  const LabeledTree t = path3();
  const AutGroup g = enumerate_aut(t);
  ASSERT_EQ(g.order(), 2u);
  const FixedSet f = fixed_set(g, t);
  EXPECT_EQ(f.variant, FixedSet::Variant::Subtree);
  EXPECT_EQ(f.vertices, std::vector<int>{1});
  EXPECT_TRUE(f.edges.empty());
  EXPECT_FALSE(f.has_edge());
}

TEST(FixedSet, EdgeFlipGivesMidpoint) {
  const LabeledTree t({0.0, 1.0}, {{0, 1}});
  const AutGroup g = enumerate_unlabeled_aut(t);
  const FixedSet f = fixed_set(g, t);
  EXPECT_EQ(f.variant, FixedSet::Variant::Midpoint);
  EXPECT_EQ(f.midpoint_edge, 0);
  EXPECT_EQ(f.flip_witness, perm({1, 0}));
}

TEST(FixedSet, ThreeStarFixesMinEdge) {
  const LabeledTree t = star_tree(3).tree();
  const FixedSet f = fixed_set(enumerate_aut(t), t);
  EXPECT_EQ(f.variant, FixedSet::Variant::Subtree);
  EXPECT_EQ(f.vertices, (std::vector<int>{0, 1}));
  EXPECT_EQ(f.edges, std::vector<int>{t.find_edge(0, 1)});
}

TEST(FixedSet, NoLabelPreservingEdgeReversal) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const LabeledTree t = random_realizable_tree(14, 1 + seed % 4, seed).tree();
    const AutGroup g = enumerate_aut(t);
    for (const Permutation& p : g.elements) {
      for (const auto& [a, b] : t.edges()) EXPECT_FALSE(p[a] == b && p[b] == a);
    }
    EXPECT_EQ(fixed_set(g, t).variant, FixedSet::Variant::Subtree);
  }
}

TEST(CutTree, SingleEdge) {
  const LabeledTree t({0.0, 1.0}, {{0, 1}});
  const TreeCut cut = cut_tree_at(t, 0);
  EXPECT_EQ(cut.side_a.size(), 2u);
  EXPECT_EQ(cut.side_b.size(), 2u);
  EXPECT_EQ(cut.side_a.marked(), cut.x_a);
  EXPECT_EQ(cut.side_b.marked(), cut.x_b);
  EXPECT_EQ(cut.side_a.label(cut.x_a), 0.5);
  EXPECT_EQ(cut.side_b.label(cut.x_b), 0.5);
  EXPECT_EQ(cut.a_to_tree[cut.x_a], -1);
  EXPECT_EQ(cut.side_a.label(1 - cut.x_a), 0.0);
  EXPECT_EQ(cut.side_b.label(1 - cut.x_b), 1.0);
}

TEST(CutTree, ThreeStarAtMinEdge) {
  const LabeledTree t = star_tree(3).tree();
  const TreeCut cut = cut_tree_at(t, t.find_edge(0, 1));
  EXPECT_EQ(cut.side_a.size(), 2u);
  EXPECT_EQ(cut.side_b.size(), 5u);
  EXPECT_EQ(cut.side_b.degree(cut.x_b), 1);
  EXPECT_GT(cut.side_b.label(cut.x_b), 0.0);
  EXPECT_LT(cut.side_b.label(cut.x_b), 1.0);
  EXPECT_THROW(cut_tree_at(t, 17), Error);
}

TEST(CutTree, SidesReconstituteTree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LabeledTree t = random_realizable_tree(12, 1 + seed % 3, seed).tree();
    for (int e = 0; e < static_cast<int>(t.num_edges()); ++e) {
      const TreeCut cut = cut_tree_at(t, e);
      EXPECT_EQ(cut.side_a.size() + cut.side_b.size(), t.size() + 2);
      std::vector<int> hits(t.size(), 0);
      for (int v : cut.a_to_tree) {
        if (v >= 0) ++hits[v];
      }
      for (int v : cut.b_to_tree) {
        if (v >= 0) ++hits[v];
      }
      for (int h : hits) EXPECT_EQ(h, 1);
      const auto& [u, w] = t.edge(e);
      const int lower = t.label(u) < t.label(w) ? u : w;
      EXPECT_GE(cut.tree_to_a[lower], 0);
    }
  }
}

TEST(RestrictGlue, ThreeStar) {
  const LabeledTree t = star_tree(3).tree();
  const AutGroup g = enumerate_aut(t);
  const TreeCut cut = cut_tree_at(t, t.find_edge(0, 1));
  const AutGroup ga = enumerate_aut(cut.side_a);
  const AutGroup gb = enumerate_aut(cut.side_b);
  EXPECT_EQ(ga.order(), 1u);
  EXPECT_EQ(gb.order(), 6u);
  for (const Permutation& p : g.elements) {
    const Permutation a = restrict_aut(p, cut, Side::A);
    const Permutation b = restrict_aut(p, cut, Side::B);
    EXPECT_TRUE(is_identity(a));
    EXPECT_TRUE(gb.contains(b));
    EXPECT_EQ(glue_aut(a, b, cut), p);
  }
  // Gluing the identity on A with a 3-cycle on B lands in the group.
  for (const Permutation& b : gb.elements) {
    if (element_order(b) == 3) EXPECT_TRUE(g.contains(glue_aut(ga.elements[0], b, cut)));
  }
  const IsomorphismVerdict v = verify_isomorphism(g.elements, ga, gb, cut);
  EXPECT_TRUE(v.passed()) << v.detail;
  EXPECT_EQ(v.kernel_size, 1u);
  EXPECT_EQ(v.image_size, 6u);
}

TEST(RestrictGlue, RestrictionIsMultiplicativeAndGlueOrderIsLcm) {
  int cases = 0;
  for (std::uint64_t seed = 0; seed < 200 && cases < 40; ++seed) {
    const LabeledTree t = random_realizable_tree(14, 2 + seed % 3, seed).tree();
    const AutGroup g = enumerate_aut(t);
    const FixedSet f = fixed_set(g, t);
    if (!f.has_edge() || g.order() < 2) continue;
    const TreeCut cut = cut_tree_at(t, f.edges.front());
    std::mt19937_64 rng(seed);
    auto any = [&](const AutGroup& group) { return group.elements[rng() % group.order()]; };
    const Permutation d = any(g), w = any(g);
    for (Side side : {Side::A, Side::B}) {
      EXPECT_EQ(restrict_aut(compose(d, w), cut, side),
                compose(restrict_aut(d, cut, side), restrict_aut(w, cut, side)));
    }
    const Permutation a = any(enumerate_aut(cut.side_a));
    const Permutation b = any(enumerate_aut(cut.side_b));
    EXPECT_EQ(element_order(glue_aut(a, b, cut)), std::lcm(element_order(a), element_order(b)));
    ++cases;
  }
  EXPECT_GE(cases, 20);
}

TEST(RestrictGlue, SideNotInvariant) {
  const LabeledTree t = path3();
  const AutGroup g = enumerate_aut(t);
  const TreeCut cut = cut_tree_at(t, 0);
  const Permutation swap = g.elements.back();
  ASSERT_FALSE(is_identity(swap));
  try {
    restrict_aut(swap, cut, Side::A);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SideNotInvariant);
  }
}

TEST(VerifyIsomorphism, TrivialGroups) {
  const LabeledTree t({0.0, 1.0}, {{0, 1}});
  const TreeCut cut = cut_tree_at(t, 0);
  const IsomorphismVerdict v =
      verify_isomorphism(enumerate_aut(t).elements, enumerate_aut(cut.side_a), enumerate_aut(cut.side_b), cut);
  EXPECT_TRUE(v.passed());
}

TEST(VerifyIsomorphism, DroppedElementBreaksSurjectivity) {
  const LabeledTree t = star_tree(3).tree();
  const TreeCut cut = cut_tree_at(t, t.find_edge(0, 1));
  std::vector<Permutation> elements = enumerate_aut(t).elements;
  elements.pop_back();
  const IsomorphismVerdict v = verify_isomorphism(elements, enumerate_aut(cut.side_a), enumerate_aut(cut.side_b), cut);
  EXPECT_FALSE(v.surjective);
  EXPECT_FALSE(v.passed());
}
