#pragma once

#include <cstdint>

#include "reebsplit/mesh.hpp"
#include "reebsplit/treeaut.hpp"

namespace reebsplit {

// A labeled tree that can be realized as the Reeb graph of a field on the
// sphere: every non-leaf vertex has degree >= 3 and at least one lower and
// one upper neighbour.
class RealizableTree {
 public:
  // Throws Error(InvalidTree).
  explicit RealizableTree(LabeledTree tree);
  const LabeledTree& tree() const { return tree_; }

 private:
  LabeledTree tree_;
};

// Closed genus-0 mesh whose field has `tree` as Reeb graph. Each non-leaf
// vertex becomes a single saddle vertex whose link alternates deg - 1 times;
// edges become rings of `resolution` vertices; leaves become cone apexes.
// Critical vertices carry the tree labels exactly.
MeshWithField realize_tree(const RealizableTree& tree, int resolution = 6);

// Octahedron with height field z + index * eps, eps = 1e-6 of the range.
MeshWithField octahedron_height();

// Octahedron refined `levels` times by midpoint subdivision, projected to
// the unit sphere; the field is the height perturbed like octahedron_height.
MeshWithField subdivided_sphere(int levels);

// Disk made of one centre vertex and six neighbours alternating above and
// below it: a monkey saddle.
MeshWithField monkey_saddle_disk();

// Centre with one min leaf below and `branches` max leaves at equal label.
RealizableTree star_tree(int branches);

// Path a-b-c with two equal max leaves on b and two equal (higher) max
// leaves on c.
RealizableTree double_fork_tree();

// Random realizable tree with about n vertices, deterministic in seed.
// With symmetry k >= 2, k identical labeled branches are grafted at one
// vertex, so the automorphism group order is divisible by k!. Some seeds
// also hang k equal min leaves off that vertex, which then is the only
// vertex fixed by the group.
RealizableTree random_realizable_tree(int n, int symmetry, std::uint64_t seed);

// Independent uniform values in [0, 1) per vertex.
ScalarField random_field(const TriangleMesh& mesh, std::uint64_t seed);

}  // namespace reebsplit
