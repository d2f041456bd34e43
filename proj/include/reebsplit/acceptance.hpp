#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reebsplit/mesh.hpp"
#include "reebsplit/treeaut.hpp"

namespace reebsplit {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriteria = 8;

// Runs one acceptance criterion (1..8).
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();
// "PASS [id] title: detail (seconds)".
std::string format_criterion(const CriterionResult& result);

// Every permutation of the vertices, kept when it preserves adjacency,
// labels and the mark. Sorted. Only for small trees.
std::vector<Permutation> brute_force_automorphisms(const LabeledTree& tree, bool use_labels = true);

// Named closed sphere fixtures shared by the determinism check and selftest.
std::vector<std::pair<std::string, MeshWithField>> builtin_fixtures();

}  // namespace reebsplit
