#include "reebsplit/acceptance.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "reebsplit/cli.hpp"
#include "reebsplit/error.hpp"
#include "reebsplit/field.hpp"
#include "reebsplit/gen.hpp"
#include "reebsplit/io.hpp"
#include "reebsplit/reeb.hpp"
#include "reebsplit/split.hpp"

namespace reebsplit {

namespace fs = std::filesystem;

std::vector<Permutation> brute_force_automorphisms(const LabeledTree& tree, bool use_labels) {
  const int n = static_cast<int>(tree.size());
  std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : tree.edges()) adjacent[a][b] = adjacent[b][a] = 1;
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> found;
  do {
    bool ok = !tree.marked() || p[*tree.marked()] == *tree.marked();
    for (int v = 0; ok && v < n; ++v) ok = !use_labels || tree.label(p[v]) == tree.label(v);
    for (const auto& [a, b] : tree.edges()) {
      if (!ok) break;
      ok = adjacent[p[a]][p[b]];
    }
    if (ok) found.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return found;
}

std::vector<std::pair<std::string, MeshWithField>> builtin_fixtures() {
  std::vector<std::pair<std::string, MeshWithField>> fixtures;
  fixtures.emplace_back("octahedron", octahedron_height());
  fixtures.emplace_back("sphere-1", subdivided_sphere(1));
  fixtures.emplace_back("sphere-2", subdivided_sphere(2));
  for (int n = 2; n <= 5; ++n) fixtures.emplace_back("bumps-" + std::to_string(n), realize_tree(star_tree(n)));
  fixtures.emplace_back("double-fork", realize_tree(double_fork_tree()));
  {
    MeshWithField m = subdivided_sphere(1);
    m.field = random_field(m.mesh, 7);
    fixtures.emplace_back("random-field-7", std::move(m));
  }
  for (int seed = 1; seed <= 6; ++seed) {
    fixtures.emplace_back("tree-" + std::to_string(seed),
                          realize_tree(random_realizable_tree(6 + 2 * seed, 1 + seed % 4, seed)));
  }
  return fixtures;
}

namespace {

using Rng = std::mt19937_64;

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<std::pair<int, int>> random_tree_edges(int n, Rng& rng) {
  if (n == 1) return {};
  if (n == 2) return {{0, 1}};
  std::vector<int> prufer(n - 2);
  for (int& x : prufer) x = pick(rng, 0, n - 1);
  std::vector<int> degree(n, 1);
  for (int x : prufer) ++degree[x];
  std::vector<std::pair<int, int>> edges;
  for (int x : prufer) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, x);
    --degree[leaf];
    --degree[x];
  }
  int u = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) {
      if (u < 0) {
        u = v;
      } else {
        edges.emplace_back(u, v);
      }
    }
  }
  return edges;
}

// Labels from {0, .., colours-1}, adjacent vertices different.
std::vector<double> random_tree_labels(int n, const std::vector<std::pair<int, int>>& edges, int colours, Rng& rng) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<double> labels(n, -1.0);
  labels[0] = pick(rng, 0, colours - 1);
  std::vector<int> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const int v = queue[i];
    for (int u : adj[v]) {
      if (labels[u] >= 0) continue;
      int c = pick(rng, 0, colours - 2);
      if (c >= labels[v]) ++c;
      labels[u] = c;
      queue.push_back(u);
    }
  }
  return labels;
}

// Small labeled trees for the brute-force comparison.
std::vector<LabeledTree> oracle_corpus() {
  std::vector<LabeledTree> trees;
  Rng rng(20240601);
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + i % 8;
    LabeledTree tree;
    switch (i % 3) {
      case 0: {
        auto edges = random_tree_edges(n, rng);
        tree = LabeledTree(random_tree_labels(n, edges, 3, rng), edges);
        break;
      }
      case 1: {
        auto edges = random_tree_edges(n, rng);
        tree = LabeledTree(random_tree_labels(n, edges, 2, rng), edges);
        break;
      }
      default: {
        tree = random_realizable_tree(n, 1 + i % 3, static_cast<std::uint64_t>(i)).tree();
        if (tree.size() > 9) tree = random_realizable_tree(4, 1, static_cast<std::uint64_t>(i)).tree();
        break;
      }
    }
    if (i % 5 == 4) tree = tree.with_marked(pick(rng, 0, static_cast<int>(tree.size()) - 1));
    trees.push_back(std::move(tree));
  }
  return trees;
}

// Sphere fields for the decomposition suite: mostly realized random trees,
// every fourth one a random field on a subdivided octahedron.
MeshWithField sphere_item(std::uint64_t seed, int index) {
  if (index % 4 == 3) {
    MeshWithField m = subdivided_sphere(1);
    m.field = random_field(m.mesh, seed);
    return m;
  }
  return realize_tree(random_realizable_tree(4 + index % 13, 1 + index % 4, seed));
}

bool is_fixed_by_all(const AutGroup& g, int v) {
  return std::all_of(g.elements.begin(), g.elements.end(), [&](const Permutation& p) { return p[v] == v; });
}

// Independent check of a fixed set against the group; empty string if fine.
std::string check_fixed_set(const AutGroup& group, const LabeledTree& tree, const FixedSet& fixed) {
  const int n = static_cast<int>(tree.size());
  std::vector<int> vertices;
  for (int v = 0; v < n; ++v) {
    if (is_fixed_by_all(group, v)) vertices.push_back(v);
  }
  if (!vertices.empty()) {
    if (fixed.variant != FixedSet::Variant::Subtree) return "fixed vertices exist but a midpoint was returned";
    std::vector<int> got = fixed.vertices;
    std::sort(got.begin(), got.end());
    if (got != vertices) return "fixed vertex set differs";
    std::vector<int> edges;
    for (int e = 0; e < static_cast<int>(tree.num_edges()); ++e) {
      const auto& [a, b] = tree.edge(e);
      if (is_fixed_by_all(group, a) && is_fixed_by_all(group, b)) edges.push_back(e);
    }
    std::vector<int> got_edges = fixed.edges;
    std::sort(got_edges.begin(), got_edges.end());
    if (got_edges != edges) return "fixed edge set differs";
    if (edges.size() + 1 != vertices.size()) return "fixed set is not connected";
    return {};
  }
  if (fixed.variant != FixedSet::Variant::Midpoint) return "no fixed vertex but a subtree was returned";
  if (fixed.midpoint_edge < 0 || fixed.midpoint_edge >= static_cast<int>(tree.num_edges())) return "bad edge";
  const auto& [a, b] = tree.edge(fixed.midpoint_edge);
  for (const Permutation& p : group.elements) {
    if (!((p[a] == a && p[b] == b) || (p[a] == b && p[b] == a))) return "midpoint edge is moved";
  }
  const Permutation& w = fixed.flip_witness;
  if (!group.contains(w) || w[a] != b || w[b] != a) return "flip witness does not reverse the edge";
  return {};
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CriterionResult round_trip() {
  CriterionResult r{1, "round trip build_reeb(realize_tree(T)) = T", false, {}, 0.0};
  const auto start = Clock::now();
  int ok = 0;
  std::string first_failure;
  constexpr int kTrees = 500;
  for (int i = 0; i < kTrees; ++i) {
    const auto seed = static_cast<std::uint64_t>(10000 + i);
    try {
      const RealizableTree t = random_realizable_tree(2 + i % 15, 1 + i % 4, seed);
      if (t.tree().size() > 20) throw Error(ErrorCode::InvalidTree, "more than 20 vertices");
      const MeshWithField m = realize_tree(t);
      const SurfaceReport s = validate_surface(m.mesh);
      const FieldClassReport cls = classify_field(m.mesh, m.field);
      bool all_cubic = true;
      for (int v = 0; v < static_cast<int>(t.tree().size()); ++v) {
        all_cubic = all_cubic && (t.tree().degree(v) == 1 || t.tree().degree(v) == 3);
      }
      const FieldClass expected = all_cubic ? FieldClass::Morse : FieldClass::FGeneric;
      if (!s.closed || s.genus != 0) throw Error(ErrorCode::GenusNotZero, "not a sphere");
      if (cls.cls != expected) throw Error(ErrorCode::InvalidFieldClass, "unexpected field class");
      if (!label_isomorphic(reeb_tree(build_reeb(m.mesh, m.field)), t.tree())) {
        throw Error(ErrorCode::InternalInconsistency, "Reeb tree differs");
      }
      ++ok;
    } catch (const Error& e) {
      if (first_failure.empty()) first_failure = "seed " + std::to_string(seed) + ": " + e.what();
    }
  }
  r.seconds = seconds_since(start);
  r.passed = ok == kTrees && r.seconds < 60.0;
  r.detail = std::to_string(ok) + "/" + std::to_string(kTrees) + " trees";
  if (!first_failure.empty()) r.detail += "; " + first_failure;
  if (r.seconds >= 60.0) r.detail += "; over the 60 s budget";
  return r;
}

CriterionResult oracle_agreement() {
  CriterionResult r{2, "enumerate_aut agrees with brute force on small trees", false, {}, 0.0};
  const auto start = Clock::now();
  int compared = 0, agree = 0;
  std::string first_failure;
  for (const LabeledTree& tree : oracle_corpus()) {
    if (tree.size() > 9) continue;
    ++compared;
    const auto expected = brute_force_automorphisms(tree);
    const AutGroup got = enumerate_aut(tree, 1000000);
    if (got.elements == expected && verify_group_axioms(got)) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = "mismatch on " + canonical_form(tree);
    }
  }
  r.seconds = seconds_since(start);
  r.passed = compared >= 200 && agree == compared;
  r.detail = std::to_string(agree) + "/" + std::to_string(compared) + " trees";
  if (!first_failure.empty()) r.detail += "; " + first_failure;
  return r;
}

CriterionResult canonical_orders() {
  CriterionResult r{3, "star and double-fork group orders", false, {}, 0.0};
  const auto start = Clock::now();
  std::ostringstream detail;
  bool ok = true;
  int factorial = 1;
  for (int n = 2; n <= 5; ++n) {
    factorial *= n;
    const MeshWithField m = realize_tree(star_tree(n));
    const LabeledTree tree = reeb_tree(build_reeb(m.mesh, m.field));
    const std::size_t order = enumerate_aut(tree).order();
    const std::size_t oracle = brute_force_automorphisms(tree).size();
    ok = ok && order == static_cast<std::size_t>(factorial) && oracle == order;
    detail << "star" << n << "=" << order << " ";
  }
  const MeshWithField m = realize_tree(double_fork_tree());
  const AutGroup g = enumerate_aut(reeb_tree(build_reeb(m.mesh, m.field)));
  const auto histogram = element_order_histogram(g);
  ok = ok && g.order() == 4 && histogram == std::map<int, int>{{1, 1}, {2, 3}};
  detail << "double-fork=" << g.order() << " {";
  for (const auto& [order, count] : histogram) detail << order << ":" << count << (order == histogram.rbegin()->first ? "" : ",");
  detail << "}";
  r.seconds = seconds_since(start);
  r.passed = ok;
  r.detail = detail.str();
  return r;
}

CriterionResult fixed_sets() {
  CriterionResult r{4, "fixed sets of tree automorphism groups", false, {}, 0.0};
  const auto start = Clock::now();
  Rng rng(4242);
  constexpr int kTrees = 1000;
  int ok = 0, midpoints = 0, labeled_midpoints = 0, labeled_ok = 0;
  std::string first_failure;
  for (int i = 0; i < kTrees; ++i) {
    LabeledTree tree;
    AutGroup full;
    for (;;) {
      const int n = pick(rng, 2, 9);
      auto edges = random_tree_edges(n, rng);
      tree = LabeledTree(random_tree_labels(n, edges, 3, rng), edges);
      try {
        full = enumerate_unlabeled_aut(tree);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::GroupTooLarge) throw;
      }
    }
    std::vector<Permutation> gens;
    const int count = pick(rng, 0, 2);
    for (int k = 0; k < count; ++k) {
      gens.push_back(full.elements[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(full.order()) - 1))]);
    }
    const AutGroup sub = generate_group(tree.size(), gens);
    std::string problem;
    try {
      const FixedSet fixed = fixed_set(sub, tree);
      if (fixed.variant == FixedSet::Variant::Midpoint) ++midpoints;
      problem = check_fixed_set(sub, tree, fixed);
    } catch (const Error& e) {
      problem = e.what();
    }
    try {
      const AutGroup labeled = enumerate_aut(tree);
      const FixedSet fixed = fixed_set(labeled, tree);
      if (fixed.variant == FixedSet::Variant::Midpoint) ++labeled_midpoints;
      const std::string labeled_problem = check_fixed_set(labeled, tree, fixed);
      if (labeled_problem.empty()) {
        ++labeled_ok;
      } else if (problem.empty()) {
        problem = "label-preserving group: " + labeled_problem;
      }
    } catch (const Error& e) {
      if (problem.empty()) problem = e.what();
    }
    if (problem.empty()) {
      ++ok;
    } else if (first_failure.empty()) {
      first_failure = canonical_form(tree) + ": " + problem;
    }
  }
  r.seconds = seconds_since(start);
  r.passed = ok == kTrees && labeled_ok == kTrees && labeled_midpoints == 0;
  r.detail = std::to_string(ok) + "/" + std::to_string(kTrees) + " subgroups (" + std::to_string(midpoints) +
             " midpoints), label-preserving midpoints: " + std::to_string(labeled_midpoints);
  if (!first_failure.empty()) r.detail += "; " + first_failure;
  return r;
}

CriterionResult decomposition() {
  CriterionResult r{5, "product decomposition at every fixed edge", false, {}, 0.0};
  const auto start = Clock::now();
  constexpr int kFields = 200;
  int accepted = 0, passed = 0, hypothesis_fails = 0, cuts = 0;
  std::string first_failure;
  for (int i = 0; accepted < kFields && i < 5 * kFields; ++i) {
    const auto seed = static_cast<std::uint64_t>(50000 + i);
    try {
      const MeshWithField m = sphere_item(seed, i);
      const AllEdgesReport all = verify_all_fixed_edges(m.mesh, m.field);
      if (all.hypothesis_failure) {
        ++hypothesis_fails;
        continue;
      }
      ++accepted;
      bool ok = !all.reports.empty();
      for (const SplitReport& rep : all.reports) {
        ++cuts;
        const IsomorphismVerdict& v = rep.verdict;
        const bool checks = rep.passed() && rep.disk_a.connected && rep.disk_b.connected && rep.disk_a.euler == 1 &&
                            rep.disk_b.euler == 1 && rep.disk_a.boundary_count == 1 &&
                            rep.disk_b.boundary_count == 1 && rep.disk_a.boundary_constant &&
                            rep.disk_b.boundary_constant && rep.disk_a.field_valid && rep.disk_b.field_valid &&
                            rep.group_order == rep.group_a_order * rep.group_b_order && v.injective &&
                            v.surjective && v.homomorphism;
        if (!checks && first_failure.empty()) {
          first_failure = "seed " + std::to_string(seed) + " edge " + std::to_string(rep.edge);
        }
        ok = ok && checks;
      }
      if (ok) ++passed;
    } catch (const Error& e) {
      ++accepted;
      if (first_failure.empty()) first_failure = "seed " + std::to_string(seed) + ": " + e.what();
    }
  }
  r.seconds = seconds_since(start);
  r.passed = accepted == kFields && passed == kFields && r.seconds < 120.0;
  r.detail = std::to_string(passed) + "/" + std::to_string(accepted) + " fields, " + std::to_string(cuts) +
             " cuts, " + std::to_string(hypothesis_fails) + " skipped without a fixed edge";
  if (!first_failure.empty()) r.detail += "; " + first_failure;
  if (r.seconds >= 120.0) r.detail += "; over the 120 s budget";
  return r;
}

CriterionResult euler_identity() {
  CriterionResult r{6, "Euler identity for fields and cuts", false, {}, 0.0};
  const auto start = Clock::now();
  std::vector<MeshWithField> fields;
  for (auto& [name, m] : builtin_fixtures()) fields.push_back(std::move(m));
  for (int i = 0; i < 150; ++i) fields.push_back(sphere_item(static_cast<std::uint64_t>(60000 + i), i));
  for (int i = 0; i < 60; ++i) {
    MeshWithField m = subdivided_sphere(i % 3);
    m.field = random_field(m.mesh, static_cast<std::uint64_t>(70000 + i));
    fields.push_back(std::move(m));
  }
  int field_ok = 0, cut_count = 0, cut_ok = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const MeshWithField& m = fields[i];
    try {
      const FieldClassReport cls = classify_field(m.mesh, m.field);
      if (cls.valid() && cls.euler_sum() == 2) {
        ++field_ok;
      } else if (first_failure.empty()) {
        first_failure = "field " + std::to_string(i) + ": #min + #max - sum = " + std::to_string(cls.euler_sum());
      }
      const ReebGraph graph = build_reeb(m.mesh, m.field);
      for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
        ++cut_count;
        const double c = choose_cut_value(m.field, graph, e);
        const CutResult cut = cut_along_cycle(m.mesh, m.field, level_cycle(m.mesh, m.field, graph, e, c));
        if (cut.below.mesh.euler_characteristic() + cut.above.mesh.euler_characteristic() == 2) {
          ++cut_ok;
        } else if (first_failure.empty()) {
          first_failure = "field " + std::to_string(i) + " edge " + std::to_string(e) + ": chi sum differs";
        }
      }
    } catch (const Error& e) {
      if (first_failure.empty()) first_failure = "field " + std::to_string(i) + ": " + e.what();
    }
  }
  r.seconds = seconds_since(start);
  r.passed = field_ok == static_cast<int>(fields.size()) && cut_ok == cut_count;
  r.detail = std::to_string(field_ok) + "/" + std::to_string(fields.size()) + " fields, " + std::to_string(cut_ok) +
             "/" + std::to_string(cut_count) + " cuts";
  if (!first_failure.empty()) r.detail += "; " + first_failure;
  return r;
}

CriterionResult no_edge_reversal() {
  CriterionResult r{7, "no label-preserving automorphism reverses an edge", false, {}, 0.0};
  const auto start = Clock::now();
  std::vector<LabeledTree> trees = oracle_corpus();
  for (int i = 0; i < 200; ++i) {
    const MeshWithField m = sphere_item(static_cast<std::uint64_t>(80000 + i), i);
    trees.push_back(reeb_tree(build_reeb(m.mesh, m.field)));
  }
  std::size_t elements = 0, counterexamples = 0;
  for (const LabeledTree& tree : trees) {
    const AutGroup group = enumerate_aut(tree, 1000000);
    for (const Permutation& p : group.elements) {
      ++elements;
      for (const auto& [a, b] : tree.edges()) {
        if (p[a] == b && p[b] == a) ++counterexamples;
      }
    }
  }
  r.seconds = seconds_since(start);
  r.passed = counterexamples == 0;
  r.detail = std::to_string(trees.size()) + " groups, " + std::to_string(elements) + " elements, " +
             std::to_string(counterexamples) + " counterexamples";
  return r;
}

CriterionResult determinism() {
  CriterionResult r{8, "reeb, aut and split outputs are reproducible", false, {}, 0.0};
  const auto start = Clock::now();
  const fs::path dir = fs::temp_directory_path() / ("reebsplit-determinism-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  int runs = 0, identical = 0;
  std::string first_failure;
  for (const auto& [name, m] : builtin_fixtures()) {
    const fs::path file = dir / (name + ".json");
    write_text_file(file, mesh_to_json(m).dump(2) + "\n");
    const std::string in = file.string();
    const std::vector<std::vector<std::string>> commands{
        {"reeb", "--input", in, "--json"},
        {"reeb", "--input", in, "--dot", "-"},
        {"aut", "--input", in, "--json"},
        {"aut", "--input", in},
        {"split", "--input", in, "--json"},
        {"split", "--input", in, "--all-edges", "--json"},
        {"split", "--input", in, "--all-edges"},
    };
    for (const auto& args : commands) {
      std::string outputs[2];
      int codes[2];
      for (int k = 0; k < 2; ++k) {
        std::ostringstream out, err;
        codes[k] = run_cli(args, out, err);
        outputs[k] = out.str() + "\x1f" + err.str();
      }
      ++runs;
      if (outputs[0] == outputs[1] && codes[0] == codes[1] && codes[0] == 0 && outputs[0].size() > 1) {
        ++identical;
      } else if (first_failure.empty()) {
        first_failure = name + ": " + args[0] + " (exit " + std::to_string(codes[0]) + ")";
      }
    }
  }
  fs::remove_all(dir);
  r.seconds = seconds_since(start);
  r.passed = runs > 0 && identical == runs;
  r.detail = std::to_string(identical) + "/" + std::to_string(runs) + " command pairs identical";
  if (!first_failure.empty()) r.detail += "; " + first_failure;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  static const std::function<CriterionResult()> criteria[] = {
      round_trip, oracle_agreement, canonical_orders, fixed_sets,
      decomposition, euler_identity, no_edge_reversal, determinism,
  };
  if (id < 1 || id > kCriteria) throw Error(ErrorCode::IndexOutOfRange, "no criterion " + std::to_string(id));
  try {
    return criteria[id - 1]();
  } catch (const std::exception& e) {
    return {id, "criterion " + std::to_string(id), false, e.what(), 0.0};
  }
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriteria; ++id) results.push_back(run_criterion(id));
  return results;
}

std::string format_criterion(const CriterionResult& r) {
  char time[32];
  std::snprintf(time, sizeof time, "%.2f", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title + ": " + r.detail +
         " (" + time + " s)";
}

}  // namespace reebsplit
