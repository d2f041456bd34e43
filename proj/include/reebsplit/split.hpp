#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reebsplit/io.hpp"
#include "reebsplit/mesh.hpp"
#include "reebsplit/reeb.hpp"
#include "reebsplit/treeaut.hpp"

namespace reebsplit {

// Checks on one cut piece. `reeb_matches_subtree` compares the piece's own
// Reeb graph with the side of the cut tree, the cut vertex relabelled to c.
struct DiskCheck {
  std::size_t vertices = 0;
  std::size_t triangles = 0;
  bool connected = false;
  int euler = 0;
  int boundary_count = 0;
  bool boundary_constant = false;
  std::string field_class = "invalid";
  bool field_valid = false;
  bool reeb_matches_subtree = false;
  std::string detail;

  bool passed() const {
    return connected && euler == 1 && boundary_count == 1 && boundary_constant && field_valid &&
           reeb_matches_subtree;
  }
};

enum class SplitOutcome { Verified, HypothesisFails, Failed };

std::string_view to_string(SplitOutcome outcome);

struct SplitReport {
  SplitOutcome outcome = SplitOutcome::Failed;
  std::size_t reeb_vertices = 0;
  std::size_t reeb_edges = 0;
  std::size_t group_order = 0;
  std::map<int, int> histogram;
  bool group_acts_on_tree = false;  // every element preserves adjacency and labels
  FixedSet fixed;
  std::vector<std::string> notes;

  // Present unless the hypothesis fails.
  int edge = -1;
  int edge_lower = -1;
  int edge_upper = -1;
  double cut_value = 0.0;
  std::size_t crossings = 0;
  DiskCheck disk_a;
  DiskCheck disk_b;
  int euler_sum = 0;
  bool counts_conserved = false;
  bool sides_invariant = false;
  std::size_t group_a_order = 0;
  std::size_t group_b_order = 0;
  std::size_t unmarked_a_order = 0;
  std::size_t unmarked_b_order = 0;
  IsomorphismVerdict verdict;
  std::optional<double> seconds;

  bool product_matches() const { return group_order == group_a_order * group_b_order; }
  bool passed() const { return outcome == SplitOutcome::Verified; }
};

struct SplitOptions {
  std::optional<int> edge;          // Reeb edge id; must be fixed by the group
  std::optional<double> cut_value;  // default: choose_cut_value
  std::optional<AutGroup> group;    // replaces the enumerated group
};

// Runs the whole pipeline on a closed genus-0 field. A group without a fixed
// edge yields outcome HypothesisFails; failed checks yield Failed. Structural
// errors of the input propagate as Error.
SplitReport verify_theorem(const TriangleMesh& mesh, const ScalarField& field, const SplitOptions& options = {});

struct AllEdgesReport {
  std::vector<SplitReport> reports;  // one per fixed edge, by edge id
  std::optional<SplitReport> hypothesis_failure;

  bool passed() const;
};

AllEdgesReport verify_all_fixed_edges(const TriangleMesh& mesh, const ScalarField& field,
                                      const std::optional<AutGroup>& group = std::nullopt);

// Compares the marked subtree group with the full group of the same subtree
// and says whether fixing the cut vertex makes a difference.
std::string check_subtree_group_gap(const TreeCut& cut, Side side);

Json split_report_to_json(const SplitReport& report);
Json all_edges_to_json(const AllEdgesReport& report);
std::string format_split_report(const SplitReport& report);

}  // namespace reebsplit
