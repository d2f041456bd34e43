#include "reebsplit/split.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "reebsplit/error.hpp"
#include "reebsplit/field.hpp"

namespace reebsplit {

std::string_view to_string(SplitOutcome outcome) {
  switch (outcome) {
    case SplitOutcome::Verified: return "verified";
    case SplitOutcome::HypothesisFails: return "hypothesis-fails";
    case SplitOutcome::Failed: return "failed";
  }
  return "?";
}

namespace {

bool acts_on_tree(const AutGroup& group, const LabeledTree& tree) {
  if (group.degree != tree.size()) return false;
  for (const Permutation& g : group.elements) {
    if (g.size() != tree.size()) return false;
    for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
      if (tree.label(g[v]) != tree.label(v)) return false;
    }
    for (const auto& [a, b] : tree.edges()) {
      if (tree.find_edge(g[a], g[b]) < 0) return false;
    }
  }
  return true;
}

DiskCheck check_disk(const MeshWithField& piece, double c, const LabeledTree& side, int x) {
  DiskCheck check;
  check.vertices = piece.mesh.num_vertices();
  check.triangles = piece.mesh.num_triangles();
  check.euler = piece.mesh.euler_characteristic();
  check.boundary_count = static_cast<int>(piece.mesh.boundary_cycles().size());
  check.boundary_constant = check.boundary_count > 0;
  for (const auto& cycle : piece.mesh.boundary_cycles()) {
    for (int v : cycle) check.boundary_constant = check.boundary_constant && piece.field[v] == c;
  }
  try {
    validate_surface(piece.mesh);
    check.connected = true;
  } catch (const Error& e) {
    check.detail = e.what();
    return check;
  }
  const FieldClassReport cls = classify_field(piece.mesh, piece.field);
  check.field_class = std::string(to_string(cls.cls));
  check.field_valid = cls.valid();
  if (!cls.valid()) {
    check.detail = cls.detail;
    return check;
  }
  try {
    const LabeledTree expected = side.with_label(x, c).with_marked(std::nullopt);
    check.reeb_matches_subtree = label_isomorphic(reeb_tree(build_reeb(piece.mesh, piece.field)), expected);
    if (!check.reeb_matches_subtree) check.detail = "Reeb graph of the piece differs from the cut subtree";
  } catch (const Error& e) {
    check.detail = e.what();
  }
  return check;
}

bool maps_side_onto_itself(const Permutation& g, const std::vector<int>& side_to_tree) {
  std::vector<int> image;
  std::vector<int> original;
  for (int v : side_to_tree) {
    if (v < 0) continue;
    original.push_back(v);
    image.push_back(g[v]);
  }
  std::sort(original.begin(), original.end());
  std::sort(image.begin(), image.end());
  return original == image;
}

SplitReport run(const TriangleMesh& mesh, const ScalarField& field, const ReebGraph& graph, const LabeledTree& tree,
                const AutGroup& group, const SplitOptions& options) {
  SplitReport report;
  report.reeb_vertices = graph.vertices.size();
  report.reeb_edges = graph.edges.size();
  report.group_order = group.order();
  report.group_acts_on_tree = acts_on_tree(group, tree);
  if (!report.group_acts_on_tree) {
    report.notes.push_back("group elements are not label-preserving automorphisms of the Reeb tree");
    return report;
  }
  report.histogram = element_order_histogram(group);
  report.fixed = fixed_set(group, tree);
  if (!report.fixed.has_edge()) {
    report.outcome = SplitOutcome::HypothesisFails;
    report.notes.push_back(report.fixed.variant == FixedSet::Variant::Midpoint
                               ? "fixed set is the midpoint of an edge"
                               : "fixed set is a single vertex");
    return report;
  }

  if (options.edge) {
    if (*options.edge < 0 || *options.edge >= static_cast<int>(graph.edges.size())) {
      throw Error(ErrorCode::EdgeNotFound, "no Reeb edge " + std::to_string(*options.edge));
    }
    const auto& fixed_edges = report.fixed.edges;
    if (std::find(fixed_edges.begin(), fixed_edges.end(), *options.edge) == fixed_edges.end()) {
      throw Error(ErrorCode::EdgeNotFound, "Reeb edge " + std::to_string(*options.edge) + " is not fixed");
    }
    report.edge = *options.edge;
  } else {
    report.edge = *std::min_element(report.fixed.edges.begin(), report.fixed.edges.end());
  }
  const ReebEdge& edge = graph.edges[report.edge];
  report.edge_lower = edge.lower;
  report.edge_upper = edge.upper;
  report.cut_value = options.cut_value ? *options.cut_value : choose_cut_value(field, graph, report.edge);

  const LevelCycle cycle = level_cycle(mesh, field, graph, report.edge, report.cut_value);
  const CutResult pieces = cut_along_cycle(mesh, field, cycle);
  report.crossings = pieces.crossings;

  const TreeCut tree_cut = cut_tree_at(tree, report.edge);
  report.disk_a = check_disk(pieces.below, report.cut_value, tree_cut.side_a, tree_cut.x_a);
  report.disk_b = check_disk(pieces.above, report.cut_value, tree_cut.side_b, tree_cut.x_b);
  report.euler_sum = report.disk_a.euler + report.disk_b.euler;
  const std::size_t k = report.crossings;
  report.counts_conserved = report.disk_a.vertices + report.disk_b.vertices == mesh.num_vertices() + 2 * k &&
                            report.disk_a.triangles + report.disk_b.triangles == mesh.num_triangles() + 2 * k;

  report.sides_invariant = std::all_of(group.elements.begin(), group.elements.end(), [&](const Permutation& g) {
    return maps_side_onto_itself(g, tree_cut.a_to_tree) && maps_side_onto_itself(g, tree_cut.b_to_tree);
  });
  const AutGroup group_a = enumerate_aut(tree_cut.side_a);
  const AutGroup group_b = enumerate_aut(tree_cut.side_b);
  report.group_a_order = group_a.order();
  report.group_b_order = group_b.order();
  report.unmarked_a_order = enumerate_aut(tree_cut.side_a.with_marked(std::nullopt)).order();
  report.unmarked_b_order = enumerate_aut(tree_cut.side_b.with_marked(std::nullopt)).order();
  report.verdict = verify_isomorphism(group.elements, group_a, group_b, tree_cut);
  for (Side side : {Side::A, Side::B}) {
    std::string note = check_subtree_group_gap(tree_cut, side);
    if (!note.empty()) report.notes.push_back(std::move(note));
  }

  const bool ok = report.disk_a.passed() && report.disk_b.passed() && report.euler_sum == 2 &&
                  report.counts_conserved && report.sides_invariant && report.verdict.passed() &&
                  report.product_matches();
  report.outcome = ok ? SplitOutcome::Verified : SplitOutcome::Failed;
  return report;
}

}  // namespace

SplitReport verify_theorem(const TriangleMesh& mesh, const ScalarField& field, const SplitOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const ReebGraph graph = build_reeb(mesh, field);
  const LabeledTree tree = reeb_tree(graph);
  const AutGroup group = options.group ? *options.group : enumerate_aut(tree);
  SplitReport report = run(mesh, field, graph, tree, group, options);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

bool AllEdgesReport::passed() const {
  if (hypothesis_failure) return hypothesis_failure->outcome == SplitOutcome::HypothesisFails;
  return std::all_of(reports.begin(), reports.end(), [](const SplitReport& r) { return r.passed(); });
}

AllEdgesReport verify_all_fixed_edges(const TriangleMesh& mesh, const ScalarField& field,
                                      const std::optional<AutGroup>& group_override) {
  const ReebGraph graph = build_reeb(mesh, field);
  const LabeledTree tree = reeb_tree(graph);
  const AutGroup group = group_override ? *group_override : enumerate_aut(tree);
  AllEdgesReport all;
  SplitReport first = run(mesh, field, graph, tree, group, {});
  if (first.outcome == SplitOutcome::HypothesisFails || !first.group_acts_on_tree) {
    all.hypothesis_failure = std::move(first);
    return all;
  }
  for (int e : first.fixed.edges) {
    const auto start = std::chrono::steady_clock::now();
    SplitOptions options;
    options.edge = e;
    SplitReport report = run(mesh, field, graph, tree, group, options);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all.reports.push_back(std::move(report));
  }
  return all;
}

std::string check_subtree_group_gap(const TreeCut& cut, Side side) {
  const LabeledTree& subtree = side == Side::A ? cut.side_a : cut.side_b;
  const std::size_t marked = enumerate_aut(subtree).order();
  const std::size_t unmarked = enumerate_aut(subtree.with_marked(std::nullopt)).order();
  if (marked == unmarked) return {};
  std::ostringstream out;
  out << "side " << (side == Side::A ? "A" : "B") << ": fixing the cut vertex shrinks the subtree group from "
      << unmarked << " to " << marked;
  return out.str();
}

namespace {

Json disk_to_json(const DiskCheck& d) {
  Json j;
  j["vertices"] = d.vertices;
  j["triangles"] = d.triangles;
  j["connected"] = d.connected;
  j["euler"] = d.euler;
  j["boundary_count"] = d.boundary_count;
  j["boundary_constant"] = d.boundary_constant;
  j["field_class"] = d.field_class;
  j["reeb_matches_subtree"] = d.reeb_matches_subtree;
  j["pass"] = d.passed();
  if (!d.detail.empty()) j["detail"] = d.detail;
  return j;
}

Json fixed_to_json(const FixedSet& f) {
  Json j;
  if (f.variant == FixedSet::Variant::Midpoint) {
    j["variant"] = "midpoint";
    j["edge"] = f.midpoint_edge;
    j["flip_witness"] = f.flip_witness;
  } else {
    j["variant"] = "subtree";
    j["vertices"] = f.vertices;
    j["edges"] = f.edges;
  }
  return j;
}

}  // namespace

Json split_report_to_json(const SplitReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["outcome"] = to_string(r.outcome);
  j["pass"] = r.passed();
  j["reeb"] = {{"vertices", r.reeb_vertices}, {"edges", r.reeb_edges}};
  j["group_order"] = r.group_order;
  Json histogram = Json::object();
  for (const auto& [order, count] : r.histogram) histogram[std::to_string(order)] = count;
  j["histogram"] = histogram;
  j["group_acts_on_tree"] = r.group_acts_on_tree;
  if (r.group_acts_on_tree) j["fixed_set"] = fixed_to_json(r.fixed);
  if (r.edge >= 0) {
    j["edge"] = {{"id", r.edge}, {"lower", r.edge_lower}, {"upper", r.edge_upper}};
    j["cut_value"] = r.cut_value;
    j["crossings"] = r.crossings;
    j["disk_a"] = disk_to_json(r.disk_a);
    j["disk_b"] = disk_to_json(r.disk_b);
    j["euler_sum"] = r.euler_sum;
    j["counts_conserved"] = r.counts_conserved;
    j["sides_invariant"] = r.sides_invariant;
    j["group_a_order"] = r.group_a_order;
    j["group_b_order"] = r.group_b_order;
    j["unmarked_a_order"] = r.unmarked_a_order;
    j["unmarked_b_order"] = r.unmarked_b_order;
    j["product_matches"] = r.product_matches();
    const IsomorphismVerdict& v = r.verdict;
    j["phi"] = {{"well_defined", v.well_defined}, {"into_product", v.into_product},
                {"homomorphism", v.homomorphism}, {"injective", v.injective},
                {"surjective", v.surjective},     {"kernel_size", v.kernel_size},
                {"image_size", v.image_size}};
    if (!v.detail.empty()) j["phi"]["detail"] = v.detail;
  }
  j["notes"] = r.notes;
  if (r.seconds) j["seconds"] = *r.seconds;
  return j;
}

Json all_edges_to_json(const AllEdgesReport& all) {
  Json j;
  j["schema"] = kSchema;
  j["pass"] = all.passed();
  j["reports"] = Json::array();
  for (const SplitReport& r : all.reports) j["reports"].push_back(split_report_to_json(r));
  if (all.hypothesis_failure) j["hypothesis_failure"] = split_report_to_json(*all.hypothesis_failure);
  return j;
}

std::string format_split_report(const SplitReport& r) {
  std::ostringstream out;
  out << "outcome: " << to_string(r.outcome) << "\n";
  out << "reeb: " << r.reeb_vertices << " vertices, " << r.reeb_edges << " edges\n";
  out << "|G| = " << r.group_order << "\n";
  if (!r.group_acts_on_tree) {
    out << "group does not act on the Reeb tree\n";
  } else if (r.fixed.variant == FixedSet::Variant::Midpoint) {
    out << "fixed set: midpoint of edge " << r.fixed.midpoint_edge << "\n";
  } else {
    out << "fixed set: " << r.fixed.vertices.size() << " vertices, " << r.fixed.edges.size() << " edges\n";
  }
  if (r.edge >= 0) {
    out << "cut edge " << r.edge << " (" << r.edge_lower << " -> " << r.edge_upper << ") at c = "
        << format_number(r.cut_value) << ", " << r.crossings << " crossings\n";
    using Named = std::pair<const char*, const DiskCheck*>;
    for (const auto& [name, d] : {Named{"A", &r.disk_a}, Named{"B", &r.disk_b}}) {
      out << "disk " << name << ": chi = " << d->euler << ", boundaries = " << d->boundary_count
          << ", boundary constant = " << (d->boundary_constant ? "yes" : "no") << ", class = " << d->field_class
          << ", reeb matches subtree = " << (d->reeb_matches_subtree ? "yes" : "no") << "\n";
    }
    out << "|G_A| = " << r.group_a_order << ", |G_B| = " << r.group_b_order << ", product "
        << (r.product_matches() ? "matches" : "differs") << "\n";
    const IsomorphismVerdict& v = r.verdict;
    out << "phi: homomorphism = " << (v.homomorphism ? "yes" : "no") << ", injective = "
        << (v.injective ? "yes" : "no") << ", surjective = " << (v.surjective ? "yes" : "no") << "\n";
  }
  for (const std::string& note : r.notes) out << "note: " << note << "\n";
  if (r.seconds) out << "time: " << format_number(*r.seconds) << " s\n";
  return out.str();
}

}  // namespace reebsplit
