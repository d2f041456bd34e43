#include "reebsplit/field.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>

namespace reebsplit {

ScalarField::ScalarField(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidFieldClass, "value " + std::to_string(i) + " is not finite");
    }
  }
}

double ScalarField::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

std::string_view to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::Minimum: return "minimum";
    case CriticalKind::Maximum: return "maximum";
    case CriticalKind::Regular: return "regular";
    case CriticalKind::Saddle: return "saddle";
    case CriticalKind::BoundaryRegular: return "boundary-regular";
  }
  return "?";
}

std::string_view to_string(FieldClass cls) {
  switch (cls) {
    case FieldClass::Morse: return "Morse";
    case FieldClass::FGeneric: return "F-generic";
    case FieldClass::Invalid: return "invalid";
  }
  return "?";
}

namespace {

// Number of maximal runs of `true` in a cyclic sequence.
int cyclic_runs(const std::vector<char>& lower, bool value) {
  const std::size_t n = lower.size();
  int runs = 0;
  bool all = true;
  for (std::size_t i = 0; i < n; ++i) {
    const bool cur = (lower[i] != 0) == value;
    const bool prev = (lower[(i + n - 1) % n] != 0) == value;
    if (cur && !prev) ++runs;
    if (!cur) all = false;
  }
  return (all && n > 0) ? 1 : runs;
}

Criticality from_cycle(const std::vector<char>& lower) {
  Criticality c;
  c.lower_components = cyclic_runs(lower, true);
  c.upper_components = cyclic_runs(lower, false);
  if (c.lower_components == 0) {
    c.kind = CriticalKind::Minimum;
  } else if (c.upper_components == 0) {
    c.kind = CriticalKind::Maximum;
  } else if (c.lower_components == 1) {
    c.kind = CriticalKind::Regular;
  } else {
    c.kind = CriticalKind::Saddle;
    c.multiplicity = c.lower_components - 1;
  }
  return c;
}

// Ordered link cycle of a multi-vertex zone, or empty when the link is not a
// single cycle.
std::vector<int> zone_link_cycle(const TriangleMesh& mesh, const FlatContraction& zones, int z) {
  std::map<int, std::vector<int>> adjacency;
  std::set<int> seen_tris;
  for (int v : zones.zones[z]) {
    for (int t : mesh.vertex_triangles(v)) {
      if (!seen_tris.insert(t).second) continue;
      const Triangle& tri = mesh.triangle(t);
      std::vector<int> outside;
      for (int w : tri) {
        if (zones.zone_of[w] != z) outside.push_back(w);
      }
      for (int w : outside) adjacency[w];
      if (outside.size() == 2) {
        adjacency[outside[0]].push_back(outside[1]);
        adjacency[outside[1]].push_back(outside[0]);
      }
    }
  }
  if (adjacency.size() < 2) return {};
  for (const auto& [w, adj] : adjacency) {
    if (adj.size() != 2) return {};
  }
  std::vector<int> ring;
  int prev = -1;
  int cur = adjacency.begin()->first;
  const int start = cur;
  do {
    ring.push_back(cur);
    const auto& adj = adjacency[cur];
    const int next = (adj[0] != prev || adj[0] == adj[1]) ? adj[0] : adj[1];
    prev = cur;
    cur = next;
    if (ring.size() > adjacency.size()) return {};
  } while (cur != start);
  if (ring.size() != adjacency.size()) return {};
  return ring;
}

}  // namespace

Criticality classify_vertex(const TriangleMesh& mesh, const ScalarField& field, int v) {
  const auto link = mesh.vertex_link(v);
  std::vector<char> lower;
  lower.reserve(link.ring.size());
  for (int u : link.ring) lower.push_back(field.below(u, v) ? 1 : 0);
  if (link.closed) return from_cycle(lower);

  Criticality c;
  int runs = 0;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (i == 0 || lower[i] != lower[i - 1]) {
      ++runs;
      if (lower[i]) {
        ++c.lower_components;
      } else {
        ++c.upper_components;
      }
    }
  }
  if (runs <= 2) {
    c.kind = CriticalKind::BoundaryRegular;
  } else {
    c.kind = CriticalKind::Saddle;
    c.multiplicity = runs - 2;
  }
  return c;
}

FlatContraction flat_contract(const TriangleMesh& mesh, const ScalarField& field) {
  const std::size_t n = mesh.num_vertices();
  FlatContraction out;
  out.zone_of.assign(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (out.zone_of[s] >= 0) continue;
    const int z = static_cast<int>(out.zones.size());
    std::vector<int> members;
    std::queue<int> queue;
    queue.push(static_cast<int>(s));
    out.zone_of[s] = z;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      members.push_back(v);
      for (int u : mesh.neighbors(v)) {
        if (out.zone_of[u] < 0 && field[u] == field[v]) {
          out.zone_of[u] = z;
          queue.push(u);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.zone_value.push_back(field[s]);
    out.zones.push_back(std::move(members));
  }
  out.zone_neighbors.resize(out.zones.size());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& [a, b] = mesh.edge(static_cast<int>(e));
    const int za = out.zone_of[a], zb = out.zone_of[b];
    if (za == zb) continue;
    out.zone_neighbors[za].push_back(zb);
    out.zone_neighbors[zb].push_back(za);
  }
  for (auto& nb : out.zone_neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return out;
}

FieldClassReport classify_field(const TriangleMesh& mesh, const ScalarField& field) {
  if (field.size() != mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidFieldClass, "field has " + std::to_string(field.size()) + " values for " +
                                                  std::to_string(mesh.num_vertices()) + " vertices");
  }
  FieldClassReport report;
  report.contraction = flat_contract(mesh, field);
  const FlatContraction& zones = report.contraction;
  report.zone_criticality.resize(zones.size());

  auto fail = [&](ErrorCode code, std::string detail) {
    if (!report.problem) {
      report.problem = code;
      report.detail = std::move(detail);
    }
  };

  std::vector<char> is_boundary_zone(zones.size(), 0);
  const auto cycles = mesh.boundary_cycles();
  report.boundary_components = static_cast<int>(cycles.size());
  for (const auto& cycle : cycles) {
    const double c = field[cycle.front()];
    bool constant = true;
    for (int v : cycle) constant = constant && field[v] == c;
    if (!constant) {
      fail(ErrorCode::CriticalBoundary, "boundary cycle through vertex " + std::to_string(cycle.front()) +
                                            " is not at a constant value");
      continue;
    }
    const int z = zones.zone_of[cycle.front()];
    std::vector<int> sorted_cycle = cycle;
    std::sort(sorted_cycle.begin(), sorted_cycle.end());
    if (zones.zones[z] != sorted_cycle) {
      fail(ErrorCode::FlatZone, "flat zone at boundary vertex " + std::to_string(cycle.front()) +
                                    " extends beyond its boundary cycle");
      continue;
    }
    is_boundary_zone[z] = 1;
    int below = 0, above = 0;
    for (int w : zones.zone_neighbors[z]) {
      (zones.zone_value[w] < c ? below : above)++;
    }
    if (below > 0 && above > 0) {
      fail(ErrorCode::CriticalBoundary, "boundary cycle through vertex " + std::to_string(cycle.front()) +
                                            " has neighbours on both sides of its value");
      continue;
    }
    Criticality crit;
    crit.kind = CriticalKind::BoundaryRegular;
    crit.lower_components = below > 0 ? 1 : 0;
    crit.upper_components = above > 0 ? 1 : 0;
    report.zone_criticality[z] = crit;
  }

  for (std::size_t z = 0; z < zones.size(); ++z) {
    if (is_boundary_zone[z]) continue;
    const auto& members = zones.zones[z];
    if (std::any_of(members.begin(), members.end(), [&](int v) { return mesh.is_boundary_vertex(v); })) {
      // Already reported through the boundary checks.
      fail(ErrorCode::CriticalBoundary, "boundary vertex " + std::to_string(members.front()) + " is not regular");
      continue;
    }
    std::vector<int> ring;
    if (members.size() == 1) {
      ring = mesh.vertex_link(members.front()).ring;
    } else {
      ring = zone_link_cycle(mesh, zones, static_cast<int>(z));
      if (ring.empty()) {
        fail(ErrorCode::FlatZone, "flat zone of " + std::to_string(members.size()) + " vertices at vertex " +
                                      std::to_string(members.front()) + " is not a disk");
        continue;
      }
    }
    std::vector<char> lower;
    lower.reserve(ring.size());
    for (int u : ring) lower.push_back(field[u] < zones.zone_value[z] ? 1 : 0);
    const Criticality crit = from_cycle(lower);
    report.zone_criticality[z] = crit;
    switch (crit.kind) {
      case CriticalKind::Minimum: ++report.minima; break;
      case CriticalKind::Maximum: ++report.maxima; break;
      case CriticalKind::Saddle:
        ++report.saddles;
        report.saddle_multiplicity_sum += crit.multiplicity;
        ++report.multiplicity_histogram[crit.multiplicity];
        break;
      default: break;
    }
  }
  if (zones.size() == 1 && !report.problem) {
    fail(ErrorCode::FlatZone, "the field is constant");
  }

  if (report.problem) {
    report.cls = FieldClass::Invalid;
  } else if (report.saddles == 0 || report.multiplicity_histogram.rbegin()->first == 1) {
    report.cls = FieldClass::Morse;
  } else {
    report.cls = FieldClass::FGeneric;
  }
  return report;
}

}  // namespace reebsplit
