#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reebsplit/error.hpp"
#include "reebsplit/mesh.hpp"
#include "reebsplit/scalar_field.hpp"

namespace reebsplit {

enum class CriticalKind { Minimum, Maximum, Regular, Saddle, BoundaryRegular };

std::string_view to_string(CriticalKind kind);

// Local type of a vertex (or flat zone) of a PL field, read off its link.
// For a saddle, multiplicity = lower_components - 1; a simple Morse saddle
// has multiplicity 1, a monkey saddle 2. Zero for every other kind.
struct Criticality {
  CriticalKind kind = CriticalKind::Regular;
  int multiplicity = 0;
  int lower_components = 0;
  int upper_components = 0;

  bool is_critical() const { return kind != CriticalKind::Regular && kind != CriticalKind::BoundaryRegular; }
  friend bool operator==(const Criticality&, const Criticality&) = default;
};

// Classification of a single vertex under the (value, index) tie order.
// Boundary vertices are read along their link path: one lower run and one
// upper run at most is BoundaryRegular, anything else is reported as a
// saddle with multiplicity (#runs - 2).
Criticality classify_vertex(const TriangleMesh& mesh, const ScalarField& field, int v);

// Maximal edge-connected sets of vertices with equal value, numbered by their
// smallest member. With all values distinct every zone is a single vertex.
struct FlatContraction {
  std::vector<int> zone_of;
  std::vector<std::vector<int>> zones;
  std::vector<double> zone_value;
  std::vector<std::vector<int>> zone_neighbors;

  std::size_t size() const { return zones.size(); }
  bool is_identity() const { return zones.size() == zone_of.size(); }
  // Sweep order on zones: value, then smallest member vertex.
  bool below(int a, int b) const {
    return zone_value[a] < zone_value[b] || (zone_value[a] == zone_value[b] && zones[a][0] < zones[b][0]);
  }
};

FlatContraction flat_contract(const TriangleMesh& mesh, const ScalarField& field);

enum class FieldClass { Morse, FGeneric, Invalid };

std::string_view to_string(FieldClass cls);

struct FieldClassReport {
  FieldClass cls = FieldClass::Invalid;
  FlatContraction contraction;
  std::vector<Criticality> zone_criticality;
  int minima = 0;
  int maxima = 0;
  int saddles = 0;
  int saddle_multiplicity_sum = 0;
  std::map<int, int> multiplicity_histogram;
  int boundary_components = 0;
  // Set when cls == Invalid: FlatZone or CriticalBoundary.
  std::optional<ErrorCode> problem;
  std::string detail;

  bool valid() const { return cls != FieldClass::Invalid; }
  const Criticality& vertex_criticality(int v) const { return zone_criticality[contraction.zone_of[v]]; }
  // #min + #max - sum of saddle multiplicities; 2 on every accepted sphere.
  int euler_sum() const { return minima + maxima - saddle_multiplicity_sum; }
};

// Classifies every flat zone of a field on a surface accepted by
// validate_surface. Each boundary cycle must carry a constant value and have
// all its neighbours strictly on one side; zones whose link is not a single
// cycle make the field invalid. Throws InvalidFieldClass when the value count
// does not match the mesh.
FieldClassReport classify_field(const TriangleMesh& mesh, const ScalarField& field);

}  // namespace reebsplit
