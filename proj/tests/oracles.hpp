#pragma once

#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "reebsplit/mesh.hpp"
#include "reebsplit/scalar_field.hpp"

namespace oracle {

struct LinkCounts {
  int lower = 0;
  int upper = 0;
};

// Components of the lower (upper) part of the link of an interior vertex,
// built from scratch: link vertices are the neighbours, link edges are the
// opposite sides of the triangles around v.
inline LinkCounts link_components(const reebsplit::TriangleMesh& mesh, const reebsplit::ScalarField& f, int v) {
  std::set<int> nbrs;
  std::vector<std::pair<int, int>> link_edges;
  for (const auto& t : mesh.triangles()) {
    for (int i = 0; i < 3; ++i) {
      if (t[i] != v) continue;
      const int a = t[(i + 1) % 3], b = t[(i + 2) % 3];
      nbrs.insert(a);
      nbrs.insert(b);
      link_edges.emplace_back(a, b);
    }
  }
  auto below = [&](int a, int b) { return f[a] < f[b] || (f[a] == f[b] && a < b); };
  auto count = [&](bool lower) {
    std::set<int> kept;
    for (int u : nbrs) {
      if (below(u, v) == lower) kept.insert(u);
    }
    std::set<int> seen;
    int components = 0;
    for (int start : kept) {
      if (seen.count(start)) continue;
      ++components;
      std::vector<int> stack{start};
      seen.insert(start);
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (const auto& [a, b] : link_edges) {
          const int y = a == x ? b : (b == x ? a : -1);
          if (y >= 0 && kept.count(y) && !seen.count(y)) {
            seen.insert(y);
            stack.push_back(y);
          }
        }
      }
    }
    return components;
  };
  return {count(true), count(false)};
}

}  // namespace oracle
