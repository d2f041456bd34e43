#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace reebsplit {

// One real value per mesh vertex. Vertices are totally ordered by
// (value, index); this is the sweep order used everywhere.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t v) const { return values_[v]; }
  std::span<const double> values() const { return values_; }

  // Strict tie order: value first, then vertex index.
  bool below(int a, int b) const {
    return values_[a] < values_[b] || (values_[a] == values_[b] && a < b);
  }

  double min_value() const;
  double max_value() const;

 private:
  std::vector<double> values_;
};

}  // namespace reebsplit
