#pragma once

#include <algorithm>
#include <vector>

namespace cekm {

// Right-continuous step distribution function. `values[i]` is the cdf at and
// after `knots[i]`; below the first knot the cdf is 0; total mass may be < 1.
class StepCdf {
 public:
  StepCdf() = default;
  StepCdf(std::vector<double> knots, std::vector<double> values)
      : knots_(std::move(knots)), values_(std::move(values)) {}

  double operator()(double x) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    if (it == knots_.begin()) return 0.0;
    return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
  }

  double total_mass() const { return values_.empty() ? 0.0 : values_.back(); }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

}  // namespace cekm
