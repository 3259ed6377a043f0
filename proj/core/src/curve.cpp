#include "fquant/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "fquant/errors.hpp"

namespace fquant {

Curve::Curve(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 3) {
    throw CurveTooShort("Curve: need at least 3 grid points");
  }
  if (values_.size() != grid_.size()) {
    throw ConfigError("Curve: grid and values lengths differ");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
      throw ConfigError("Curve: non-finite entry");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw ConfigError("Curve: grid must be strictly increasing");
    }
  }
}

Curve Curve::on_hours(std::vector<double> values) {
  std::vector<double> grid(values.size());
  std::iota(grid.begin(), grid.end(), 1.0);
  return Curve(std::move(grid), std::move(values));
}

bool Curve::same_grid(const Curve& other) const {
  return grid_.size() == other.grid_.size() &&
         std::equal(grid_.begin(), grid_.end(), other.grid_.begin());
}

double Curve::value_mean() const {
  double s = std::accumulate(values_.begin(), values_.end(), 0.0);
  return s / static_cast<double>(values_.size());
}

}  // namespace fquant
