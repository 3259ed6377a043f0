#pragma once

#include <cstddef>
#include <vector>

namespace fquant {

// A sampled real function on a fixed, strictly increasing time grid. This is
// the functional covariate: a daily temperature profile, a load profile, or a
// simulated trajectory. Immutable after construction.
class Curve {
public:
  // Validates: at least 3 points, strictly increasing grid, matching lengths,
  // all entries finite. Throws CurveTooShort / ConfigError on violation.
  Curve(std::vector<double> grid, std::vector<double> values);

  // Convenience: values sampled on the unit-spaced grid 1, 2, ..., n.
  static Curve on_hours(std::vector<double> values);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return grid_.size(); }

  bool same_grid(const Curve& other) const;

  // Mean of the sampled values (the default simulation link functional).
  double value_mean() const;

private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

}  // namespace fquant
