#include "fquant/semimetric.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fquant/errors.hpp"

namespace fquant {

SemiMetricSpec::SemiMetricSpec(int derivative_order) : order_(derivative_order) {
  if (order_ != 0 && order_ != 2) {
    throw ConfigError("SemiMetricSpec: derivative order must be 0 or 2");
  }
}

Curve second_derivative(const Curve& c) {
  const auto& g = c.grid();
  const auto& v = c.values();
  const std::size_t n = g.size();

  const double h = (g.back() - g.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((g[i] - g[i - 1]) - h) > 1e-9 * h) {
      throw NonUniformGrid("second_derivative: grid spacing is not uniform");
    }
  }

  std::vector<double> out(n);
  const double h2 = h * h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
  }
  out[0] = (v[0] - 2.0 * v[1] + v[2]) / h2;
  out[n - 1] = (v[n - 3] - 2.0 * v[n - 2] + v[n - 1]) / h2;
  return Curve(g, std::move(out));
}

namespace {

double l2_of_difference(const Curve& a, const Curve& b) {
  const auto& g = a.grid();
  const auto& va = a.values();
  const auto& vb = b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    double f0 = va[i] - vb[i];
    double f1 = va[i + 1] - vb[i + 1];
    acc += (g[i + 1] - g[i]) * 0.5 * (f0 * f0 + f1 * f1);
  }
  return std::sqrt(acc);
}

}  // namespace

double distance(const Curve& a, const Curve& b, const SemiMetricSpec& spec) {
  if (!a.same_grid(b)) {
    throw GridMismatch("distance: curves sampled on different grids");
  }
  if (spec.derivative_order() == 0) {
    return l2_of_difference(a, b);
  }
  return l2_of_difference(second_derivative(a), second_derivative(b));
}

double small_ball_cdf(const Curve& x, std::span<const Curve> data,
                      const SemiMetricSpec& spec, double u) {
  if (data.empty()) {
    throw EmptyDataset("small_ball_cdf: empty dataset");
  }
  std::size_t count = 0;
  for (const Curve& c : data) {
    if (distance(x, c, spec) <= u) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(data.size());
}

DistanceProfile::DistanceProfile(std::vector<double> distances)
    : sorted_(std::move(distances)) {
  if (sorted_.empty()) {
    throw EmptyDataset("DistanceProfile: empty distance set");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double DistanceProfile::cdf(double u) const {
  return static_cast<double>(count_within(u)) / static_cast<double>(sorted_.size());
}

std::size_t DistanceProfile::count_within(double u) const {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), u) - sorted_.begin());
}

}  // namespace fquant
