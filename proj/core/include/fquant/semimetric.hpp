#pragma once

#include <span>
#include <vector>

#include "fquant/curve.hpp"

namespace fquant {

// Which L2 semi-metric to compute between curves:
//   order 0 -- plain L2 distance of the values,
//   order 2 -- L2 distance of the second derivatives, which ignores affine
//              differences between smooth curves.
// Quadrature is the trapezoid rule in both cases.
class SemiMetricSpec {
public:
  explicit SemiMetricSpec(int derivative_order = 2);

  static SemiMetricSpec plain_l2() { return SemiMetricSpec(0); }
  static SemiMetricSpec second_derivative_l2() { return SemiMetricSpec(2); }

  int derivative_order() const { return order_; }

private:
  int order_;
};

// Second derivative by central finite differences on the interior and
// one-sided second differences at both endpoints. Exact for quadratics.
// Requires a uniform grid (relative spacing deviation <= 1e-9), output shares
// the input grid. Throws NonUniformGrid.
Curve second_derivative(const Curve& c);

// d(a,b) = sqrt( integral (a^(k) - b^(k))^2 dt ), k = spec.derivative_order(),
// trapezoid quadrature. Curves must share a grid (GridMismatch otherwise).
double distance(const Curve& a, const Curve& b, const SemiMetricSpec& spec);

// Empirical small-ball distribution F_{x,n}(u): fraction of data curves
// within semi-metric distance u of x. Throws EmptyDataset.
double small_ball_cdf(const Curve& x, std::span<const Curve> data,
                      const SemiMetricSpec& spec, double u);

// Distances from one query to many curves, reusable for repeated small-ball
// queries. Sorted ascending.
class DistanceProfile {
public:
  explicit DistanceProfile(std::vector<double> distances);

  // Fraction of distances <= u.
  double cdf(double u) const;
  std::size_t count_within(double u) const;
  std::size_t size() const { return sorted_.size(); }
  double max_distance() const { return sorted_.empty() ? 0.0 : sorted_.back(); }

private:
  std::vector<double> sorted_;
};

}  // namespace fquant
