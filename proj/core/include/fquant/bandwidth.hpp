#pragma once

#include <span>
#include <vector>

#include "fquant/curve.hpp"
#include "fquant/semimetric.hpp"
#include "fquant/survival.hpp"

namespace fquant {

// Result of cross-validated k-nearest-neighbor bandwidth selection. The curve
// bandwidth is a rule, not a number: at a query x it is the distance from x
// to its k-th nearest training curve.
struct BandwidthSelection {
  int k = 0;
  double response_bandwidth = 0.0;  // h_H for the chosen k
  double cv_score = 0.0;
  SemiMetricSpec semimetric{2};
  std::vector<int> grid;
  std::vector<double> scores;  // per grid entry; NaN where infeasible

  // The per-query curve bandwidth rule under the selection's semi-metric.
  double curve_bandwidth_at(const Curve& x, std::span<const Curve> training) const;
};

// Pinball (check) loss rho_alpha(u) = u (alpha - 1{u < 0}).
inline double pinball_loss(double alpha, double u) {
  return u * (alpha - (u < 0.0 ? 1.0 : 0.0));
}

// Response bandwidth rule: sample standard deviation of the uncensored
// responses scaled by (k/n)^{1/5}.
double response_bandwidth_rule(std::span<const CensoredPair> pairs, int k);

// Distance from x to its k-th nearest curve in `training` (1-based k).
double knn_bandwidth(const Curve& x, std::span<const Curve> training,
                     const SemiMetricSpec& spec, int k);

// Selects k from k_grid by leave-one-out cross-validation of the conditional
// alpha-quantile, scored with the censoring-weighted pinball loss
//   sum_i delta_i Gbar_n^{-1}(Y_i) rho_alpha(Y_i - qhat_{-i}).
// Fold i predicts with h_K = distance from X_i to its k-th nearest remaining
// curve and the fold's own Kaplan-Meier fit. Ties break toward smaller k.
// Throws InsufficientData and AllFoldsEmpty.
BandwidthSelection select_bandwidth(std::span<const Curve> curves,
                                    std::span<const CensoredPair> pairs,
                                    const SemiMetricSpec& spec, double alpha,
                                    std::span<const int> k_grid);

}  // namespace fquant
