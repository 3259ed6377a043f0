#pragma once

// Internal: kernel-weighted CDF evaluation and monotone inversion shared by
// the conditional estimator and the cross-validation folds.

#include <cstddef>
#include <span>

#include "fquant/kernels.hpp"

namespace fquant::detail {

inline double weighted_cdf(std::span<const double> y, std::span<const double> w,
                           double h_response, double t) {
  IntegratedQuadraticCdf hk;
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (w[i] != 0.0) s += w[i] * hk.cdf((t - y[i]) / h_response);
  }
  return s;
}

inline double weighted_density(std::span<const double> y, std::span<const double> w,
                               double h_response, double t) {
  IntegratedQuadraticCdf hk;
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (w[i] != 0.0) s += w[i] * hk.density((t - y[i]) / h_response);
  }
  return s / h_response;
}

struct InvertResult {
  double value;
  bool saturated;
};

// Infimum of { t : cdf(t) >= alpha } by bisection on [lo, hi] to absolute
// tolerance 1e-8 * (hi - lo). If the CDF never reaches alpha on the bracket
// the right endpoint is returned with the saturated flag set.
inline InvertResult invert_weighted_cdf(std::span<const double> y,
                                        std::span<const double> w,
                                        double h_response, double alpha,
                                        double lo, double hi) {
  if (weighted_cdf(y, w, h_response, hi) < alpha) {
    return {hi, true};
  }
  const double tol = 1e-8 * (hi - lo);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (weighted_cdf(y, w, h_response, mid) >= alpha) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, false};
}

}  // namespace fquant::detail
