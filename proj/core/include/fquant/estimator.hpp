#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fquant/curve.hpp"
#include "fquant/kernels.hpp"
#include "fquant/semimetric.hpp"
#include "fquant/survival.hpp"

namespace fquant {

// Frozen fit state used for all predictions: the training observations in
// their original (time-series) order, the semi-metric, the two bandwidths
// and the Kaplan-Meier censoring fit over exactly these pairs. Cheap to copy;
// rebinding the curve bandwidth shares the underlying data.
class QuantileModel {
public:
  QuantileModel(std::vector<Curve> curves, std::vector<CensoredPair> pairs,
                SemiMetricSpec semimetric, double curve_bandwidth,
                double response_bandwidth);

  QuantileModel with_curve_bandwidth(double h) const;

  std::size_t size() const;
  const std::vector<Curve>& curves() const;
  const std::vector<CensoredPair>& pairs() const;
  const KaplanMeierFit& km() const;
  SemiMetricSpec semimetric() const;
  double curve_bandwidth() const { return h_curve_; }
  double response_bandwidth() const { return h_response_; }
  double response_min() const;
  double response_max() const;

  // Semi-metric distances from a query to every training curve, using the
  // cached derivative transforms.
  std::vector<double> distances_to(const Curve& x) const;

  // delta_i * 1 / max(Gbar_n(Y_i -), 1/n): the censoring weight of
  // observation i (zero when censored).
  double censoring_weight(std::size_t i) const;

private:
  struct Frozen;
  QuantileModel(std::shared_ptr<const Frozen> frozen, double h_curve,
                double h_response);

  std::shared_ptr<const Frozen> frozen_;
  double h_curve_;
  double h_response_;
};

struct QuantileResult {
  double value;
  bool saturated;  // CDF never reached the order on the bracket
};

// The smoothed conditional law F_hat(. | x) at a fixed query curve. Builds
// the local kernel weights once; all evaluations afterwards are O(local
// sample size). Throws EmptyNeighborhood when no training curve lies within
// the curve bandwidth.
class ConditionalDistribution {
public:
  ConditionalDistribution(const QuantileModel& model, const Curve& x);

  // From precomputed semi-metric distances (original data order).
  ConditionalDistribution(const QuantileModel& model, std::vector<double> distances);

  // F_hat(t | x). Nondecreasing in t; may exceed 1 under censoring weights
  // (deliberately not renormalized).
  double cdf(double t) const;

  // Smoothed conditional density, the exact t-derivative of cdf.
  double density(double t) const;

  // Infimum of { t : cdf(t) >= alpha } over the data range extended by the
  // response bandwidth; alpha in (0,1).
  QuantileResult quantile(double alpha) const;

  // Local diagnostics.
  double ball_fraction() const;      // F_{x,n}(h_K)
  std::size_t neighborhood_size() const;  // count of d(x, X_i) <= h_K
  // Plug-in kernel constants from the empirical small-ball ratio at h_K.
  KernelMoments plug_in_moments() const;

  const QuantileModel& model() const { return model_; }

private:
  QuantileModel model_;
  DistanceProfile profile_;
  std::vector<double> local_y_;
  std::vector<double> local_w_;  // censoring weight * Delta_i / sum Delta
  double bracket_lo_;
  double bracket_hi_;
};

// One quantile level with its plug-in confidence half-width. The half-width
// is NaN when the interval could not be formed (degenerate density,
// saturated quantile or nonpositive variance).
struct QuantilePrediction {
  double alpha = 0.0;
  double quantile = 0.0;
  double ci_half_width = 0.0;
  bool saturated = false;
  double density_at_quantile = 0.0;
  double censor_survival = 0.0;  // Gbar_n at the quantile
};

struct IntervalPrediction {
  std::vector<QuantilePrediction> levels;
  std::size_t n_eff = 0;
  double ball_fraction = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};

// Spec operations over a one-shot query.
double conditional_cdf(const QuantileModel& model, const Curve& x, double t);
double conditional_density(const QuantileModel& model, const Curve& x, double t);
QuantileResult conditional_quantile(const QuantileModel& model, const Curve& x,
                                    double alpha);

// Asymptotic interval for the alpha-quantile at confidence `level`:
//   q_hat +/- z * sqrt(M2n) / (M1n f_hat(q_hat|x)) *
//              sqrt( alpha (Gbar_n^{-1}(q_hat) - alpha) / (n F_{x,n}(h_K)) )
// with z the (1+level)/2 standard normal quantile. Throws SaturatedQuantile,
// DegenerateDensity, NonpositiveVariance, EmptyBall.
QuantilePrediction confidence_interval(const QuantileModel& model, const Curve& x,
                                       double alpha, double level);

// Batch prediction over sorted quantile orders. Quantiles are nondecreasing
// across levels (bisection jitter below tolerance is clipped); per-level
// interval failures are reported as NaN half-widths rather than thrown, while
// query-level failures (EmptyNeighborhood) propagate.
IntervalPrediction predict_intervals(const QuantileModel& model, const Curve& x,
                                     std::span<const double> levels,
                                     double ci_level);

// Same, over an already-built conditional distribution.
IntervalPrediction predict_intervals(const ConditionalDistribution& cd,
                                     std::span<const double> levels,
                                     double ci_level);

}  // namespace fquant
