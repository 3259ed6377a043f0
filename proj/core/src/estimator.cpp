#include "fquant/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "fquant/errors.hpp"
#include "fquant/normal.hpp"
#include "weighted_cdf.hpp"

namespace fquant {

struct QuantileModel::Frozen {
  std::vector<Curve> curves;
  std::vector<Curve> transformed;  // second derivatives when order == 2
  std::vector<CensoredPair> pairs;
  SemiMetricSpec semimetric{0};
  KaplanMeierFit km;
  std::vector<double> censor_weights;  // delta_i * clamped Gbar^-1(Y_i -)
  double y_min = 0.0;
  double y_max = 0.0;

  Frozen(std::vector<Curve> cs, std::vector<CensoredPair> ps, SemiMetricSpec spec)
      : curves(std::move(cs)),
        pairs(std::move(ps)),
        semimetric(spec),
        km(KaplanMeierFit::fit(pairs)) {
    if (semimetric.derivative_order() == 2) {
      transformed.reserve(curves.size());
      for (const Curve& c : curves) transformed.push_back(second_derivative(c));
    }
    censor_weights.resize(pairs.size());
    y_min = std::numeric_limits<double>::infinity();
    y_max = -y_min;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      censor_weights[i] =
          pairs[i].uncensored ? km.inverse_weight_at(pairs[i].y) : 0.0;
      y_min = std::min(y_min, pairs[i].y);
      y_max = std::max(y_max, pairs[i].y);
    }
  }

  const std::vector<Curve>& metric_curves() const {
    return semimetric.derivative_order() == 2 ? transformed : curves;
  }
};

QuantileModel::QuantileModel(std::vector<Curve> curves,
                             std::vector<CensoredPair> pairs,
                             SemiMetricSpec semimetric, double curve_bandwidth,
                             double response_bandwidth)
    : h_curve_(curve_bandwidth), h_response_(response_bandwidth) {
  if (curves.empty() || pairs.empty()) {
    throw EmptyDataset("QuantileModel: no observations");
  }
  if (curves.size() != pairs.size()) {
    throw LengthMismatch("QuantileModel: curves and pairs lengths differ");
  }
  if (!(h_curve_ > 0.0) || !(h_response_ > 0.0)) {
    throw ConfigError("QuantileModel: bandwidths must be positive");
  }
  for (std::size_t i = 1; i < curves.size(); ++i) {
    if (!curves[i].same_grid(curves[0])) {
      throw GridMismatch("QuantileModel: training curves on different grids");
    }
  }
  frozen_ = std::make_shared<const Frozen>(std::move(curves), std::move(pairs),
                                           semimetric);
}

QuantileModel::QuantileModel(std::shared_ptr<const Frozen> frozen,
                             double h_curve, double h_response)
    : frozen_(std::move(frozen)), h_curve_(h_curve), h_response_(h_response) {}

QuantileModel QuantileModel::with_curve_bandwidth(double h) const {
  if (!(h > 0.0)) {
    throw ConfigError("with_curve_bandwidth: bandwidth must be positive");
  }
  return QuantileModel(frozen_, h, h_response_);
}

std::size_t QuantileModel::size() const { return frozen_->pairs.size(); }
const std::vector<Curve>& QuantileModel::curves() const { return frozen_->curves; }
const std::vector<CensoredPair>& QuantileModel::pairs() const {
  return frozen_->pairs;
}
const KaplanMeierFit& QuantileModel::km() const { return frozen_->km; }
SemiMetricSpec QuantileModel::semimetric() const { return frozen_->semimetric; }
double QuantileModel::response_min() const { return frozen_->y_min; }
double QuantileModel::response_max() const { return frozen_->y_max; }

std::vector<double> QuantileModel::distances_to(const Curve& x) const {
  const auto& metric = frozen_->metric_curves();
  Curve query = frozen_->semimetric.derivative_order() == 2 ? second_derivative(x) : x;
  if (!query.same_grid(metric.front())) {
    throw GridMismatch("distances_to: query grid differs from training grid");
  }
  const auto& g = query.grid();
  const auto& vq = query.values();
  std::vector<double> out(metric.size());
  for (std::size_t i = 0; i < metric.size(); ++i) {
    const auto& vi = metric[i].values();
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      double f0 = vq[j] - vi[j];
      double f1 = vq[j + 1] - vi[j + 1];
      acc += (g[j + 1] - g[j]) * 0.5 * (f0 * f0 + f1 * f1);
    }
    out[i] = std::sqrt(acc);
  }
  return out;
}

double QuantileModel::censoring_weight(std::size_t i) const {
  return frozen_->censor_weights[i];
}

// ---------------------------------------------------------------------------

ConditionalDistribution::ConditionalDistribution(const QuantileModel& model,
                                                 const Curve& x)
    : ConditionalDistribution(model, model.distances_to(x)) {}

ConditionalDistribution::ConditionalDistribution(const QuantileModel& model,
                                                 std::vector<double> distances)
    : model_(model), profile_(distances) {
  QuadraticKernel kernel;
  const double h = model.curve_bandwidth();
  const std::size_t n = distances.size();

  std::vector<double> delta(n);
  double sum_delta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = kernel(distances[i] / h);
    sum_delta += delta[i];
  }
  if (!(sum_delta > 0.0)) {
    throw EmptyNeighborhood(
        "ConditionalDistribution: no training curve within the curve bandwidth");
  }

  const auto& pairs = model.pairs();
  for (std::size_t i = 0; i < n; ++i) {
    if (delta[i] > 0.0 && pairs[i].uncensored) {
      local_y_.push_back(pairs[i].y);
      local_w_.push_back(model.censoring_weight(i) * delta[i] / sum_delta);
    }
  }
  bracket_lo_ = model.response_min() - model.response_bandwidth();
  bracket_hi_ = model.response_max() + model.response_bandwidth();
}

double ConditionalDistribution::cdf(double t) const {
  return detail::weighted_cdf(local_y_, local_w_, model_.response_bandwidth(), t);
}

double ConditionalDistribution::density(double t) const {
  return detail::weighted_density(local_y_, local_w_, model_.response_bandwidth(), t);
}

QuantileResult ConditionalDistribution::quantile(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("quantile: order must lie in (0,1)");
  }
  auto r = detail::invert_weighted_cdf(local_y_, local_w_,
                                       model_.response_bandwidth(), alpha,
                                       bracket_lo_, bracket_hi_);
  return {r.value, r.saturated};
}

double ConditionalDistribution::ball_fraction() const {
  return profile_.cdf(model_.curve_bandwidth());
}

std::size_t ConditionalDistribution::neighborhood_size() const {
  return profile_.count_within(model_.curve_bandwidth());
}

KernelMoments ConditionalDistribution::plug_in_moments() const {
  const double h = model_.curve_bandwidth();
  auto tau = [&](double s) { return estimate_tau(profile_, h, s); };
  return kernel_moments(tau);
}

// ---------------------------------------------------------------------------

double conditional_cdf(const QuantileModel& model, const Curve& x, double t) {
  return ConditionalDistribution(model, x).cdf(t);
}

double conditional_density(const QuantileModel& model, const Curve& x, double t) {
  return ConditionalDistribution(model, x).density(t);
}

QuantileResult conditional_quantile(const QuantileModel& model, const Curve& x,
                                    double alpha) {
  return ConditionalDistribution(model, x).quantile(alpha);
}

namespace {

constexpr double density_floor = 1e-12;

enum class CiFailure { none, saturated, empty_ball, degenerate_density, nonpositive_variance };

// Fills the point estimate and diagnostics unconditionally; the half-width is
// NaN with `failure` set when the interval cannot be formed.
QuantilePrediction interval_entry(const ConditionalDistribution& cd,
                                  const KernelMoments& moments, double alpha,
                                  double level, CiFailure& failure) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("confidence_interval: level must lie in (0,1)");
  }
  QuantilePrediction out;
  out.alpha = alpha;
  out.ci_half_width = std::numeric_limits<double>::quiet_NaN();
  QuantileResult q = cd.quantile(alpha);
  out.quantile = q.value;
  out.saturated = q.saturated;
  out.density_at_quantile = cd.density(q.value);
  out.censor_survival = cd.model().km().survival(q.value);

  failure = CiFailure::none;
  if (q.saturated) {
    failure = CiFailure::saturated;
    return out;
  }
  double fxh = cd.ball_fraction();
  if (!(fxh > 0.0)) {
    failure = CiFailure::empty_ball;
    return out;
  }
  if (out.density_at_quantile <= density_floor) {
    failure = CiFailure::degenerate_density;
    return out;
  }
  const double n = static_cast<double>(cd.model().size());
  const double gbar_inv = 1.0 / std::max(out.censor_survival, 1.0 / n);
  if (!(gbar_inv > alpha)) {
    failure = CiFailure::nonpositive_variance;
    return out;
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  out.ci_half_width = z * std::sqrt(moments.m2) /
                      (moments.m1 * out.density_at_quantile) *
                      std::sqrt(alpha * (gbar_inv - alpha) / (n * fxh));
  return out;
}

}  // namespace

QuantilePrediction confidence_interval(const QuantileModel& model, const Curve& x,
                                       double alpha, double level) {
  ConditionalDistribution cd(model, x);
  CiFailure failure = CiFailure::none;
  QuantilePrediction out = interval_entry(cd, cd.plug_in_moments(), alpha, level, failure);
  switch (failure) {
    case CiFailure::none:
      return out;
    case CiFailure::saturated:
      throw SaturatedQuantile(
          "confidence_interval: CDF never reached the requested order");
    case CiFailure::empty_ball:
      throw EmptyBall("confidence_interval: empty small ball at the bandwidth");
    case CiFailure::degenerate_density:
      throw DegenerateDensity(
          "confidence_interval: conditional density vanishes at the quantile");
    case CiFailure::nonpositive_variance:
    default:
      throw NonpositiveVariance(
          "confidence_interval: 1/Gbar at the quantile does not exceed alpha");
  }
}

IntervalPrediction predict_intervals(const QuantileModel& model, const Curve& x,
                                     std::span<const double> levels,
                                     double ci_level) {
  return predict_intervals(ConditionalDistribution(model, x), levels, ci_level);
}

IntervalPrediction predict_intervals(const ConditionalDistribution& cd,
                                     std::span<const double> levels,
                                     double ci_level) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && levels[i] < 1.0)) {
      throw ConfigError("predict_intervals: levels must lie in (0,1)");
    }
    if (i > 0 && levels[i] < levels[i - 1]) {
      throw ConfigError("predict_intervals: levels must be sorted");
    }
  }

  const QuantileModel& model = cd.model();
  KernelMoments moments = cd.plug_in_moments();

  IntervalPrediction out;
  out.n_eff = cd.neighborhood_size();
  out.ball_fraction = cd.ball_fraction();
  out.m1 = moments.m1;
  out.m2 = moments.m2;

  for (double alpha : levels) {
    CiFailure failure = CiFailure::none;
    out.levels.push_back(interval_entry(cd, moments, alpha, ci_level, failure));
  }

  // Clip sub-tolerance inversions from bisection noise.
  const double clip =
      1e-8 * (model.response_max() - model.response_min() +
              2.0 * model.response_bandwidth());
  for (std::size_t i = 1; i < out.levels.size(); ++i) {
    double prev = out.levels[i - 1].quantile;
    double cur = out.levels[i].quantile;
    if (cur < prev && prev - cur <= 2.0 * clip) {
      out.levels[i].quantile = prev;
    }
  }
  return out;
}

}  // namespace fquant
