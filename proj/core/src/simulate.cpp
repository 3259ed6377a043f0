#include "fquant/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fquant/errors.hpp"
#include "fquant/normal.hpp"

namespace fquant {

double Rng::normal() {
  double u1 = uniform01();
  while (u1 == 0.0) u1 = uniform01();
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::exponential(double rate) {
  // uniform01 is in [0,1), so the argument of log stays positive
  return -std::log1p(-uniform01()) / rate;
}

void SimModel::validate() const {
  if (points_per_curve < 3) {
    throw ConfigError("SimModel: need at least 3 points per curve");
  }
  if (!(std::abs(ar_coefficient) < 1.0)) {
    throw ConfigError("SimModel: |ar_coefficient| must be < 1");
  }
  if (!(noise_scale > 0.0)) {
    throw ConfigError("SimModel: noise_scale must be positive");
  }
  if (!(censor_rate >= 0.0 && censor_rate < 1.0)) {
    throw ConfigError("SimModel: censor_rate must lie in [0,1)");
  }
}

double SimModel::link_value(const Curve& x) const {
  switch (link) {
    case LinkFunctional::curve_mean:
    default:
      return x.value_mean();
  }
}

namespace {

constexpr double intercept_scale = 0.1;

// mean over the grid of sin(2 pi j / S), j = 1..S; analytically zero, kept
// numerical so the link m(X) = mean(values) is reproduced exactly.
double sine_mean(int points) {
  double s = 0.0;
  for (int j = 1; j <= points; ++j) {
    s += std::sin(2.0 * std::numbers::pi * j / points);
  }
  return s / points;
}

double draw_error(Rng& rng, ErrorDist dist) {
  return dist == ErrorDist::normal ? rng.normal() : rng.exponential(1.0);
}

// Calibrates the exponential censoring rate so that P(T > C) matches the
// target, using a fixed Monte-Carlo sample of stationary T draws. p(rate) is
// monotone, so plain bisection applies; the achievable maximum is P(T > 0).
double calibrate_rate(const SimModel& model, double sine_avg) {
  constexpr int mc = 100000;
  const double amp_sd = 1.0 / std::sqrt(1.0 - model.ar_coefficient * model.ar_coefficient);
  Rng rng(model.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<double> t(mc);
  for (int i = 0; i < mc; ++i) {
    double amp = amp_sd * rng.normal();
    // curve_mean link in closed form: mean(amp*sine + 0.1*amp + baseline)
    double link = amp * (sine_avg + intercept_scale) + model.baseline;
    t[i] = link + model.noise_scale * draw_error(rng, model.error_dist);
  }
  auto censored_prob = [&](double rate) {
    double acc = 0.0;
    for (double ti : t) {
      if (ti > 0.0) acc += 1.0 - std::exp(-rate * ti);
    }
    return acc / mc;
  };

  double hi = 1.0;
  while (censored_prob(hi) < model.censor_rate && hi < 1e12) hi *= 2.0;
  if (censored_prob(hi) < model.censor_rate - 1e-3) {
    throw CalibrationFailed(
        "generate: target censoring fraction unreachable for this model");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (censored_prob(mid) < model.censor_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SimulatedData generate(const SimModel& model, int n) {
  model.validate();
  if (n < 1) throw ConfigError("generate: n must be >= 1");

  const int points = model.points_per_curve;
  const double sine_avg = sine_mean(points);
  const bool censoring = model.censor_rate > 0.0;

  SimulatedData out;
  if (censoring) {
    out.censor_exponential_rate = calibrate_rate(model, sine_avg);
  }

  std::vector<double> grid(points);
  std::vector<double> sine(points);
  for (int j = 0; j < points; ++j) {
    grid[j] = j + 1.0;
    sine[j] = std::sin(2.0 * std::numbers::pi * (j + 1.0) / points);
  }

  Rng rng(model.seed);
  const double phi = model.ar_coefficient;
  const double amp_sd = 1.0 / std::sqrt(1.0 - phi * phi);

  out.curves.reserve(n);
  out.observed.reserve(n);
  out.lifetimes.reserve(n);
  out.censor_times.reserve(n);
  out.amplitudes.reserve(n);

  double amp = amp_sd * rng.normal();  // stationary start
  for (int i = 0; i < n; ++i) {
    if (i > 0) amp = phi * amp + rng.normal();
    out.amplitudes.push_back(amp);

    std::vector<double> values(points);
    for (int j = 0; j < points; ++j) {
      values[j] = amp * sine[j] + intercept_scale * amp + model.baseline;
    }
    Curve curve(grid, values);
    double link = model.link_value(curve);
    double t = link + model.noise_scale * draw_error(rng, model.error_dist);
    double c = censoring ? rng.exponential(out.censor_exponential_rate)
                         : std::numeric_limits<double>::infinity();
    out.curves.push_back(std::move(curve));
    out.lifetimes.push_back(t);
    out.censor_times.push_back(c);
    out.observed.push_back(CensoredPair{std::min(t, c), t <= c});
  }
  return out;
}

double true_quantile(const SimModel& model, const Curve& x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("true_quantile: alpha must lie in (0,1)");
  }
  const double link = model.link_value(x);
  if (model.error_dist == ErrorDist::normal) {
    return link + model.noise_scale * normal_quantile(alpha);
  }
  return link - model.noise_scale * std::log(1.0 - alpha);
}

}  // namespace fquant
