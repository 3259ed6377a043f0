#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fquant/curve.hpp"
#include "fquant/survival.hpp"

namespace fquant {

// Deterministic sampler on top of mt19937_64. Variates are derived from raw
// 53-bit uniforms so output is identical across standard-library versions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0,1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal();
  double exponential(double rate);

private:
  std::mt19937_64 gen_;
};

enum class ErrorDist { normal, exponential };

// Named link functionals m(X). Only the value mean is defined; it keeps
// true_quantile closed-form.
enum class LinkFunctional { curve_mean };

// Stationary ergodic generator with known conditional quantiles. Curve
// amplitudes follow an AR(1) chain started from its stationary law; each
// curve is amplitude * sine plus an amplitude-proportional intercept, so the
// link  m(X) = mean of the curve values  recovers 0.1 * amplitude + baseline.
// Responses are T = m(X) + noise_scale * error; censoring times are i.i.d.
// exponential with the rate calibrated to hit the target censoring fraction.
struct SimModel {
  int points_per_curve = 24;
  double ar_coefficient = 0.5;   // |.| < 1
  LinkFunctional link = LinkFunctional::curve_mean;
  double noise_scale = 1.0;      // > 0
  ErrorDist error_dist = ErrorDist::normal;
  double censor_rate = 0.0;      // target P(T > C), in [0,1)
  double baseline = 0.0;         // location shift of the curve level
  std::uint64_t seed = 0;

  void validate() const;

  // m(x) under the model's link.
  double link_value(const Curve& x) const;
};

struct SimulatedData {
  std::vector<Curve> curves;
  std::vector<CensoredPair> observed;   // (Y, delta)
  std::vector<double> lifetimes;        // hidden T
  std::vector<double> censor_times;     // hidden C (+inf when censor_rate = 0)
  std::vector<double> amplitudes;       // hidden AR chain
  double censor_exponential_rate = 0.0; // 0 when censoring disabled
};

// Generates n observations. Reproducible: identical (model, n) with an
// identical seed yields bit-identical output. Throws CalibrationFailed when
// the target censoring fraction is unreachable.
SimulatedData generate(const SimModel& model, int n);

// Exact conditional quantile of T given X = x under the model:
//   normal errors:       m(x) + noise_scale * Phi^{-1}(alpha)
//   exponential errors:  m(x) - noise_scale * ln(1 - alpha)
double true_quantile(const SimModel& model, const Curve& x, double alpha);

}  // namespace fquant
