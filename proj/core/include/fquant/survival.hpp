#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fquant {

// One right-censored observation: y = min(lifetime, censoring time) and the
// indicator of whether the lifetime was actually observed.
struct CensoredPair {
  double y = 0.0;
  bool uncensored = true;  // delta = 1 iff T <= C
};

// Side of a step-function evaluation.
enum class StepSide { at, left_limit };

// Kaplan-Meier product-limit estimate of the censoring survival function
//   Gbar_n(t) = prod_i (1 - (1 - delta_(i)) / (n - i + 1))^{1{Y_(i) <= t}}
// for t < Y_(n), and 0 from Y_(n) on. Ties in y place uncensored before
// censored observations, original index as the final tiebreak.
//
// Step values are accumulated as exact integer fractions while numerator and
// denominator fit in 53 bits (so each stored double is the correctly rounded
// rational), falling back to a running double product beyond that.
class KaplanMeierFit {
public:
  static KaplanMeierFit fit(std::span<const CensoredPair> pairs);

  // Gbar_n(t) (side = at) or Gbar_n(t-) (side = left_limit).
  double survival(double t, StepSide side = StepSide::at) const;

  // Clamped inverse 1 / max(Gbar_n(y-), 1/n) used in censoring weights. The
  // left limit keeps the weight finite at the largest observation; the clamp
  // bounds any single weight by n.
  double inverse_weight_at(double y) const;

  std::size_t size() const { return sorted_y_.size(); }
  const std::vector<double>& sorted_y() const { return sorted_y_; }
  const std::vector<bool>& concomitant_uncensored() const { return sorted_delta_; }
  // Gbar_n just after each order statistic Y_(i).
  const std::vector<double>& step_values() const { return step_values_; }

private:
  KaplanMeierFit() = default;

  std::vector<double> sorted_y_;
  std::vector<bool> sorted_delta_;
  std::vector<double> step_values_;
};

// Spec-style free-function evaluation.
double survival_at(const KaplanMeierFit& fit, double t, StepSide side = StepSide::at);

KaplanMeierFit fit_km(std::span<const CensoredPair> pairs);

}  // namespace fquant
