#include "fquant/survival.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "fquant/errors.hpp"

namespace fquant {

KaplanMeierFit KaplanMeierFit::fit(std::span<const CensoredPair> pairs) {
  const std::size_t n = pairs.size();
  if (n == 0) {
    throw EmptyDataset("KaplanMeierFit: no observations");
  }
  for (const auto& p : pairs) {
    if (!std::isfinite(p.y)) throw ConfigError("KaplanMeierFit: non-finite y");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pairs[a].y != pairs[b].y) return pairs[a].y < pairs[b].y;
    if (pairs[a].uncensored != pairs[b].uncensored) return pairs[a].uncensored;
    return a < b;
  });

  KaplanMeierFit out;
  out.sorted_y_.resize(n);
  out.sorted_delta_.resize(n);
  out.step_values_.resize(n);

  // Running product over censored factors (n-i)/(n-i+1), kept as an exact
  // reduced integer fraction while both parts stay below 2^53.
  const std::uint64_t exact_limit = std::uint64_t{1} << 53;
  std::uint64_t num = 1, den = 1;
  bool exact = true;
  double value = 1.0;

  for (std::size_t rank = 1; rank <= n; ++rank) {
    const auto& p = pairs[order[rank - 1]];
    out.sorted_y_[rank - 1] = p.y;
    out.sorted_delta_[rank - 1] = p.uncensored;
    if (!p.uncensored) {
      const std::uint64_t fn = n - rank;      // factor numerator
      const std::uint64_t fd = n - rank + 1;  // factor denominator
      if (exact) {
        if (num <= exact_limit / (fn == 0 ? 1 : fn) && den <= exact_limit / fd) {
          num *= fn;
          den *= fd;
          const std::uint64_t g = std::gcd(num == 0 ? den : num, den);
          num /= g;
          den /= g;
          value = static_cast<double>(num) / static_cast<double>(den);
        } else {
          exact = false;
          value *= static_cast<double>(fn) / static_cast<double>(fd);
        }
      } else {
        value *= static_cast<double>(fn) / static_cast<double>(fd);
      }
    }
    out.step_values_[rank - 1] = value;
  }
  return out;
}

double KaplanMeierFit::survival(double t, StepSide side) const {
  const double y_max = sorted_y_.back();
  if (side == StepSide::at) {
    if (t >= y_max) return 0.0;
    // largest rank with Y_(i) <= t
    auto it = std::upper_bound(sorted_y_.begin(), sorted_y_.end(), t);
    if (it == sorted_y_.begin()) return 1.0;
    return step_values_[static_cast<std::size_t>(it - sorted_y_.begin()) - 1];
  }
  if (t > y_max) return 0.0;
  // largest rank with Y_(i) < t
  auto it = std::lower_bound(sorted_y_.begin(), sorted_y_.end(), t);
  if (it == sorted_y_.begin()) return 1.0;
  return step_values_[static_cast<std::size_t>(it - sorted_y_.begin()) - 1];
}

double KaplanMeierFit::inverse_weight_at(double y) const {
  const double floor = 1.0 / static_cast<double>(sorted_y_.size());
  return 1.0 / std::max(survival(y, StepSide::left_limit), floor);
}

double survival_at(const KaplanMeierFit& fit, double t, StepSide side) {
  return fit.survival(t, side);
}

KaplanMeierFit fit_km(std::span<const CensoredPair> pairs) {
  return KaplanMeierFit::fit(pairs);
}

}  // namespace fquant
