#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fquant/curve.hpp"
#include "fquant/survival.hpp"

namespace fquant {

// One day of smart-meter data: the (always complete) temperature profile and
// the hourly load readings. On a censored day the meter stopped reporting
// after hour t_c, so `load` holds exactly the observed prefix.
struct DayRecord {
  std::string day_id;
  Curve temperature;
  std::vector<double> load;
  std::optional<int> censor_hour;  // t_c in [1, 24] when censored

  void validate(int hours_per_day = 24) const;
};

// Peak demand of the day: max over the full 24 readings when complete
// (delta = 1), max over the observed prefix when censored (delta = 0).
CensoredPair extract_response(const DayRecord& rec);

// Mean absolute prediction error of the conditional medians against the true
// peaks: (1/N) sum |P_d - med_d| / P_d. Truths must be strictly positive.
double mape(std::span<const double> truths, std::span<const double> medians);

// Fraction of truths falling inside [lower_d, upper_d].
double interval_coverage(std::span<const double> truths,
                         std::span<const double> lowers,
                         std::span<const double> uppers);

}  // namespace fquant
