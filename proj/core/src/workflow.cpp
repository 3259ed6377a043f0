#include "fquant/workflow.hpp"

#include <algorithm>
#include <cmath>

#include "fquant/errors.hpp"

namespace fquant {

void DayRecord::validate(int hours_per_day) const {
  if (censor_hour) {
    if (*censor_hour < 1 || *censor_hour > hours_per_day) {
      throw ConfigError("DayRecord: censor hour out of [1," +
                        std::to_string(hours_per_day) + "]");
    }
    if (static_cast<int>(load.size()) != *censor_hour) {
      throw ConfigError("DayRecord: censored day must hold exactly t_c readings");
    }
  } else if (static_cast<int>(load.size()) != hours_per_day) {
    throw ConfigError("DayRecord: complete day must hold all hourly readings");
  }
}

CensoredPair extract_response(const DayRecord& rec) {
  if (rec.load.empty()) {
    throw EmptyLoad("extract_response: no load readings for day " + rec.day_id);
  }
  double peak = *std::max_element(rec.load.begin(), rec.load.end());
  return CensoredPair{peak, !rec.censor_hour.has_value()};
}

double mape(std::span<const double> truths, std::span<const double> medians) {
  if (truths.size() != medians.size()) {
    throw LengthMismatch("mape: truths and medians lengths differ");
  }
  if (truths.empty()) {
    throw EmptyDataset("mape: no observations");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (!(truths[i] > 0.0)) {
      throw NonpositiveTruth("mape: truths must be strictly positive");
    }
    acc += std::abs(truths[i] - medians[i]) / truths[i];
  }
  return acc / static_cast<double>(truths.size());
}

double interval_coverage(std::span<const double> truths,
                         std::span<const double> lowers,
                         std::span<const double> uppers) {
  if (truths.size() != lowers.size() || truths.size() != uppers.size()) {
    throw LengthMismatch("interval_coverage: input lengths differ");
  }
  if (truths.empty()) {
    throw EmptyDataset("interval_coverage: no observations");
  }
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] >= lowers[i] && truths[i] <= uppers[i]) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(truths.size());
}

}  // namespace fquant
