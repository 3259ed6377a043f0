#include "fquant/kernels.hpp"

#include <vector>

#include "fquant/errors.hpp"

namespace fquant {

double estimate_tau(const DistanceProfile& profile, double h, double s) {
  double denom = profile.cdf(h);
  if (denom <= 0.0) {
    throw EmptyBall("estimate_tau: no curve within bandwidth of the query");
  }
  return profile.cdf(s * h) / denom;
}

double estimate_tau(const Curve& x, std::span<const Curve> data,
                    const SemiMetricSpec& spec, double h, double s) {
  if (data.empty()) {
    throw EmptyDataset("estimate_tau: empty dataset");
  }
  std::vector<double> d;
  d.reserve(data.size());
  for (const Curve& c : data) d.push_back(distance(x, c, spec));
  return estimate_tau(DistanceProfile(std::move(d)), h, s);
}

}  // namespace fquant
