#pragma once

// Shared test utilities: deterministic random curve generators and
// independent brute-force oracles kept separate from the library code paths
// they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fquant/curve.hpp"
#include "fquant/semimetric.hpp"
#include "fquant/simulate.hpp"
#include "fquant/survival.hpp"

namespace testutil {

// Smooth random curve on the hourly grid: a few random sine/cosine harmonics
// plus an affine part.
inline fquant::Curve random_curve(fquant::Rng& rng, int points = 24) {
  std::vector<double> v(points);
  double a1 = 2.0 * rng.uniform01() - 1.0;
  double a2 = 2.0 * rng.uniform01() - 1.0;
  double c = 2.0 * rng.uniform01() - 1.0;
  double slope = 0.2 * (2.0 * rng.uniform01() - 1.0);
  for (int j = 0; j < points; ++j) {
    double s = (j + 1.0) / points;
    v[j] = a1 * std::sin(2.0 * M_PI * s) + a2 * std::cos(4.0 * M_PI * s) + c +
           slope * (j + 1.0);
  }
  return fquant::Curve::on_hours(std::move(v));
}

inline std::vector<fquant::Curve> random_curves(fquant::Rng& rng, int n,
                                                int points = 24) {
  std::vector<fquant::Curve> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(random_curve(rng, points));
  return out;
}

// Exact rational arithmetic for the product-limit oracle. Small cases only.
struct Fraction {
  long long num = 0;
  long long den = 1;

  static Fraction of(long long n, long long d) {
    Fraction f{n, d};
    f.reduce();
    return f;
  }
  void reduce() {
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }
  Fraction operator*(const Fraction& o) const {
    Fraction f{num * o.num, den * o.den};
    f.reduce();
    return f;
  }
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

// Brute-force evaluation of the product-limit censoring survival at t,
// directly from the sorted-order product formula, in exact rationals.
// Ties: uncensored first at equal y.
inline double km_survival_oracle(std::vector<fquant::CensoredPair> pairs, double t) {
  const std::size_t n = pairs.size();
  std::sort(pairs.begin(), pairs.end(),
            [](const fquant::CensoredPair& a, const fquant::CensoredPair& b) {
              if (a.y != b.y) return a.y < b.y;
              return a.uncensored && !b.uncensored;
            });
  if (t >= pairs.back().y) return 0.0;
  Fraction prod{1, 1};
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& p = pairs[i - 1];
    if (p.y <= t && !p.uncensored) {
      long long m = static_cast<long long>(n - i + 1);
      prod = prod * Fraction::of(m - 1, m);
    }
  }
  return prod.value();
}

// Independent complete-data conditional CDF (Nadaraya-Watson weights with the
// quadratic kernel and the integrated quadratic smoothing CDF), with the
// kernel formulas written out inline.
inline double nw_cdf_oracle(const std::vector<fquant::Curve>& curves,
                            const std::vector<double>& ys, const fquant::Curve& x,
                            const fquant::SemiMetricSpec& spec, double h_curve,
                            double h_response, double t) {
  auto kq = [](double u) { return (u >= 0.0 && u <= 1.0) ? 1.5 * (1.0 - u * u) : 0.0; };
  auto hcdf = [](double u) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return 0.5 + 0.75 * u - 0.25 * u * u * u;
  };
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    double w = kq(fquant::distance(x, curves[i], spec) / h_curve);
    num += w * hcdf((t - ys[i]) / h_response);
    den += w;
  }
  return num / den;
}

}  // namespace testutil
