#pragma once

namespace fquant {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

// Standard normal quantile for p in (0,1). Acklam's rational approximation
// refined by two Newton steps; absolute error well below 1e-12 away from the
// extreme tails. Throws ConfigError outside (0,1).
double normal_quantile(double p);

}  // namespace fquant
