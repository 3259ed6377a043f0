#pragma once

#include <span>

#include "fquant/curve.hpp"
#include "fquant/semimetric.hpp"

namespace fquant {

// Asymmetric smoothing kernel on [0,1] for curve distances:
//   K(u) = 1.5 (1 - u^2) on [0,1], zero elsewhere.
// Decreasing and C1 on its support with K(1) = 0.
struct QuadraticKernel {
  double operator()(double u) const {
    return (u >= 0.0 && u <= 1.0) ? 1.5 * (1.0 - u * u) : 0.0;
  }
  // K'(u) on the support.
  double derivative(double u) const { return -3.0 * u; }
  double at_one() const { return 0.0; }
};

inline double eval_K(double u) { return QuadraticKernel{}(u); }

// Smoothing distribution kernel for the response axis: the integral of the
// symmetric quadratic density H'(u) = 0.75 (1 - u^2) on [-1,1], so
//   H(u) = 0.5 + 0.75 u - 0.25 u^3 on [-1,1], clamped to {0,1} outside.
struct IntegratedQuadraticCdf {
  double cdf(double u) const {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return 0.5 + u * (0.75 - 0.25 * u * u);
  }
  double density(double u) const {
    return (u > -1.0 && u < 1.0) ? 0.75 * (1.0 - u * u) : 0.0;
  }
};

inline double eval_H(double u) { return IntegratedQuadraticCdf{}.cdf(u); }
inline double eval_H1(double u) { return IntegratedQuadraticCdf{}.density(u); }

// Plug-in kernel constants
//   M_j = K^j(1) - integral_0^1 (K^j)'(t) tau(t) dt,  j = 1, 2,
// entering the asymptotic variance of the quantile estimator. tau is either
// the limit small-ball ratio tau_0 or its empirical counterpart tau_n.
struct KernelMoments {
  double m1;
  double m2;
};

// Composite Simpson quadrature of M_1, M_2; tau must be evaluable on [0,1].
// nodes must be odd and >= 3 (default 201, dense enough that the jitter of a
// step-function tau stays below 1e-3). Any decreasing C1 kernel on [0,1] with
// operator(), derivative() and at_one() fits the Kernel slot; only the
// quadratic one is checked against closed forms.
template <class Tau, class Kernel = QuadraticKernel>
KernelMoments kernel_moments(Tau&& tau, int nodes = 201, Kernel k = {}) {
  if (nodes < 3) nodes = 3;
  if (nodes % 2 == 0) ++nodes;
  auto integrand = [&](double t, int j) {
    // (K^1)'(t) = K'(t); (K^2)'(t) = 2 K(t) K'(t).
    double kp = k.derivative(t);
    if (j == 1) return kp * tau(t);
    return 2.0 * k(t) * kp * tau(t);
  };
  double h = 1.0 / static_cast<double>(nodes - 1);
  double acc[2] = {0.0, 0.0};
  for (int j = 1; j <= 2; ++j) {
    double s = integrand(0.0, j) + integrand(1.0, j);
    for (int i = 1; i + 1 < nodes; ++i) {
      double t = static_cast<double>(i) * h;
      s += (i % 2 == 1 ? 4.0 : 2.0) * integrand(t, j);
    }
    acc[j - 1] = s * h / 3.0;
  }
  double k1 = k.at_one();
  return KernelMoments{k1 - acc[0], k1 * k1 - acc[1]};
}

// Empirical small-ball ratio tau_n(s) = F_{x,n}(s h) / F_{x,n}(h) for
// s in [0,1]. Throws EmptyBall when no curve lies within h of x.
double estimate_tau(const Curve& x, std::span<const Curve> data,
                    const SemiMetricSpec& spec, double h, double s);

// Same ratio from a precomputed distance profile.
double estimate_tau(const DistanceProfile& profile, double h, double s);

}  // namespace fquant
