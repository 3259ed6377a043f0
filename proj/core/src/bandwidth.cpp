#include "fquant/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fquant/errors.hpp"
#include "fquant/kernels.hpp"
#include "fquant/parallel.hpp"
#include "weighted_cdf.hpp"

namespace fquant {

double response_bandwidth_rule(std::span<const CensoredPair> pairs, int k) {
  double sum = 0.0, sum2 = 0.0;
  std::size_t m = 0;
  double scale = 1.0;
  for (const auto& p : pairs) {
    if (!p.uncensored) continue;
    sum += p.y;
    sum2 += p.y * p.y;
    scale = std::max(scale, std::abs(p.y));
    ++m;
  }
  if (m == 0) {
    throw InsufficientData("response_bandwidth_rule: no uncensored responses");
  }
  double var = m > 1 ? (sum2 - sum * sum / m) / (m - 1) : 0.0;
  double sd = var > 0.0 ? std::sqrt(var) : 1e-9 * scale;  // degenerate scale floor
  return sd * std::pow(static_cast<double>(k) / pairs.size(), 0.2);
}

double BandwidthSelection::curve_bandwidth_at(const Curve& x,
                                              std::span<const Curve> training) const {
  return knn_bandwidth(x, training, semimetric, k);
}

double knn_bandwidth(const Curve& x, std::span<const Curve> training,
                     const SemiMetricSpec& spec, int k) {
  if (training.empty()) throw EmptyDataset("knn_bandwidth: no training curves");
  if (k < 1 || k > static_cast<int>(training.size())) {
    throw ConfigError("knn_bandwidth: k out of range");
  }
  std::vector<double> d;
  d.reserve(training.size());
  for (const Curve& c : training) d.push_back(distance(x, c, spec));
  std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
  return d[k - 1];
}

namespace {

struct FoldResult {
  // per k-grid entry
  std::vector<double> contribution;
  std::vector<bool> feasible;
};

}  // namespace

BandwidthSelection select_bandwidth(std::span<const Curve> curves,
                                    std::span<const CensoredPair> pairs,
                                    const SemiMetricSpec& spec, double alpha,
                                    std::span<const int> k_grid) {
  const std::size_t n = curves.size();
  if (n == 0 || pairs.size() != n) {
    throw LengthMismatch("select_bandwidth: curves and pairs lengths differ");
  }
  if (k_grid.empty()) throw ConfigError("select_bandwidth: empty k grid");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("select_bandwidth: alpha must lie in (0,1)");
  }
  int k_max = 0;
  for (int k : k_grid) {
    if (k < 2) throw ConfigError("select_bandwidth: k must be >= 2");
    k_max = std::max(k_max, k);
  }
  if (n < static_cast<std::size_t>(k_max) + 1) {
    throw InsufficientData("select_bandwidth: need at least max(k)+1 observations");
  }

  const std::size_t n_uncensored =
      static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(),
                                             [](const CensoredPair& p) { return p.uncensored; }));
  if (n_uncensored == 0) {
    throw AllFoldsEmpty(
        "select_bandwidth: all observations censored, criterion weights are zero");
  }

  // Semi-metric transforms, computed once.
  std::vector<Curve> metric;
  metric.reserve(n);
  for (const Curve& c : curves) {
    metric.push_back(spec.derivative_order() == 2 ? second_derivative(c) : c);
  }

  // Full-sample censoring fit for the criterion weights.
  KaplanMeierFit km = KaplanMeierFit::fit(pairs);

  std::vector<double> h_response(k_grid.size());
  for (std::size_t g = 0; g < k_grid.size(); ++g) {
    h_response[g] = response_bandwidth_rule(pairs, k_grid[g]);
  }

  QuadraticKernel kernel;
  std::vector<FoldResult> folds(n);

  parallel_for(n, [&](std::size_t i) {
    auto& fold = folds[i];
    fold.contribution.assign(k_grid.size(), 0.0);
    fold.feasible.assign(k_grid.size(), true);
    if (!pairs[i].uncensored) return;  // zero criterion weight, skip the fold

    // Distances to the other n-1 curves, sorted ascending.
    std::vector<std::pair<double, std::size_t>> neigh;
    neigh.reserve(n - 1);
    const auto& g = metric[i].grid();
    const auto& vi = metric[i].values();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& vj = metric[j].values();
      double acc = 0.0;
      for (std::size_t p = 0; p + 1 < g.size(); ++p) {
        double f0 = vi[p] - vj[p];
        double f1 = vi[p + 1] - vj[p + 1];
        acc += (g[p + 1] - g[p]) * 0.5 * (f0 * f0 + f1 * f1);
      }
      neigh.emplace_back(std::sqrt(acc), j);
    }
    std::sort(neigh.begin(), neigh.end());

    // The fold's own censoring fit, without observation i.
    std::vector<CensoredPair> rest;
    rest.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rest.push_back(pairs[j]);
    }
    KaplanMeierFit loo_km = KaplanMeierFit::fit(rest);

    const double score_weight = km.inverse_weight_at(pairs[i].y);

    std::vector<double> ys, ws;
    for (std::size_t gidx = 0; gidx < k_grid.size(); ++gidx) {
      const int k = k_grid[gidx];
      const double h = neigh[k - 1].first;
      if (!(h > 0.0)) {
        fold.feasible[gidx] = false;
        continue;
      }
      ys.clear();
      ws.clear();
      double sum_delta = 0.0;
      double y_lo = std::numeric_limits<double>::infinity();
      double y_hi = -y_lo;
      for (int m = 0; m < k; ++m) {
        const auto& [d, j] = neigh[m];
        double w = kernel(d / h);
        sum_delta += w;
        const auto& pj = pairs[j];
        ys.push_back(pj.y);
        ws.push_back(pj.uncensored ? w * loo_km.inverse_weight_at(pj.y) : 0.0);
        y_lo = std::min(y_lo, pj.y);
        y_hi = std::max(y_hi, pj.y);
      }
      if (!(sum_delta > 0.0)) {
        fold.feasible[gidx] = false;
        continue;
      }
      for (double& w : ws) w /= sum_delta;
      const double hh = h_response[gidx];
      auto inv = detail::invert_weighted_cdf(ys, ws, hh, alpha, y_lo - hh, y_hi + hh);
      fold.contribution[gidx] =
          score_weight * pinball_loss(alpha, pairs[i].y - inv.value);
    }
  });

  BandwidthSelection out;
  out.semimetric = spec;
  out.grid.assign(k_grid.begin(), k_grid.end());
  out.scores.assign(k_grid.size(), std::numeric_limits<double>::quiet_NaN());

  bool any_feasible = false;
  for (std::size_t gidx = 0; gidx < k_grid.size(); ++gidx) {
    double score = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!folds[i].feasible[gidx]) {
        ok = false;
        break;
      }
      score += folds[i].contribution[gidx];
    }
    if (!ok) continue;
    out.scores[gidx] = score;
    any_feasible = true;
  }
  if (!any_feasible) {
    throw AllFoldsEmpty("select_bandwidth: every candidate k had an empty fold");
  }

  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  // iterate in ascending k so ties resolve toward smaller k
  std::vector<std::size_t> order(k_grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return k_grid[a] < k_grid[b]; });
  for (std::size_t gidx : order) {
    double s = out.scores[gidx];
    if (std::isnan(s)) continue;
    if (s < best_score) {
      best_score = s;
      best = gidx;
    }
  }

  out.k = k_grid[best];
  out.response_bandwidth = h_response[best];
  out.cv_score = best_score;
  return out;
}

}  // namespace fquant
