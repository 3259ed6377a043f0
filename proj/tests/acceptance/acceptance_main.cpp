// Acceptance suite: eight end-to-end checks covering oracle equivalence,
// invariant properties, simulation-based asymptotics and the CLI pipeline.
// Prints one PASS/FAIL line per criterion; exits with the failure count.
//
// argv[1]: path to the fquant CLI binary
// argv[2]: path to the frozen-data directory (expected metrics)

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fquant/bandwidth.hpp"
#include "fquant/errors.hpp"
#include "fquant/estimator.hpp"
#include "fquant/io.hpp"
#include "fquant/kernels.hpp"
#include "fquant/normal.hpp"
#include "fquant/parallel.hpp"
#include "fquant/simulate.hpp"
#include "fquant/survival.hpp"
#include "../unit/helpers.hpp"

using namespace fquant;
namespace fs = std::filesystem;

namespace {

std::string g_cli_binary;
fs::path g_data_dir;

// ---------------------------------------------------------------- utilities

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd = g_cli_binary + " " + args + " >" + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// k grid growing geometrically up to about n/4
std::vector<int> geometric_grid(int n) {
  std::vector<int> grid;
  for (int k = 4; k <= n / 4; k *= 2) grid.push_back(k);
  if (grid.empty()) grid.push_back(std::min(4, n - 1));
  return grid;
}

Curve amplitude_curve(double amplitude, double baseline = 0.0, int points = 24) {
  std::vector<double> v(points);
  for (int j = 0; j < points; ++j) {
    v[j] = amplitude * std::sin(2.0 * M_PI * (j + 1.0) / points) +
           0.1 * amplitude + baseline;
  }
  return Curve::on_hours(std::move(v));
}

// median |qhat_0.5 - q_0.5| at a fixed query over `reps` replications
double median_abs_error(int n, int reps, std::uint64_t seed_base) {
  SimModel sim;
  sim.ar_coefficient = 0.5;
  sim.noise_scale = 1.0;
  sim.censor_rate = 0.3;

  Curve x = amplitude_curve(0.8);
  const double q_true = true_quantile(sim, x, 0.5);
  std::vector<double> errors(reps);

  parallel_for(reps, [&](std::size_t r) {
    SimModel local = sim;
    local.seed = seed_base + r;
    SimulatedData d = generate(local, n);
    auto sel = select_bandwidth(d.curves, d.observed,
                                SemiMetricSpec::second_derivative_l2(), 0.5,
                                geometric_grid(n));
    QuantileModel base(d.curves, d.observed, SemiMetricSpec::second_derivative_l2(),
                       1.0, sel.response_bandwidth);
    auto dist = base.distances_to(x);
    std::vector<double> sorted(dist);
    std::nth_element(sorted.begin(), sorted.begin() + (sel.k - 1), sorted.end());
    ConditionalDistribution cd(base.with_curve_bandwidth(sorted[sel.k - 1]),
                               std::move(dist));
    errors[r] = std::abs(cd.quantile(0.5).value - q_true);
  });

  std::sort(errors.begin(), errors.end());
  return 0.5 * (errors[(reps - 1) / 2] + errors[reps / 2]);
}

// --------------------------------------------------------------- criteria

bool criterion1_km_oracle(std::string& detail) {
  const std::vector<double> ys = {0.7, 1.1, 2.0, 2.4, 3.3, 4.8};
  const int n = 6;
  std::size_t checked = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<CensoredPair> pairs;
    for (int i = 0; i < n; ++i) {
      pairs.push_back({ys[i], (mask >> i & 1u) == 1u});
    }
    KaplanMeierFit fit = KaplanMeierFit::fit(pairs);
    // just after each order statistic, at midpoints, and beyond the maximum
    for (int i = 0; i < n; ++i) {
      double t = ys[i];
      if (fit.survival(t) != testutil::km_survival_oracle(pairs, t)) {
        detail = "step mismatch at mask " + std::to_string(mask);
        return false;
      }
      ++checked;
      double mid = t + 0.05;
      if (fit.survival(mid) != testutil::km_survival_oracle(pairs, mid)) {
        detail = "midpoint mismatch at mask " + std::to_string(mask);
        return false;
      }
      ++checked;
    }
    if (fit.survival(10.0) != 0.0) {
      detail = "tail not zero at mask " + std::to_string(mask);
      return false;
    }
  }
  detail = std::to_string(checked) + " exact comparisons over 64 patterns";
  return true;
}

bool criterion2_uncensored_reduction(std::string& detail) {
  Rng rng(9001);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    int n = 20 + static_cast<int>(rng.uniform01() * 81);
    auto curves = testutil::random_curves(rng, n);
    std::vector<CensoredPair> pairs;
    std::vector<double> ys;
    for (int i = 0; i < n; ++i) {
      double y = 5.0 * rng.uniform01() - 2.0;
      pairs.push_back({y, true});
      ys.push_back(y);
    }
    SemiMetricSpec spec = rep % 2 == 0 ? SemiMetricSpec::plain_l2()
                                       : SemiMetricSpec::second_derivative_l2();
    double h_response = 0.2 + rng.uniform01();
    QuantileModel base(curves, pairs, spec, 1.0, h_response);

    for (int probe = 0; probe < 20; ++probe) {
      Curve x = testutil::random_curve(rng);
      auto d = base.distances_to(x);
      double h = *std::max_element(d.begin(), d.end()) * 1.3 + 1e-9;
      QuantileModel m = base.with_curve_bandwidth(h);
      double t = 7.0 * rng.uniform01() - 3.0;
      double got = conditional_cdf(m, x, t);
      double expect = testutil::nw_cdf_oracle(curves, ys, x, spec, h, h_response, t);
      worst = std::max(worst, std::abs(got - expect));
      if (worst > 1e-12) {
        detail = "max |diff| = " + std::to_string(worst);
        return false;
      }
    }
  }
  std::ostringstream ss;
  ss << "50 datasets x 20 probes, max |diff| = " << worst;
  detail = ss.str();
  return true;
}

bool criterion3_kernel_moments(std::string& detail) {
  KernelMoments m = kernel_moments([](double u) { return u; });
  std::ostringstream ss;
  ss << "M1 = " << m.m1 << ", M2 = " << m.m2;
  detail = ss.str();
  return std::abs(m.m1 - 1.0) < 1e-6 && std::abs(m.m2 - 1.2) < 1e-6;
}

bool criterion4_property_suite(std::string& detail) {
  Rng rng(424242);
  std::size_t cases = 0, violations = 0;

  // a pool of simulated models with mixed censoring
  struct Pool {
    SimulatedData data;
    QuantileModel base;
  };
  std::vector<Pool> pools;
  for (int p = 0; p < 8; ++p) {
    SimModel sim;
    sim.censor_rate = (p % 4) * 0.12;
    sim.noise_scale = 0.5 + 0.25 * (p % 3);
    sim.seed = 5000 + p;
    SimulatedData d = generate(sim, 50 + 10 * p);
    QuantileModel base(d.curves, d.observed,
                       p % 2 == 0 ? SemiMetricSpec::second_derivative_l2()
                                  : SemiMetricSpec::plain_l2(),
                       1.0, 0.25 + 0.1 * (p % 3));
    pools.push_back(Pool{std::move(d), std::move(base)});
  }

  auto pick_query = [&](const Pool& pool) {
    std::size_t i =
        static_cast<std::size_t>(rng.uniform01() * pool.data.curves.size());
    Curve x = pool.data.curves[i];
    auto dist = pool.base.distances_to(x);
    std::vector<double> sorted(dist);
    std::sort(sorted.begin(), sorted.end());
    double h = sorted[sorted.size() / 2] + 1e-9;  // cover half the sample
    return ConditionalDistribution(pool.base.with_curve_bandwidth(h),
                                   std::move(dist));
  };

  // 1) CDF monotone in t: 250 random (t1 <= t2) pairs
  for (int c = 0; c < 250; ++c) {
    const Pool& pool = pools[c % pools.size()];
    ConditionalDistribution cd = pick_query(pool);
    double span = pool.base.response_max() - pool.base.response_min();
    double t1 = pool.base.response_min() - 0.5 + (span + 1.0) * rng.uniform01();
    double t2 = pool.base.response_min() - 0.5 + (span + 1.0) * rng.uniform01();
    if (t1 > t2) std::swap(t1, t2);
    ++cases;
    if (cd.cdf(t1) > cd.cdf(t2) + 1e-15) ++violations;
  }

  // 2) quantiles monotone in alpha: 250 random pairs
  for (int c = 0; c < 250; ++c) {
    const Pool& pool = pools[(c + 1) % pools.size()];
    ConditionalDistribution cd = pick_query(pool);
    double a1 = 0.02 + 0.96 * rng.uniform01();
    double a2 = 0.02 + 0.96 * rng.uniform01();
    if (a1 > a2) std::swap(a1, a2);
    ++cases;
    if (cd.quantile(a1).value > cd.quantile(a2).value + 1e-12) ++violations;
  }

  // 3) locality under out-of-ball insertions (uncensored weights)
  for (int c = 0; c < 250; ++c) {
    int n = 15 + static_cast<int>(rng.uniform01() * 20);
    auto curves = testutil::random_curves(rng, n);
    std::vector<CensoredPair> pairs;
    for (int i = 0; i < n; ++i) pairs.push_back({3.0 * rng.uniform01(), true});
    SemiMetricSpec l2 = SemiMetricSpec::plain_l2();
    Curve x = testutil::random_curve(rng);
    QuantileModel a(curves, pairs, l2, 1.0, 0.4);
    auto dist = a.distances_to(x);
    double h = *std::max_element(dist.begin(), dist.end()) * 0.8 + 1e-12;

    auto curves_b = curves;
    curves_b.push_back(Curve::on_hours(std::vector<double>(24, 300.0 + c)));
    auto pairs_b = pairs;
    pairs_b.push_back({1.0 + rng.uniform01(), true});
    QuantileModel b(curves_b, pairs_b, l2, 1.0, 0.4);

    double t = 3.0 * rng.uniform01();
    ++cases;
    if (conditional_cdf(a.with_curve_bandwidth(h), x, t) !=
        conditional_cdf(b.with_curve_bandwidth(h), x, t)) {
      ++violations;
    }
  }

  // 4) density integrates back to the CDF within 1e-6
  for (int c = 0; c < 250; ++c) {
    const Pool& pool = pools[(c + 3) % pools.size()];
    ConditionalDistribution cd = pick_query(pool);
    double lo = pool.base.response_min() - pool.base.response_bandwidth();
    double span = pool.base.response_max() - pool.base.response_min() +
                  2.0 * pool.base.response_bandwidth();
    double t = lo + span * (0.3 + 0.7 * rng.uniform01());
    const int nodes = 3001;
    double step = (t - lo) / (nodes - 1);
    double s = cd.density(lo) + cd.density(t);
    for (int i = 1; i + 1 < nodes; ++i) {
      s += (i % 2 == 1 ? 4.0 : 2.0) * cd.density(lo + i * step);
    }
    double integral = s * step / 3.0;
    ++cases;
    if (std::abs(integral - (cd.cdf(t) - cd.cdf(lo))) > 1e-6) ++violations;
  }

  std::ostringstream ss;
  ss << cases << " cases, " << violations << " violations";
  detail = ss.str();
  return violations == 0 && cases == 1000;
}

bool criterion5_consistency_trend(std::string& detail) {
  double e100 = median_abs_error(100, 50, 100000);
  double e400 = median_abs_error(400, 50, 200000);
  double e1600 = median_abs_error(1600, 50, 300000);
  std::ostringstream ss;
  ss << "median |error| n=100: " << e100 << ", n=400: " << e400
     << ", n=1600: " << e1600;
  detail = ss.str();
  return e100 > e400 && e400 > e1600;
}

bool criterion6_normality(std::string& detail) {
  const int reps = 300, n = 500;
  SimModel sim;
  sim.ar_coefficient = 0.5;
  sim.noise_scale = 1.0;
  sim.censor_rate = 0.25;

  Curve x = amplitude_curve(0.0);
  const double q_true = true_quantile(sim, x, 0.5);
  const double alpha = 0.5;
  std::vector<double> z(reps);

  parallel_for(reps, [&](std::size_t r) {
    SimModel local = sim;
    local.seed = 700000 + r;
    SimulatedData d = generate(local, n);
    auto sel = select_bandwidth(d.curves, d.observed,
                                SemiMetricSpec::second_derivative_l2(), alpha,
                                geometric_grid(n));
    QuantileModel base(d.curves, d.observed, SemiMetricSpec::second_derivative_l2(),
                       1.0, sel.response_bandwidth);
    auto dist = base.distances_to(x);
    std::vector<double> sorted(dist);
    std::nth_element(sorted.begin(), sorted.begin() + (sel.k - 1), sorted.end());
    ConditionalDistribution cd(base.with_curve_bandwidth(sorted[sel.k - 1]),
                               std::move(dist));

    double q = cd.quantile(alpha).value;
    KernelMoments mm = cd.plug_in_moments();
    double dens = cd.density(q);
    double gbar = cd.model().km().survival(q);
    double gbar_inv = 1.0 / std::max(gbar, 1.0 / n);
    double se = std::sqrt(mm.m2) / (mm.m1 * dens) *
                std::sqrt(alpha * (gbar_inv - alpha) /
                          (static_cast<double>(n) * cd.ball_fraction()));
    z[r] = (q - q_true) / se;
  });

  std::sort(z.begin(), z.end());
  double ks = 0.0;
  for (int i = 0; i < reps; ++i) {
    double cdf = normal_cdf(z[i]);
    ks = std::max(ks, std::abs((i + 1.0) / reps - cdf));
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / reps));
  }
  std::ostringstream ss;
  ss << "KS distance = " << ks << " over " << reps << " replications";
  detail = ss.str();
  return ks < 0.1;
}

bool criterion7_coverage(std::string& detail) {
  const int n = 500, n_test = 300;
  SimModel sim;
  sim.ar_coefficient = 0.5;
  sim.noise_scale = 1.0;
  sim.censor_rate = 0.3;
  sim.seed = 881;

  SimulatedData train = generate(sim, n);
  SimModel test_model = sim;
  test_model.seed = 882;
  SimulatedData test = generate(test_model, n_test);

  auto sel = select_bandwidth(train.curves, train.observed,
                              SemiMetricSpec::second_derivative_l2(), 0.5,
                              geometric_grid(n));
  QuantileModel base(train.curves, train.observed,
                     SemiMetricSpec::second_derivative_l2(), 1.0,
                     sel.response_bandwidth);

  std::vector<int> hit(n_test, 0);
  parallel_for(n_test, [&](std::size_t i) {
    auto dist = base.distances_to(test.curves[i]);
    std::vector<double> sorted(dist);
    std::nth_element(sorted.begin(), sorted.begin() + (sel.k - 1), sorted.end());
    ConditionalDistribution cd(base.with_curve_bandwidth(sorted[sel.k - 1]),
                               std::move(dist));
    double lo = cd.quantile(0.05).value;
    double hi = cd.quantile(0.95).value;
    double t = test.lifetimes[i];
    hit[i] = (t >= lo && t <= hi) ? 1 : 0;
  });
  double coverage = 0.0;
  for (int h : hit) coverage += h;
  coverage /= n_test;
  std::ostringstream ss;
  ss << "empirical coverage = " << coverage << " (target window [0.84, 0.96])";
  detail = ss.str();
  return coverage >= 0.84 && coverage <= 0.96;
}

bool criterion8_cli_pipeline(std::string& detail) {
  fs::path work = fs::temp_directory_path() /
                  ("fquant_accept_" + std::to_string(::getpid()));
  std::error_code ec;
  fs::remove_all(work, ec);
  fs::create_directories(work);

  auto pipeline = [&](const fs::path& dir) -> bool {
    fs::create_directories(dir);
    fs::path log = dir / "log.txt";
    std::string common_model =
        " --censor-rate 0.3 --baseline 2 --noise-scale 0.25 ";
    if (run_cli("simulate --n 200 --seed 4242" + common_model + "--out " +
                    (dir / "train").string(),
                log) != 0)
      return false;
    if (run_cli("simulate --n 30 --seed 4243" + common_model + "--out " +
                    (dir / "test").string(),
                log) != 0)
      return false;
    if (run_cli("fit-predict --train " + (dir / "train/data.csv").string() +
                    " --test " + (dir / "test/data.csv").string() +
                    " --levels 0.05,0.5,0.95 --ci-level 0.9 --k-grid 5:50:5 "
                    "--semimetric deriv2 --out " +
                    (dir / "pred").string(),
                log) != 0)
      return false;
    if (run_cli("evaluate --pred " + (dir / "pred/predictions.csv").string() +
                    " --truth " + (dir / "test/truth.json").string() + " --out " +
                    (dir / "metrics.json").string(),
                log) != 0)
      return false;
    return true;
  };

  if (!pipeline(work / "run1") || !pipeline(work / "run2")) {
    detail = "pipeline run failed (see logs under " + work.string() + ")";
    return false;
  }

  for (const char* rel :
       {"train/data.csv", "train/truth.json", "test/data.csv", "test/truth.json",
        "pred/predictions.csv", "pred/plot_data.csv", "metrics.json"}) {
    if (slurp(work / "run1" / rel) != slurp(work / "run2" / rel)) {
      detail = std::string("byte mismatch between runs for ") + rel;
      return false;
    }
  }

  Metrics got = read_metrics(work / "run1/metrics.json");
  Metrics expect = read_metrics(g_data_dir / "expected_metrics.json");
  if (got.n != expect.n || got.mape != expect.mape ||
      got.coverage != expect.coverage ||
      got.mean_interval_width != expect.mean_interval_width) {
    std::ostringstream ss;
    ss << "metrics drifted from the regression lock: mape " << got.mape << " vs "
       << expect.mape << ", coverage " << got.coverage << " vs " << expect.coverage;
    detail = ss.str();
    return false;
  }

  fs::remove_all(work, ec);
  std::ostringstream ss;
  ss << "byte-identical reruns; mape = " << got.mape
     << ", coverage = " << got.coverage;
  detail = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <fquant-binary> <data-dir>\n", argv[0]);
    return 64;
  }
  g_cli_binary = argv[1];
  g_data_dir = argv[2];

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Kaplan-Meier exact-rational oracle equivalence", 1.0,
       criterion1_km_oracle},
      {2, "uncensored reduction to Nadaraya-Watson (1e-12)", 5.0,
       criterion2_uncensored_reduction},
      {3, "kernel-moment closed forms M1=1.0, M2=1.2 (1e-6)", 0.1,
       criterion3_kernel_moments},
      {4, "monotonicity/locality/density-integral property suite (1000 cases)", 30.0,
       criterion4_property_suite},
      {5, "median-error consistency trend across n=100/400/1600", 300.0,
       criterion5_consistency_trend},
      {6, "plug-in standardized errors pass the KS normality check (<0.1)", 600.0,
       criterion6_normality},
      {7, "90% interval coverage on 300 test points within [0.84, 0.96]", 300.0,
       criterion7_coverage},
      {8, "CLI pipeline byte-reproducibility and metric regression lock", 60.0,
       criterion8_cli_pipeline},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = elapsed_s(t0);
    if (ok && secs > c.budget_s) {
      ok = false;
      detail += " [exceeded runtime budget]";
    }
    std::printf("[%s] criterion %d: %s — %s (%.2fs, budget %.0fs)\n",
                ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
