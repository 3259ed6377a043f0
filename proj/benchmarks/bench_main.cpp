#include <benchmark/benchmark.h>

#include <vector>

#include "fquant/bandwidth.hpp"
#include "fquant/estimator.hpp"
#include "fquant/semimetric.hpp"
#include "fquant/simulate.hpp"
#include "fquant/survival.hpp"

using namespace fquant;

namespace {

SimulatedData make_data(int n, double censor_rate = 0.3) {
  SimModel sim;
  sim.censor_rate = censor_rate;
  sim.seed = 1234;
  return generate(sim, n);
}

void bm_second_derivative_distance(benchmark::State& state) {
  SimulatedData d = make_data(2);
  SemiMetricSpec spec = SemiMetricSpec::second_derivative_l2();
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance(d.curves[0], d.curves[1], spec));
  }
}
BENCHMARK(bm_second_derivative_distance);

void bm_km_fit(benchmark::State& state) {
  SimulatedData d = make_data(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(KaplanMeierFit::fit(d.observed));
  }
}
BENCHMARK(bm_km_fit)->Arg(1000)->Arg(10000);

void bm_conditional_quantile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SimulatedData d = make_data(n);
  QuantileModel base(d.curves, d.observed, SemiMetricSpec::second_derivative_l2(),
                     1.0, 0.3);
  Curve x = d.curves[n / 2];
  auto dist = base.distances_to(x);
  std::vector<double> sorted(dist);
  std::sort(sorted.begin(), sorted.end());
  QuantileModel m = base.with_curve_bandwidth(sorted[n / 8]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditional_quantile(m, x, 0.5).value);
  }
}
BENCHMARK(bm_conditional_quantile)->Arg(200)->Arg(1000);

void bm_select_bandwidth(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SimulatedData d = make_data(n);
  std::vector<int> grid = {4, 8, 16, 32};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        select_bandwidth(d.curves, d.observed,
                         SemiMetricSpec::second_derivative_l2(), 0.5, grid));
  }
}
BENCHMARK(bm_select_bandwidth)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
