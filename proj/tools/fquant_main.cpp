// fquant: simulate / fit-predict / evaluate pipeline for censored functional
// quantile regression. Exit codes: 0 ok, 2 configuration, 3 I/O, 4 estimation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fquant/bandwidth.hpp"
#include "fquant/errors.hpp"
#include "fquant/estimator.hpp"
#include "fquant/io.hpp"
#include "fquant/parallel.hpp"
#include "fquant/simulate.hpp"

namespace fs = std::filesystem;
using namespace fquant;

namespace {

int parse_int(const std::string& tok, const char* flag) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad integer '") + tok + "' in " + flag);
  }
}

double parse_real(const std::string& tok, const char* flag) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad number '") + tok + "' in " + flag);
  }
}

std::vector<int> parse_k_grid(const std::string& text) {
  std::vector<int> grid;
  if (text.find(':') != std::string::npos) {
    int parts[3] = {0, 0, 1};
    int count = 0;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
      if (count >= 3) throw ConfigError("bad --k-grid range: " + text);
      parts[count++] = parse_int(tok, "--k-grid");
    }
    if (count < 2) throw ConfigError("bad --k-grid range: " + text);
    int step = count == 3 ? parts[2] : 1;
    if (step <= 0) throw ConfigError("--k-grid step must be positive");
    for (int k = parts[0]; k <= parts[1]; k += step) grid.push_back(k);
  } else {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(parse_int(tok, "--k-grid"));
  }
  if (grid.empty()) throw ConfigError("empty --k-grid: " + text);
  return grid;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> levels;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) levels.push_back(parse_real(tok, "--levels"));
  if (levels.empty()) throw ConfigError("empty --levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && levels[i] < 1.0)) {
      throw ConfigError("--levels entries must lie in (0,1)");
    }
    if (i > 0 && levels[i] < levels[i - 1]) {
      throw ConfigError("--levels must be sorted ascending");
    }
  }
  return levels;
}

std::string day_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "d%06d", index + 1);
  return buf;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  int n = 0;
  double censor_rate = 0.0;
  double ar = 0.5;
  double noise_scale = 1.0;
  double baseline = 0.0;
  int points = 24;
  std::string error_dist = "normal";
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_simulate(const SimulateOptions& opt) {
  SimModel model;
  model.points_per_curve = opt.points;
  model.ar_coefficient = opt.ar;
  model.noise_scale = opt.noise_scale;
  model.error_dist =
      opt.error_dist == "exponential" ? ErrorDist::exponential : ErrorDist::normal;
  model.censor_rate = opt.censor_rate;
  model.baseline = opt.baseline;
  model.seed = opt.seed;
  model.validate();

  SimulatedData data = generate(model, opt.n);

  CurveDataset out;
  out.curves = data.curves;
  out.pairs = data.observed;
  for (int i = 0; i < opt.n; ++i) out.ids.push_back(day_id(i));

  fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  write_dataset(dir / "data.csv", out);
  write_truth(dir / "truth.json", model, data, out.ids);
  std::cout << "wrote " << (dir / "data.csv").string() << " and "
            << (dir / "truth.json").string() << " (" << opt.n << " days)\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct FitPredictOptions {
  std::string train_path;
  std::string test_path;
  std::string levels = "0.05,0.5,0.95";
  double ci_level = 0.9;
  std::string k_grid = "5:50:5";
  std::string semimetric = "deriv2";
  double cv_level = 0.5;
  std::string out_dir;
  bool skip_failures = false;
};

int run_fit_predict(const FitPredictOptions& opt) {
  const std::vector<double> levels = parse_levels(opt.levels);
  const std::vector<int> k_grid = parse_k_grid(opt.k_grid);
  if (!(opt.ci_level > 0.0 && opt.ci_level < 1.0)) {
    throw ConfigError("--ci-level must lie in (0,1)");
  }
  SemiMetricSpec spec = opt.semimetric == "l2" ? SemiMetricSpec::plain_l2()
                                               : SemiMetricSpec::second_derivative_l2();

  CurveDataset train = read_training_file(opt.train_path);
  CurveDataset test = read_training_file(opt.test_path);

  BandwidthSelection sel =
      select_bandwidth(train.curves, train.pairs, spec, opt.cv_level, k_grid);
  std::cerr << "selected k=" << sel.k << " (cv score " << sel.cv_score
            << "), h_H=" << sel.response_bandwidth << "\n";

  // Base model; the curve bandwidth is rebound per test day from the k-NN rule.
  QuantileModel base(train.curves, train.pairs, spec, 1.0, sel.response_bandwidth);

  PredictionTable table;
  table.levels = levels;
  table.rows.resize(test.size());
  std::vector<std::string> failures(test.size());

  parallel_for(test.size(), [&](std::size_t i) {
    PredictionRow& row = table.rows[i];
    row.day_id = test.ids[i];
    try {
      std::vector<double> distances = base.distances_to(test.curves[i]);
      std::vector<double> sorted(distances);
      std::nth_element(sorted.begin(), sorted.begin() + (sel.k - 1), sorted.end());
      const double h = sorted[sel.k - 1];
      if (!(h > 0.0)) {
        throw EmptyNeighborhood("degenerate k-NN bandwidth for day " + test.ids[i]);
      }
      ConditionalDistribution cd(base.with_curve_bandwidth(h), std::move(distances));
      IntervalPrediction pred = predict_intervals(cd, levels, opt.ci_level);

      row.n_eff = pred.n_eff;
      row.ball_fraction = pred.ball_fraction;
      row.m1 = pred.m1;
      row.m2 = pred.m2;
      std::string warnings;
      for (const auto& lv : pred.levels) {
        row.quantiles.push_back(lv.quantile);
        if (std::isfinite(lv.ci_half_width)) {
          row.ci_lo.push_back(lv.quantile - lv.ci_half_width);
          row.ci_hi.push_back(lv.quantile + lv.ci_half_width);
        } else {
          row.ci_lo.push_back(std::numeric_limits<double>::quiet_NaN());
          row.ci_hi.push_back(std::numeric_limits<double>::quiet_NaN());
          if (!warnings.empty()) warnings += ";";
          warnings += (lv.saturated ? "saturated@" : "no_ci@");
          char buf[16];
          std::snprintf(buf, sizeof(buf), "%g", lv.alpha);
          warnings += buf;
        }
      }
      row.warnings = warnings;
    } catch (const EstimationError& e) {
      if (!opt.skip_failures) throw;
      failures[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!failures[i].empty()) {
      PredictionRow& row = table.rows[i];
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.quantiles.assign(levels.size(), nan);
      row.ci_lo.assign(levels.size(), nan);
      row.ci_hi.assign(levels.size(), nan);
      row.warnings = "skipped:empty_neighborhood";
    }
  }

  fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  write_predictions(dir / "predictions.csv", table);
  write_plot_data(dir / "plot_data.csv", table);
  std::cout << "wrote " << (dir / "predictions.csv").string() << " ("
            << table.rows.size() << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateOptions {
  std::string pred_path;
  std::string truth_path;
  std::string out_path;
};

int run_evaluate(const EvaluateOptions& opt) {
  PredictionTable table = read_predictions(opt.pred_path);
  TruthFile truth = read_truth(opt.truth_path);
  if (table.levels.empty()) throw ConfigError("prediction table has no levels");

  std::size_t mid = 0;
  for (std::size_t l = 1; l < table.levels.size(); ++l) {
    if (std::abs(table.levels[l] - 0.5) < std::abs(table.levels[mid] - 0.5)) mid = l;
  }

  std::vector<double> truths, medians, lowers, uppers;
  for (const auto& row : table.rows) {
    if (!std::isfinite(row.quantiles[mid])) continue;  // skipped day
    auto it = std::find_if(truth.days.begin(), truth.days.end(),
                           [&](const TruthEntry& e) { return e.id == row.day_id; });
    if (it == truth.days.end()) {
      throw ConfigError("day " + row.day_id + " missing from truth file");
    }
    truths.push_back(it->lifetime);
    medians.push_back(row.quantiles[mid]);
    lowers.push_back(row.quantiles.front());
    uppers.push_back(row.quantiles.back());
  }
  if (truths.empty()) throw ConfigError("no usable prediction rows");

  Metrics m;
  m.n = truths.size();
  m.mape = mape(truths, medians);
  m.coverage = interval_coverage(truths, lowers, uppers);
  double width = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) width += uppers[i] - lowers[i];
  m.mean_interval_width = width / static_cast<double>(truths.size());
  m.lower_level = table.levels.front();
  m.upper_level = table.levels.back();
  m.median_level = table.levels[mid];

  write_metrics(opt.out_path, m);
  std::cout << "n=" << m.n << " mape=" << m.mape << " coverage=" << m.coverage
            << " mean_interval_width=" << m.mean_interval_width << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional quantile prediction for censored functional data"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* cmd_sim = app.add_subcommand("simulate",
                                     "Generate a synthetic dataset with known truth");
  cmd_sim->add_option("--n", sim.n, "number of days")->required();
  cmd_sim->add_option("--censor-rate", sim.censor_rate, "target P(T > C), in [0,1)");
  cmd_sim->add_option("--ar", sim.ar, "amplitude AR(1) coefficient");
  cmd_sim->add_option("--noise-scale", sim.noise_scale, "response noise scale");
  cmd_sim->add_option("--baseline", sim.baseline, "curve level shift");
  cmd_sim->add_option("--points", sim.points, "samples per curve");
  cmd_sim->add_option("--error-dist", sim.error_dist, "normal|exponential")
      ->check(CLI::IsMember({"normal", "exponential"}));
  cmd_sim->add_option("--seed", sim.seed, "RNG seed");
  cmd_sim->add_option("--out", sim.out_dir, "output directory")->required();

  FitPredictOptions fit;
  auto* cmd_fit = app.add_subcommand("fit-predict",
                                     "Fit on training days, predict quantile intervals "
                                     "for test days");
  cmd_fit->add_option("--train", fit.train_path, "training CSV")->required();
  cmd_fit->add_option("--test", fit.test_path, "test CSV")->required();
  cmd_fit->add_option("--levels", fit.levels, "quantile orders, ascending");
  cmd_fit->add_option("--ci-level", fit.ci_level, "confidence level of the bands");
  cmd_fit->add_option("--k-grid", fit.k_grid, "start:stop[:step] or comma list");
  cmd_fit->add_option("--semimetric", fit.semimetric, "deriv2|l2")
      ->check(CLI::IsMember({"deriv2", "l2"}));
  cmd_fit->add_option("--cv-level", fit.cv_level,
                      "quantile order targeted by cross-validation");
  cmd_fit->add_option("--out", fit.out_dir, "output directory")->required();
  cmd_fit->add_flag("--skip-failures", fit.skip_failures,
                    "mark days with empty neighborhoods instead of failing");

  EvaluateOptions ev;
  auto* cmd_ev = app.add_subcommand("evaluate",
                                    "Score a prediction table against the truth file");
  cmd_ev->add_option("--pred", ev.pred_path, "predictions.csv")->required();
  cmd_ev->add_option("--truth", ev.truth_path, "truth.json")->required();
  cmd_ev->add_option("--out", ev.out_path, "metrics JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_sim)) return run_simulate(sim);
    if (app.got_subcommand(cmd_fit)) return run_fit_predict(fit);
    return run_evaluate(ev);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const EstimationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
