#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "fquant/curve.hpp"
#include "fquant/simulate.hpp"
#include "fquant/survival.hpp"
#include "fquant/workflow.hpp"

namespace fquant {

// All files are UTF-8 CSV or JSON. Doubles are written with 17 significant
// digits so round-trips are lossless and outputs byte-deterministic.

// -- curve CSV: day_id followed by one column per hourly value ---------------

std::vector<Curve> read_curves(const std::filesystem::path& path);
void write_curves(const std::filesystem::path& path,
                  const std::vector<std::string>& ids,
                  const std::vector<Curve>& curves);

// -- dataset CSV: day_id, curve values, response y, censoring flag delta -----

struct CurveDataset {
  std::vector<std::string> ids;
  std::vector<Curve> curves;
  std::vector<CensoredPair> pairs;

  std::size_t size() const { return ids.size(); }
};

CurveDataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const CurveDataset& data);

// -- day-record CSV: day_id, 24 temperature columns, 24 load columns ---------
//    (load cells empty after the censor hour), trailing censor_hour column.

std::vector<DayRecord> read_day_records(const std::filesystem::path& path);
void write_day_records(const std::filesystem::path& path,
                       const std::vector<DayRecord>& records);

// Converts day records into a model-ready dataset: temperature curve as the
// covariate, peak (or censored peak) as the response.
CurveDataset dataset_from_day_records(const std::vector<DayRecord>& records);

// Reads either layout, telling them apart by the header shape.
CurveDataset read_training_file(const std::filesystem::path& path);

// -- simulation truth sidecar (JSON) -----------------------------------------

struct TruthEntry {
  std::string id;
  double lifetime = 0.0;
  double censor_time = 0.0;  // +inf when censoring was disabled
};

struct TruthFile {
  SimModel model;
  double censor_exponential_rate = 0.0;
  std::vector<TruthEntry> days;
};

void write_truth(const std::filesystem::path& path, const SimModel& model,
                 const SimulatedData& data, const std::vector<std::string>& ids);
TruthFile read_truth(const std::filesystem::path& path);

// -- prediction table and metrics ---------------------------------------------

struct PredictionRow {
  std::string day_id;
  std::vector<double> quantiles;  // one per level
  std::vector<double> ci_lo;      // NaN (empty cell) when unavailable
  std::vector<double> ci_hi;
  std::size_t n_eff = 0;
  double ball_fraction = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  std::string warnings;  // e.g. "saturated@0.95"
};

struct PredictionTable {
  std::vector<double> levels;
  std::vector<PredictionRow> rows;
};

void write_predictions(const std::filesystem::path& path, const PredictionTable& table);
PredictionTable read_predictions(const std::filesystem::path& path);

// Per-day interval data for external plotting: index, id, lower quantile,
// median (level closest to 0.5), upper quantile.
void write_plot_data(const std::filesystem::path& path, const PredictionTable& table);

struct Metrics {
  std::size_t n = 0;
  double mape = 0.0;
  double coverage = 0.0;
  double mean_interval_width = 0.0;
  double lower_level = 0.0;
  double upper_level = 0.0;
  double median_level = 0.0;
};

void write_metrics(const std::filesystem::path& path, const Metrics& metrics);
Metrics read_metrics(const std::filesystem::path& path);

}  // namespace fquant
