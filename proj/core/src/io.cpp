#include "fquant/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fquant/errors.hpp"

namespace fquant {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_level(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_double(const std::string& cell, const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad numeric cell '" + cell + "' in " + path.string());
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && !(line.size() == 1 && line[0] == '\r')) lines.push_back(line);
  }
  if (lines.empty()) throw IoError("empty file: " + path.string());
  return lines;
}

std::vector<double> hour_grid(std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t j = 0; j < points; ++j) g[j] = static_cast<double>(j + 1);
  return g;
}

// Curve invariant violations coming from file contents are file problems.
Curve curve_from_cells(std::vector<double> values, const std::filesystem::path& path) {
  std::vector<double> grid = hour_grid(values.size());
  try {
    return Curve(std::move(grid), std::move(values));
  } catch (const ConfigError& e) {
    throw IoError(std::string(e.what()) + " in " + path.string());
  }
}

}  // namespace

// -- curves -------------------------------------------------------------------

std::vector<Curve> read_curves(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  std::vector<Curve> curves;
  std::size_t width = 0;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_csv(lines[r]);
    if (cells.size() < 4) throw IoError("curve row too short in " + path.string());
    if (width == 0) width = cells.size();
    if (cells.size() != width) throw IoError("ragged curve rows in " + path.string());
    std::vector<double> values;
    values.reserve(cells.size() - 1);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      values.push_back(parse_double(cells[c], path));
    }
    curves.push_back(curve_from_cells(std::move(values), path));
  }
  if (curves.empty()) throw IoError("no curve rows in " + path.string());
  return curves;
}

void write_curves(const std::filesystem::path& path,
                  const std::vector<std::string>& ids,
                  const std::vector<Curve>& curves) {
  if (ids.size() != curves.size()) {
    throw LengthMismatch("write_curves: ids and curves lengths differ");
  }
  auto out = open_out(path);
  out << "day_id";
  if (!curves.empty()) {
    for (std::size_t j = 1; j <= curves.front().size(); ++j) out << ",h" << j;
  }
  out << "\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    out << ids[i];
    for (double v : curves[i].values()) out << "," << fmt(v);
    out << "\n";
  }
}

// -- dataset -------------------------------------------------------------------

CurveDataset read_dataset(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  CurveDataset data;
  std::size_t width = 0;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_csv(lines[r]);
    if (cells.size() < 6) throw IoError("dataset row too short in " + path.string());
    if (width == 0) width = cells.size();
    if (cells.size() != width) throw IoError("ragged dataset rows in " + path.string());
    data.ids.push_back(cells[0]);
    std::vector<double> values;
    values.reserve(cells.size() - 3);
    for (std::size_t c = 1; c + 2 < cells.size(); ++c) {
      values.push_back(parse_double(cells[c], path));
    }
    double y = parse_double(cells[cells.size() - 2], path);
    const std::string& d = cells.back();
    if (d != "0" && d != "1") {
      throw IoError("delta cell must be 0 or 1 in " + path.string());
    }
    data.curves.push_back(curve_from_cells(std::move(values), path));
    data.pairs.push_back(CensoredPair{y, d == "1"});
  }
  if (data.ids.empty()) throw IoError("no dataset rows in " + path.string());
  return data;
}

void write_dataset(const std::filesystem::path& path, const CurveDataset& data) {
  if (data.ids.size() != data.curves.size() || data.ids.size() != data.pairs.size()) {
    throw LengthMismatch("write_dataset: column lengths differ");
  }
  auto out = open_out(path);
  out << "day_id";
  if (!data.curves.empty()) {
    for (std::size_t j = 1; j <= data.curves.front().size(); ++j) out << ",x" << j;
  }
  out << ",y,delta\n";
  for (std::size_t i = 0; i < data.ids.size(); ++i) {
    out << data.ids[i];
    for (double v : data.curves[i].values()) out << "," << fmt(v);
    out << "," << fmt(data.pairs[i].y) << "," << (data.pairs[i].uncensored ? 1 : 0)
        << "\n";
  }
}

// -- day records ----------------------------------------------------------------

std::vector<DayRecord> read_day_records(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  auto header = split_csv(lines[0]);
  if (header.size() < 4 || (header.size() - 2) % 2 != 0) {
    throw IoError("day-record header must be id + 2H value columns + censor_hour in " +
                  path.string());
  }
  const std::size_t hours = (header.size() - 2) / 2;
  std::vector<DayRecord> records;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_csv(lines[r]);
    if (cells.size() != header.size()) {
      throw IoError("ragged day-record rows in " + path.string());
    }
    std::vector<double> temp;
    temp.reserve(hours);
    for (std::size_t c = 1; c <= hours; ++c) {
      temp.push_back(parse_double(cells[c], path));
    }
    std::optional<int> censor_hour;
    if (!cells.back().empty()) {
      censor_hour = static_cast<int>(parse_double(cells.back(), path));
    }
    std::vector<double> load;
    for (std::size_t c = hours + 1; c <= 2 * hours; ++c) {
      if (cells[c].empty()) break;
      load.push_back(parse_double(cells[c], path));
    }
    DayRecord rec{cells[0], curve_from_cells(std::move(temp), path),
                  std::move(load), censor_hour};
    try {
      rec.validate(static_cast<int>(hours));
    } catch (const ConfigError& e) {
      throw IoError(std::string(e.what()) + " in " + path.string());
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw IoError("no day-record rows in " + path.string());
  return records;
}

void write_day_records(const std::filesystem::path& path,
                       const std::vector<DayRecord>& records) {
  if (records.empty()) throw EmptyDataset("write_day_records: nothing to write");
  const std::size_t hours = records.front().temperature.size();
  auto out = open_out(path);
  out << "day_id";
  for (std::size_t j = 1; j <= hours; ++j) out << ",t" << j;
  for (std::size_t j = 1; j <= hours; ++j) out << ",l" << j;
  out << ",censor_hour\n";
  for (const auto& rec : records) {
    rec.validate(static_cast<int>(hours));
    out << rec.day_id;
    for (double v : rec.temperature.values()) out << "," << fmt(v);
    for (std::size_t j = 0; j < hours; ++j) {
      out << ",";
      if (j < rec.load.size()) out << fmt(rec.load[j]);
    }
    out << ",";
    if (rec.censor_hour) out << *rec.censor_hour;
    out << "\n";
  }
}

CurveDataset dataset_from_day_records(const std::vector<DayRecord>& records) {
  CurveDataset data;
  for (const auto& rec : records) {
    data.ids.push_back(rec.day_id);
    data.curves.push_back(rec.temperature);
    data.pairs.push_back(extract_response(rec));
  }
  return data;
}

CurveDataset read_training_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header_line;
  if (!std::getline(in, header_line)) throw IoError("empty file: " + path.string());
  in.close();
  auto header = split_csv(header_line);
  // dataset layout ends with y,delta; day-record layout ends with censor_hour
  if (header.size() >= 2 && header[header.size() - 2] == "y" &&
      header.back() == "delta") {
    return read_dataset(path);
  }
  if (!header.empty() && header.back() == "censor_hour") {
    return dataset_from_day_records(read_day_records(path));
  }
  throw IoError("unrecognized training file layout: " + path.string());
}

// -- truth sidecar ---------------------------------------------------------------

void write_truth(const std::filesystem::path& path, const SimModel& model,
                 const SimulatedData& data, const std::vector<std::string>& ids) {
  if (ids.size() != data.lifetimes.size()) {
    throw LengthMismatch("write_truth: ids and data lengths differ");
  }
  nlohmann::json j;
  j["model"] = {
      {"points_per_curve", model.points_per_curve},
      {"ar_coefficient", model.ar_coefficient},
      {"link", "curve_mean"},
      {"noise_scale", model.noise_scale},
      {"error_dist", model.error_dist == ErrorDist::normal ? "normal" : "exponential"},
      {"censor_rate", model.censor_rate},
      {"baseline", model.baseline},
      {"seed", model.seed},
  };
  j["censor_exponential_rate"] = data.censor_exponential_rate;
  nlohmann::json days = nlohmann::json::array();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    nlohmann::json day;
    day["id"] = ids[i];
    day["t"] = data.lifetimes[i];
    if (std::isfinite(data.censor_times[i])) day["c"] = data.censor_times[i];
    days.push_back(std::move(day));
  }
  j["days"] = std::move(days);
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

TruthFile read_truth(const std::filesystem::path& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad truth JSON " + path.string() + ": " + e.what());
  }
  TruthFile out;
  try {
    const auto& m = j.at("model");
    out.model.points_per_curve = m.at("points_per_curve").get<int>();
    out.model.ar_coefficient = m.at("ar_coefficient").get<double>();
    out.model.noise_scale = m.at("noise_scale").get<double>();
    out.model.error_dist = m.at("error_dist").get<std::string>() == "exponential"
                               ? ErrorDist::exponential
                               : ErrorDist::normal;
    out.model.censor_rate = m.at("censor_rate").get<double>();
    out.model.baseline = m.at("baseline").get<double>();
    out.model.seed = m.at("seed").get<std::uint64_t>();
    out.censor_exponential_rate = j.at("censor_exponential_rate").get<double>();
    for (const auto& day : j.at("days")) {
      TruthEntry e;
      e.id = day.at("id").get<std::string>();
      e.lifetime = day.at("t").get<double>();
      e.censor_time = day.contains("c") ? day["c"].get<double>()
                                        : std::numeric_limits<double>::infinity();
      out.days.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad truth JSON " + path.string() + ": " + e.what());
  }
  return out;
}

// -- predictions -------------------------------------------------------------------

void write_predictions(const std::filesystem::path& path, const PredictionTable& table) {
  auto out = open_out(path);
  out << "day_id";
  for (double lv : table.levels) {
    std::string tag = fmt_level(lv);
    out << ",q_" << tag << ",lo_" << tag << ",hi_" << tag;
  }
  out << ",n_eff,ball_fraction,m1,m2,warnings\n";
  for (const auto& row : table.rows) {
    out << row.day_id;
    for (std::size_t l = 0; l < table.levels.size(); ++l) {
      out << "," << fmt(row.quantiles[l]) << ",";
      if (std::isfinite(row.ci_lo[l])) out << fmt(row.ci_lo[l]);
      out << ",";
      if (std::isfinite(row.ci_hi[l])) out << fmt(row.ci_hi[l]);
    }
    out << "," << row.n_eff << "," << fmt(row.ball_fraction) << "," << fmt(row.m1)
        << "," << fmt(row.m2) << "," << row.warnings << "\n";
  }
}

PredictionTable read_predictions(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  auto header = split_csv(lines[0]);
  PredictionTable table;
  std::vector<std::size_t> qcols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("q_", 0) == 0) {
      table.levels.push_back(parse_double(header[c].substr(2), path));
      qcols.push_back(c);
    }
  }
  if (qcols.empty()) throw IoError("no quantile columns in " + path.string());
  auto col_index = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    throw IoError("missing column " + name + " in " + path.string());
  };
  const std::size_t c_neff = col_index("n_eff");
  const std::size_t c_ball = col_index("ball_fraction");
  const std::size_t c_m1 = col_index("m1");
  const std::size_t c_m2 = col_index("m2");
  const std::size_t c_warn = col_index("warnings");

  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_csv(lines[r]);
    if (cells.size() != header.size()) {
      throw IoError("ragged prediction rows in " + path.string());
    }
    PredictionRow row;
    row.day_id = cells[0];
    for (std::size_t q : qcols) {
      row.quantiles.push_back(parse_double(cells[q], path));
      row.ci_lo.push_back(cells[q + 1].empty()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : parse_double(cells[q + 1], path));
      row.ci_hi.push_back(cells[q + 2].empty()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : parse_double(cells[q + 2], path));
    }
    row.n_eff = static_cast<std::size_t>(parse_double(cells[c_neff], path));
    row.ball_fraction = parse_double(cells[c_ball], path);
    row.m1 = parse_double(cells[c_m1], path);
    row.m2 = parse_double(cells[c_m2], path);
    row.warnings = cells[c_warn];
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_plot_data(const std::filesystem::path& path, const PredictionTable& table) {
  if (table.levels.empty()) throw EmptyDataset("write_plot_data: no levels");
  std::size_t mid = 0;
  for (std::size_t l = 1; l < table.levels.size(); ++l) {
    if (std::abs(table.levels[l] - 0.5) < std::abs(table.levels[mid] - 0.5)) mid = l;
  }
  auto out = open_out(path);
  out << "index,day_id,lower,median,upper\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    out << (r + 1) << "," << row.day_id << "," << fmt(row.quantiles.front()) << ","
        << fmt(row.quantiles[mid]) << "," << fmt(row.quantiles.back()) << "\n";
  }
}

void write_metrics(const std::filesystem::path& path, const Metrics& metrics) {
  nlohmann::json j;
  j["n"] = metrics.n;
  j["mape"] = metrics.mape;
  j["coverage"] = metrics.coverage;
  j["mean_interval_width"] = metrics.mean_interval_width;
  j["lower_level"] = metrics.lower_level;
  j["upper_level"] = metrics.upper_level;
  j["median_level"] = metrics.median_level;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

Metrics read_metrics(const std::filesystem::path& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad metrics JSON " + path.string() + ": " + e.what());
  }
  Metrics m;
  m.n = j.at("n").get<std::size_t>();
  m.mape = j.at("mape").get<double>();
  m.coverage = j.at("coverage").get<double>();
  m.mean_interval_width = j.at("mean_interval_width").get<double>();
  m.lower_level = j.at("lower_level").get<double>();
  m.upper_level = j.at("upper_level").get<double>();
  m.median_level = j.at("median_level").get<double>();
  return m;
}

}  // namespace fquant
