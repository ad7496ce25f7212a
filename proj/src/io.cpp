#include "gfam/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "gfam/inference.hpp"

namespace gfam::io {

using nlohmann::json;

std::string format_number(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  const auto fail = [&](const std::string& what) {
    throw DataError("row " + std::to_string(row) + ", column '" + column + "': " + what +
                    " ('" + cell + "')");
  };
  std::size_t begin = cell.find_first_not_of(" \t\r");
  std::size_t end = cell.find_last_not_of(" \t\r");
  if (begin == std::string::npos) fail("empty cell");
  double value = 0.0;
  const char* first = cell.data() + begin;
  const char* last = cell.data() + end + 1;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) fail("not a decimal number");
  if (!std::isfinite(value)) fail("non-finite value");
  return value;
}

}  // namespace

Dataset ingest_csv(const std::string& path, const std::string& response_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2) throw DataError("'" + path + "': need a response and at least one covariate");
  {
    std::set<std::string> unique(header.begin(), header.end());
    if (unique.size() != header.size()) throw DataError("'" + path + "': duplicate header name");
  }

  std::size_t response_idx = 0;
  if (!response_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), response_column);
    if (it == header.end())
      throw DataError("'" + path + "': response column '" + response_column + "' not found");
    response_idx = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(row_number) + ": expected " +
                      std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      row[c] = parse_cell(cells[c], row_number, header[c]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("'" + path + "': no data rows");

  Dataset data;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  data.x.resize(n, p);
  data.y.resize(n);
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != response_idx) data.names.push_back(header[c]);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == response_idx)
        data.y[i] = rows[static_cast<std::size_t>(i)][c];
      else
        data.x(i, col++) = rows[static_cast<std::size_t>(i)][c];
    }
  }
  return data;
}

void write_dataset_csv(const Dataset& data, const std::string& path,
                       const std::string& response_name) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << response_name;
  for (const auto& name : data.names) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << format_number(data.y[i]);
    for (Eigen::Index j = 0; j < data.p(); ++j) out << ',' << format_number(data.x(i, j));
    out << '\n';
  }
}

Mat read_points_csv(const std::string& path, const std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);

  std::vector<std::size_t> col_of(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = std::find(header.begin(), header.end(), names[k]);
    if (it == header.end())
      throw DataError("'" + path + "': missing covariate column '" + names[k] + "'");
    col_of[k] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(row_number) + ": expected " +
                      std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
    std::vector<double> row(names.size());
    for (std::size_t k = 0; k < names.size(); ++k)
      row[k] = parse_cell(cells[col_of[k]], row_number, names[k]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("'" + path + "': no data rows");

  Mat points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = 0; j < points.cols(); ++j)
      points(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return points;
}

std::pair<Dataset, std::vector<int>> variance_screen(const Dataset& data, int top_d) {
  if (top_d < 1 || top_d > data.p())
    throw DataError("variance_screen: top_d out of range [1, p]");

  std::vector<int> order(static_cast<std::size_t>(data.p()));
  std::iota(order.begin(), order.end(), 0);
  Vec variances(data.p());
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    const double mean = data.x.col(j).mean();
    variances[j] = (data.x.col(j).array() - mean).square().sum() / (data.n() - 1);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return variances[a] > variances[b]; });
  order.resize(static_cast<std::size_t>(top_d));
  std::sort(order.begin(), order.end());  // keep original column order

  Dataset reduced;
  reduced.y = data.y;
  reduced.x.resize(data.n(), top_d);
  for (int k = 0; k < top_d; ++k) {
    reduced.x.col(k) = data.x.col(order[static_cast<std::size_t>(k)]);
    reduced.names.push_back(data.names[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);
  }
  return {std::move(reduced), std::move(order)};
}

namespace {

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& arr) {
  Vec v(static_cast<Eigen::Index>(arr.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

constexpr int kStateVersion = 1;

}  // namespace

void save_fit_state(const pipeline::FitResult& fit, const std::string& path) {
  json doc;
  doc["version"] = kStateVersion;
  doc["n"] = fit.design.n();
  doc["h"] = fit.design.h;
  doc["q"] = fit.q;
  doc["response_mean"] = fit.design.response_mean;
  doc["column_means"] = vec_to_json(fit.design.column_means);
  doc["names"] = fit.design.names;

  json bases = json::array();
  for (const auto& b : fit.design.bases)
    bases.push_back({{"degree", b.degree}, {"a", b.a}, {"b", b.b}, {"knots", vec_to_json(b.knots)}});
  doc["bases"] = std::move(bases);

  json fits = json::array();
  for (const auto& f : fit.fits)
    fits.push_back({{"predictors", f.model.predictors},
                    {"rss", f.rss},
                    {"df_resid", f.df_resid},
                    {"beta_hat", vec_to_json(f.beta_hat)}});
  doc["fits"] = std::move(fits);

  json probs = json::array();
  for (const auto& mp : fit.probs)
    probs.push_back({{"fit_index", mp.fit_index}, {"log_r", mp.log_r}, {"prob", mp.prob}});
  doc["probs"] = std::move(probs);

  json draws = json::array();
  for (const auto& d : fit.draws)
    draws.push_back({{"fit_index", d.fit_index}, {"sigma", d.sigma}, {"beta", vec_to_json(d.beta)}});
  doc["draws"] = std::move(draws);

  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << doc.dump();
}

pipeline::FitResult load_fit_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("'" + path + "': not a valid fit state document: " + e.what());
  }
  if (doc.value("version", -1) != kStateVersion)
    throw DataError("'" + path + "': unsupported fit state version");

  pipeline::FitResult fit;
  fit.q = doc["q"].get<double>();
  fit.design.h = doc["h"].get<int>();
  fit.design.response_mean = doc["response_mean"].get<double>();
  fit.design.column_means = vec_from_json(doc["column_means"]);
  fit.design.names = doc["names"].get<std::vector<std::string>>();
  for (const auto& b : doc["bases"]) {
    splines::CovariateBasis basis;
    basis.degree = b["degree"].get<int>();
    basis.a = b["a"].get<double>();
    basis.b = b["b"].get<double>();
    basis.knots = vec_from_json(b["knots"]);
    fit.design.bases.push_back(std::move(basis));
  }
  for (const auto& f : doc["fits"]) {
    linmodel::ModelFit mf;
    mf.model.predictors = f["predictors"].get<std::vector<int>>();
    mf.rss = f["rss"].get<double>();
    mf.df_resid = f["df_resid"].get<int>();
    mf.beta_hat = vec_from_json(f["beta_hat"]);
    fit.fits.push_back(std::move(mf));
  }
  for (const auto& mp : doc["probs"]) {
    fiducial::ModelProbability p;
    p.fit_index = mp["fit_index"].get<int>();
    p.model = fit.fits[static_cast<std::size_t>(p.fit_index)].model;
    p.log_r = mp["log_r"].get<double>();
    p.prob = mp["prob"].get<double>();
    fit.probs.push_back(std::move(p));
  }
  for (const auto& d : doc["draws"]) {
    fiducial::FiducialDraw draw;
    draw.fit_index = d["fit_index"].get<int>();
    draw.model = fit.fits[static_cast<std::size_t>(draw.fit_index)].model;
    draw.sigma = d["sigma"].get<double>();
    draw.beta = vec_from_json(d["beta"]);
    fit.draws.push_back(std::move(draw));
  }
  return fit;
}

std::string fit_summary_json(const pipeline::FitResult& fit, int top_k, double level,
                             std::uint64_t seed, int band_points) {
  json doc;
  doc["version"] = kStateVersion;
  doc["seed"] = seed;
  doc["level"] = level;
  doc["q"] = fit.q;
  doc["candidate_count"] = fit.fits.size();
  doc["bootstrap_convergence_warnings"] = fit.candidates.convergence_warnings;

  json models = json::array();
  for (const auto& row : inference::model_summary(fit.probs, fit.design.names, top_k))
    models.push_back({{"predictors", row.predictors}, {"names", row.names}, {"prob", row.prob}});
  doc["top_models"] = std::move(models);

  if (!fit.draws.empty()) {
    const auto sigma = inference::sigma_summary(fit.draws, level);
    doc["sigma"] = {{"point", sigma.point},
                    {"lower", sigma.interval.lower},
                    {"upper", sigma.interval.upper}};

    // Band data for every predictor selected in at least 1% of draws.
    std::vector<std::size_t> draw_counts(fit.design.bases.size(), 0);
    for (const auto& d : fit.draws)
      for (int j : d.model.predictors) ++draw_counts[static_cast<std::size_t>(j)];
    json bands = json::array();
    for (std::size_t j = 0; j < draw_counts.size(); ++j) {
      if (draw_counts[j] < fit.draws.size() / 100 + 1) continue;
      const Vec grid = inference::default_grid(fit.design, static_cast<int>(j), band_points);
      const auto band =
          inference::function_band(fit.draws, static_cast<int>(j), grid, fit.design, level);
      bands.push_back({{"predictor", j},
                       {"name", fit.design.names[j]},
                       {"selection_fraction",
                        static_cast<double>(draw_counts[j]) / static_cast<double>(fit.draws.size())},
                       {"grid", vec_to_json(band.grid)},
                       {"lower", vec_to_json(band.lower)},
                       {"median", vec_to_json(band.median)},
                       {"upper", vec_to_json(band.upper)}});
    }
    doc["bands"] = std::move(bands);
  }
  return doc.dump(2);
}

}  // namespace gfam::io
