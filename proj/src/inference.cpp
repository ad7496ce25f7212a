#include "gfam/inference.hpp"

#include <algorithm>
#include <cmath>

namespace gfam::inference {

namespace {

Interval quantile_interval(const std::vector<double>& values, double level) {
  const double alpha = 1.0 - level;
  Interval iv;
  iv.level = level;
  iv.lower = stats::empirical_quantile(values, 0.5 * alpha);
  iv.upper = stats::empirical_quantile(values, 1.0 - 0.5 * alpha);
  return iv;
}

}  // namespace

SigmaSummary sigma_summary(const std::vector<fiducial::FiducialDraw>& draws, double level) {
  if (draws.empty()) throw NumericError("sigma_summary: no draws");
  std::vector<double> sigmas;
  sigmas.reserve(draws.size());
  for (const auto& d : draws) sigmas.push_back(d.sigma);
  SigmaSummary out;
  out.point = stats::empirical_quantile(sigmas, 0.5);
  out.interval = quantile_interval(sigmas, level);
  return out;
}

Vec default_grid(const splines::DesignMatrix& design, int predictor, int points) {
  const auto& basis = design.bases[static_cast<std::size_t>(predictor)];
  return Vec::LinSpaced(points, basis.a, basis.b);
}

FunctionBand function_band(const std::vector<fiducial::FiducialDraw>& draws, int predictor,
                           const Vec& grid, const splines::DesignMatrix& design, double level) {
  if (draws.empty()) throw NumericError("function_band: no draws");
  const int h = design.h;
  const double alpha = 1.0 - level;

  // Which block of each draw's beta holds predictor j, if selected.
  std::vector<int> block_of(draws.size(), -1);
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const auto& preds = draws[d].model.predictors;
    const auto it = std::lower_bound(preds.begin(), preds.end(), predictor);
    if (it != preds.end() && *it == predictor) block_of[d] = static_cast<int>(it - preds.begin());
  }

  FunctionBand band;
  band.predictor = predictor;
  band.grid = grid;
  band.lower.resize(grid.size());
  band.median.resize(grid.size());
  band.upper.resize(grid.size());

  std::vector<double> values(draws.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    const Vec zrow = splines::eval_centered_block(design, predictor, grid[g]);
    for (std::size_t d = 0; d < draws.size(); ++d)
      values[d] = block_of[d] < 0
                      ? 0.0
                      : zrow.dot(draws[d].beta.segment(static_cast<Eigen::Index>(block_of[d]) * h, h));
    band.lower[g] = stats::empirical_quantile(values, 0.5 * alpha);
    band.median[g] = stats::empirical_quantile(values, 0.5);
    band.upper[g] = stats::empirical_quantile(values, 1.0 - 0.5 * alpha);
  }
  return band;
}

std::vector<double> mean_draw_values(const std::vector<fiducial::FiducialDraw>& draws,
                                     const Vec& row_centered, double response_mean, int h) {
  std::vector<double> values(draws.size());
  for (std::size_t d = 0; d < draws.size(); ++d) {
    double v = response_mean;
    const auto& preds = draws[d].model.predictors;
    for (int k = 0; k < static_cast<int>(preds.size()); ++k)
      v += row_centered.segment(static_cast<Eigen::Index>(preds[k]) * h, h)
               .dot(draws[d].beta.segment(static_cast<Eigen::Index>(k) * h, h));
    values[d] = v;
  }
  return values;
}

Interval mean_ci(const std::vector<fiducial::FiducialDraw>& draws, const Vec& x_point,
                 const splines::DesignMatrix& design, double level) {
  if (draws.empty()) throw NumericError("mean_ci: no draws");
  const Vec row = splines::eval_design_row(design, x_point);
  return quantile_interval(mean_draw_values(draws, row, design.response_mean, design.h), level);
}

Interval prediction_interval(const std::vector<fiducial::FiducialDraw>& draws,
                             const Vec& x_point, const splines::DesignMatrix& design,
                             double level, stats::RngStream& rng) {
  if (draws.empty()) throw NumericError("prediction_interval: no draws");
  const Vec row = splines::eval_design_row(design, x_point);
  std::vector<double> values = mean_draw_values(draws, row, design.response_mean, design.h);
  for (std::size_t d = 0; d < draws.size(); ++d) values[d] += draws[d].sigma * rng.normal();
  return quantile_interval(values, level);
}

std::vector<ModelSummaryRow> model_summary(const std::vector<fiducial::ModelProbability>& probs,
                                           const std::vector<std::string>& names, int top_k) {
  std::vector<ModelSummaryRow> rows;
  const int k = std::min<int>(top_k, static_cast<int>(probs.size()));
  rows.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    ModelSummaryRow row;
    row.predictors = probs[static_cast<std::size_t>(i)].model.predictors;
    row.prob = probs[static_cast<std::size_t>(i)].prob;
    for (int j : row.predictors) row.names.push_back(names[static_cast<std::size_t>(j)]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gfam::inference
