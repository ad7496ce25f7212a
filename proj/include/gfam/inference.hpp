#pragma once

#include <string>
#include <vector>

#include "gfam/fiducial.hpp"
#include "gfam/splines.hpp"
#include "gfam/stats.hpp"
#include "gfam/types.hpp"

namespace gfam::inference {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
};

struct FunctionBand {
  int predictor = 0;
  Vec grid;
  Vec lower;
  Vec median;
  Vec upper;
};

struct SigmaSummary {
  double point = 0.0;  // median of the sigma draws
  Interval interval;
};

struct ModelSummaryRow {
  std::vector<int> predictors;
  std::vector<std::string> names;
  double prob = 0.0;
};

SigmaSummary sigma_summary(const std::vector<fiducial::FiducialDraw>& draws, double level);

// Pointwise band for f_j over the grid; draws where j is unselected
// contribute 0.
FunctionBand function_band(const std::vector<fiducial::FiducialDraw>& draws, int predictor,
                           const Vec& grid, const splines::DesignMatrix& design, double level);

// Equally spaced default grid over the training range of covariate j.
Vec default_grid(const splines::DesignMatrix& design, int predictor, int points = 100);

// Confidence interval for E(Y|x) at one point.
Interval mean_ci(const std::vector<fiducial::FiducialDraw>& draws, const Vec& x_point,
                 const splines::DesignMatrix& design, double level);

// Prediction interval: mean draw values plus sigma * fresh normal noise.
Interval prediction_interval(const std::vector<fiducial::FiducialDraw>& draws,
                             const Vec& x_point, const splines::DesignMatrix& design,
                             double level, stats::RngStream& rng);

// Per-draw values of E(Y|x) at a point (shared by mean_ci / prediction
// intervals and the coverage harness, which scores many points at once).
std::vector<double> mean_draw_values(const std::vector<fiducial::FiducialDraw>& draws,
                                     const Vec& row_centered, double response_mean, int h);

std::vector<ModelSummaryRow> model_summary(const std::vector<fiducial::ModelProbability>& probs,
                                           const std::vector<std::string>& names, int top_k);

}  // namespace gfam::inference
