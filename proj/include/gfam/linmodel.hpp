#pragma once

#include <vector>

#include "gfam/splines.hpp"
#include "gfam/types.hpp"

namespace gfam::linmodel {

// A candidate model: the set of selected predictor indices (0-based).
struct Model {
  std::vector<int> predictors;  // sorted, unique

  int m() const { return static_cast<int>(predictors.size()); }
  int p_star(int h) const { return m() * h; }
  bool operator==(const Model& other) const { return predictors == other.predictors; }
  bool operator<(const Model& other) const { return predictors < other.predictors; }
};

// Least-squares refit of one model on the centered design.
struct ModelFit {
  Model model;
  double rss = 0.0;
  Vec beta_hat;    // length p_star
  Mat gram_factor; // upper-triangular R with R^T R = Z_M^T Z_M
  int df_resid = 0;
};

// Columns of the design belonging to the model, in block order.
Mat gather_columns(const splines::DesignMatrix& design, const Model& model);

// Restrict a full-width design row to the model's blocks.
Vec gather_row(const Vec& row, const Model& model, int h);

// QR-based least squares fit.  Throws AdmissibilityError if p* > n - 3 and
// RankDeficiencyError if the triangular factor has a relative diagonal
// below 1e-10.
ModelFit fit_ols(const splines::DesignMatrix& design, const Vec& y_centered,
                 const Model& model);

// Audited access point for the residual sum of squares.
inline double projection_rss(const ModelFit& fit) { return fit.rss; }

}  // namespace gfam::linmodel
