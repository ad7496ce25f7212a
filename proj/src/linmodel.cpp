#include "gfam/linmodel.hpp"

#include <Eigen/QR>
#include <cmath>

namespace gfam::linmodel {

Mat gather_columns(const splines::DesignMatrix& design, const Model& model) {
  const int h = design.h;
  Mat zm(design.n(), static_cast<Eigen::Index>(model.m()) * h);
  for (int k = 0; k < model.m(); ++k)
    zm.middleCols(static_cast<Eigen::Index>(k) * h, h) = design.block(model.predictors[k]);
  return zm;
}

Vec gather_row(const Vec& row, const Model& model, int h) {
  Vec out(static_cast<Eigen::Index>(model.m()) * h);
  for (int k = 0; k < model.m(); ++k)
    out.segment(static_cast<Eigen::Index>(k) * h, h) =
        row.segment(static_cast<Eigen::Index>(model.predictors[k]) * h, h);
  return out;
}

ModelFit fit_ols(const splines::DesignMatrix& design, const Vec& y_centered,
                 const Model& model) {
  const Eigen::Index n = design.n();
  const int p_star = model.p_star(design.h);

  ModelFit fit;
  fit.model = model;
  fit.df_resid = static_cast<int>(n) - p_star;
  if (fit.df_resid < 3)
    throw AdmissibilityError("fit_ols: model with p*=" + std::to_string(p_star) +
                             " too large for n=" + std::to_string(n));
  if (p_star == 0) {
    fit.rss = y_centered.squaredNorm();
    fit.beta_hat = Vec();
    fit.gram_factor = Mat();
    return fit;
  }

  const Mat zm = gather_columns(design, model);
  Eigen::HouseholderQR<Mat> qr(zm);
  const Mat r = qr.matrixQR().topRows(p_star).triangularView<Eigen::Upper>();

  const double max_diag = r.diagonal().cwiseAbs().maxCoeff();
  if (max_diag <= 0.0 || r.diagonal().cwiseAbs().minCoeff() < 1e-10 * max_diag)
    throw RankDeficiencyError("fit_ols: rank-deficient model columns");

  fit.beta_hat = qr.solve(y_centered);
  fit.rss = (y_centered - zm * fit.beta_hat).squaredNorm();
  fit.gram_factor = r;
  return fit;
}

}  // namespace gfam::linmodel
