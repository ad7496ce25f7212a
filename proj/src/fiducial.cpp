#include "gfam/fiducial.hpp"

#include <algorithm>
#include <cmath>

namespace gfam::fiducial {

double log_model_weight(double rss, int p_star, int n, double log_q) {
  if (n - p_star < 3)
    throw AdmissibilityError("log_model_weight: n - p* must be >= 3");
  if (rss <= 0.0)
    throw NumericError("log_model_weight: degenerate fit with rss = 0");
  const double d = n - p_star;
  return -0.5 * d * std::log(2.0 * M_PI) + 0.5 * (d - 2.0) * std::log(2.0) +
         0.5 * (1.0 - d) * std::log(rss) + std::lgamma(0.5 * d) + p_star * log_q;
}

std::vector<ModelProbability> model_probabilities(const std::vector<linmodel::ModelFit>& fits,
                                                  int n, const PenaltyConfig& penalty) {
  const double log_q = std::log(penalty.q);
  std::vector<ModelProbability> out;
  out.reserve(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (fits[i].rss <= 0.0) continue;  // exact interpolation; excluded
    ModelProbability mp;
    mp.fit_index = static_cast<int>(i);
    mp.model = fits[i].model;
    mp.log_r = log_model_weight(fits[i].rss, static_cast<int>(fits[i].beta_hat.size()), n, log_q);
    out.push_back(std::move(mp));
  }
  if (out.empty()) throw NumericError("model_probabilities: no admissible candidate models");

  double max_log = out[0].log_r;
  for (const auto& mp : out) max_log = std::max(max_log, mp.log_r);
  double lse = 0.0;
  for (const auto& mp : out) lse += std::exp(mp.log_r - max_log);
  lse = max_log + std::log(lse);
  for (auto& mp : out) mp.prob = std::exp(mp.log_r - lse);

  std::sort(out.begin(), out.end(), [](const ModelProbability& a, const ModelProbability& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.model < b.model;
  });
  return out;
}

std::vector<FiducialDraw> sample_fiducial(const std::vector<ModelProbability>& probs,
                                          const std::vector<linmodel::ModelFit>& fits,
                                          int n, int count, stats::RngStream& rng) {
  if (count < 1) throw NumericError("sample_fiducial: count must be >= 1");
  if (probs.empty()) throw NumericError("sample_fiducial: empty candidate set");

  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i].prob;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  std::vector<FiducialDraw> draws;
  draws.reserve(count);
  for (int d = 0; d < count; ++d) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    const linmodel::ModelFit& fit = fits[static_cast<std::size_t>(probs[idx].fit_index)];
    const int p_star = static_cast<int>(fit.beta_hat.size());

    FiducialDraw draw;
    draw.fit_index = probs[idx].fit_index;
    draw.model = fit.model;
    const double chi2 = stats::sample_chi_square(rng, n - p_star);
    draw.sigma = std::sqrt(fit.rss / chi2);
    if (p_star > 0) {
      const Vec z = stats::sample_std_normal_vec(rng, p_star);
      // Cov(R^{-1} z) = (R^T R)^{-1} = (Z_M^T Z_M)^{-1}
      draw.beta = fit.beta_hat +
                  draw.sigma * fit.gram_factor.triangularView<Eigen::Upper>().solve(z);
    }
    draws.push_back(std::move(draw));
  }
  return draws;
}

}  // namespace gfam::fiducial
