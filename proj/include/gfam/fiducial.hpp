#pragma once

#include <vector>

#include "gfam/linmodel.hpp"
#include "gfam/stats.hpp"
#include "gfam/types.hpp"

namespace gfam::fiducial {

struct PenaltyConfig {
  double q;  // per-coefficient sparsity penalty, default 0.2/p
  explicit PenaltyConfig(double q_in) : q(q_in) {
    if (!(q > 0.0 && q < 1.0)) throw NumericError("PenaltyConfig: q must be in (0,1)");
  }
  static PenaltyConfig default_for(int p) { return PenaltyConfig(0.2 / p); }
};

struct ModelProbability {
  int fit_index = 0;  // position in the ModelFit list passed in
  linmodel::Model model;
  double log_r = 0.0;
  double prob = 0.0;
};

// One fiducial realization (M, sigma, beta).
struct FiducialDraw {
  int fit_index = 0;
  linmodel::Model model;
  double sigma = 0.0;
  Vec beta;  // length p_star of the model, block order
};

// log R(M) = ((p*-n)/2) log 2pi + ((n-p*-2)/2) log 2
//          + ((p*-n+1)/2) log rss + lgamma((n-p*)/2) + p* log q.
double log_model_weight(double rss, int p_star, int n, double log_q);

// Normalized model probabilities by log-sum-exp over the candidate fits,
// sorted by descending probability (ties by lexicographic predictor set).
// Degenerate fits (rss == 0) are skipped; throws if none remain.
std::vector<ModelProbability> model_probabilities(const std::vector<linmodel::ModelFit>& fits,
                                                  int n, const PenaltyConfig& penalty);

// Draws (M, sigma, beta): M categorical on probs, sigma^2 = rss/chi^2_{n-p*},
// beta = beta_hat + sigma R^{-1} z with z standard normal.
std::vector<FiducialDraw> sample_fiducial(const std::vector<ModelProbability>& probs,
                                          const std::vector<linmodel::ModelFit>& fits,
                                          int n, int count, stats::RngStream& rng);

}  // namespace gfam::fiducial
