#include "gfam/pipeline.hpp"

namespace gfam::pipeline {

namespace {

FitResult finish(splines::DesignMatrix design, grouplasso::CandidateModels candidates,
                 const FitOptions& opts) {
  FitResult result;
  result.q = opts.q.value_or(0.2 / static_cast<double>(design.num_predictors()));

  // Refit every candidate; drop the ones whose refit fails (bootstrap paths
  // can propose models that are rank-deficient on the original data).
  for (std::size_t i = 0; i < candidates.models.size(); ++i) {
    try {
      result.fits.push_back(
          linmodel::fit_ols(design, design.y_centered, candidates.models[i]));
    } catch (const NumericError&) {
      continue;
    }
  }
  result.probs = fiducial::model_probabilities(result.fits, static_cast<int>(design.n()),
                                               fiducial::PenaltyConfig(result.q));
  if (opts.draws > 0) {
    stats::RngStream draw_rng(opts.seed, opts.stream_id * 2 + 1);
    result.draws = fiducial::sample_fiducial(result.probs, result.fits,
                                             static_cast<int>(design.n()), opts.draws, draw_rng);
  }
  result.design = std::move(design);
  result.candidates = std::move(candidates);
  return result;
}

}  // namespace

FitResult run_fit(const Dataset& data, const FitOptions& opts) {
  splines::DesignMatrix design = splines::build_design(data, opts.spline);
  stats::RngStream boot_rng(opts.seed, opts.stream_id * 2);
  grouplasso::CandidateModels candidates =
      grouplasso::collect_candidates(design, opts.path, boot_rng);
  return finish(std::move(design), std::move(candidates), opts);
}

FitResult run_fit_with_candidates(splines::DesignMatrix design,
                                  std::vector<linmodel::Model> models,
                                  const FitOptions& opts) {
  grouplasso::CandidateModels candidates;
  candidates.models = std::move(models);
  candidates.provenance.assign(candidates.models.size(), -1);
  return finish(std::move(design), std::move(candidates), opts);
}

}  // namespace gfam::pipeline
