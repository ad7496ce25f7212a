#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gfam/fiducial.hpp"
#include "gfam/grouplasso.hpp"
#include "gfam/inference.hpp"
#include "gfam/linmodel.hpp"
#include "gfam/splines.hpp"
#include "gfam/types.hpp"

namespace gfam::pipeline {

struct FitOptions {
  splines::SplineConfig spline;
  grouplasso::PathConfig path;
  std::optional<double> q;  // default 0.2/p when unset
  int draws = 10000;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Everything the fit produces: design, candidate models, refits,
// probabilities and fiducial draws, index-aligned (probs[i].fit_index and
// draws[i].fit_index point into fits).
struct FitResult {
  splines::DesignMatrix design;
  grouplasso::CandidateModels candidates;
  std::vector<linmodel::ModelFit> fits;
  std::vector<fiducial::ModelProbability> probs;
  std::vector<fiducial::FiducialDraw> draws;
  double q = 0.0;
};

// design -> candidates -> refits -> probabilities -> draws.
FitResult run_fit(const Dataset& data, const FitOptions& opts);

// Same pipeline over a prebuilt design (used when candidates are supplied
// externally, e.g. exhaustive enumeration).
FitResult run_fit_with_candidates(splines::DesignMatrix design,
                                  std::vector<linmodel::Model> models,
                                  const FitOptions& opts);

}  // namespace gfam::pipeline
