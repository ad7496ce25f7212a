#pragma once

#include <vector>

#include "gfam/linmodel.hpp"
#include "gfam/splines.hpp"
#include "gfam/stats.hpp"
#include "gfam/types.hpp"

namespace gfam::grouplasso {

struct PathConfig {
  int grid_size = 50;        // lambda grid points (log-spaced)
  double grid_ratio = 1e-3;  // smallest lambda = ratio * lambda_max
  int max_iter = 10000;
  double tol = 1e-6;         // relative objective change at termination
  double kkt_tol = 1e-4;     // target KKT residual (relative to lambda)
  double select_tol = 1e-8;  // block norm threshold for support extraction
  int bootstrap_B = 10;
  // Stop a path once the support exceeds this many groups (0 = no cap).
  // collect_candidates caps at floor((n-3)/h): larger supports are
  // inadmissible as candidate models, and they own the slowest solves.
  int max_support = 0;
  bool record_objective = false;  // fill SolveResult::objective_trace

  void validate() const;
};

struct SolveResult {
  Vec beta;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  // KKT residuals at the final iterate, both relative to lambda:
  // active blocks max ||2 Z_j^T r - lambda beta_j/||beta_j|| || / lambda,
  // inactive blocks max (2||Z_j^T r|| - lambda) / lambda.
  double kkt_active = 0.0;
  double kkt_inactive = 0.0;
  std::vector<double> objective_trace;  // per accepted iterate, when recorded
};

struct CandidateModels {
  std::vector<linmodel::Model> models;
  // Run that first produced each model: -1 original data, b >= 0 bootstrap b.
  std::vector<int> provenance;
  int convergence_warnings = 0;
};

// Smallest lambda at which the all-zero solution is optimal for
// ||y - Z b||^2 + lambda sum_j ||b_j||:  2 max_j ||Z_j^T y||.
double lambda_max(const Mat& z, const Vec& y, int h);

// Largest eigenvalue of 2 Z^T Z by power iteration (gradient Lipschitz
// constant used to initialize the step size).
double lipschitz_estimate(const Mat& z, int power_iters = 60);

// Proximal gradient with group soft-thresholding and backtracking line
// search.  Stops when the KKT residuals are within kkt_tol, or when the
// relative objective decrease stalls below tol.
SolveResult group_lasso_solve(const Mat& z, const Vec& y, int h, double lambda,
                              const Vec& warm_start, double lipschitz,
                              const PathConfig& config);

// Distinct supports encountered along the lambda grid, in order of
// appearance.  warnings counts non-converged solves.
std::vector<linmodel::Model> solution_path(const Mat& z, const Vec& y, int h,
                                           const PathConfig& config,
                                           int* warnings = nullptr);

// Union of supports from the original data and bootstrap_B case-resampled
// paths.  Deduplicated; inadmissible models (p* > n-3 or rank-deficient
// refit) are dropped; the empty model is always present.
CandidateModels collect_candidates(const splines::DesignMatrix& design,
                                   const PathConfig& config, stats::RngStream& rng);

}  // namespace gfam::grouplasso
