#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gfam/grouplasso.hpp"
#include "gfam/pipeline.hpp"
#include "gfam/splines.hpp"
#include "gfam/stats.hpp"
#include "gfam/types.hpp"

namespace gfam::simulate {

struct SimSettings {
  int n = 200;
  int p = 1000;
  double sigma = 0.8;
  splines::SplineConfig spline{3, 8};         // l, K
  grouplasso::PathConfig path;                // candidate generation settings
  std::vector<double> levels = {0.95};        // confidence levels (1 - alpha)
  int replications = 1;
  int draws_per_rep = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
  double correlation = 0.0;  // equicorrelation of covariates (default off)

  void validate() const;
};

struct CoverageRow {
  std::string target;  // "sigma2" or "mean"
  std::string method;  // "proposed" or "oracle"
  double level = 0.0;
  double coverage = 0.0;
  double avg_width = 0.0;
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
  int errors_excluded = 0;
};

struct SelectionReport {
  double frequency = 0.0;  // fraction of reps where argmax r(M) = {f1..f4}
  int errors_excluded = 0;
};

// The four nonzero component functions of the data-generating model.
std::array<double, 4> true_functions(double x);

// Sum of the four components; the true E(Y|x) uses the first four covariates.
double true_mean(const Vec& x_row);

// Covariates uniform on (0,1) (equicorrelated via a Gaussian copula when
// correlation > 0); y = f1(x1)+...+f4(x4) + N(0, sigma^2) noise.
Dataset gen_dataset(const SimSettings& settings, stats::RngStream& rng);

struct OracleIntervals {
  inference::Interval sigma2;
  std::vector<inference::Interval> means;  // one per design row
};

// Classical intervals on the true-model spline fit: chi-square interval for
// sigma^2 and t intervals for the mean at every design row.
OracleIntervals oracle_intervals(const Dataset& data, const splines::SplineConfig& config,
                                 double level);

// Full coverage study: per replication run the pipeline and the oracle,
// score sigma^2 and mean-function interval hits, aggregate per
// (target, method, level).
CoverageReport coverage_experiment(const SimSettings& settings);

// Frequency with which the true model attains the maximum fiducial
// probability.
SelectionReport selection_experiment(const SimSettings& settings);

// CSV rendering with the settings echoed on every row.
std::string coverage_csv(const SimSettings& settings, const CoverageReport& report);

}  // namespace gfam::simulate
