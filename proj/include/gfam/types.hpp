#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfam {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unusable input data (CSV parse failures, missing values, ...).
struct DataError : Error {
  using Error::Error;
};

// Numerical failures (rank deficiency, degenerate fits, capacity limits).
struct NumericError : Error {
  using Error::Error;
};

struct DegenerateCovariateError : NumericError {
  using NumericError::NumericError;
};

struct RankDeficiencyError : NumericError {
  using NumericError::NumericError;
};

// Model too large for the sample size (n - p* < 3).
struct AdmissibilityError : NumericError {
  using NumericError::NumericError;
};

struct CapacityError : NumericError {
  using NumericError::NumericError;
};

// Response vector plus covariate matrix with named columns.
struct Dataset {
  Mat x;                           // n x p covariates
  Vec y;                           // n responses
  std::vector<std::string> names;  // covariate names, size p

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }
};

}  // namespace gfam
