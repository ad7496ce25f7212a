#pragma once

#include <vector>

#include "gfam/types.hpp"

namespace gfam::splines {

// Per-covariate spline settings.  The expanded design uses h_n = K + l
// columns per covariate: the clamped basis on K interior knots has K + l + 1
// partition-of-unity functions, and one is dropped before centering because
// centered columns of a partition of unity sum to zero.
struct SplineConfig {
  int degree = 3;          // polynomial degree l (>= 2)
  int interior_knots = 8;  // K (>= 1)

  int basis_size() const { return degree + interior_knots; }  // h_n
  void validate() const;
};

// Clamped knot vector for one covariate on its observed range [a, b].
struct CovariateBasis {
  Vec knots;  // nondecreasing, endpoints repeated degree+1 times
  int degree = 0;
  double a = 0.0;
  double b = 0.0;

  // Full partition-of-unity basis count (= h_n + 1 when built by build_basis).
  int num_basis() const { return static_cast<int>(knots.size()) - degree - 1; }
};

// Expanded and centered design of the additive model.  Predictor j owns the
// contiguous column block [j*h, (j+1)*h).
struct DesignMatrix {
  Mat z;             // n x (h*p), column-centered
  Vec y_centered;    // response with its mean removed
  Vec column_means;  // centering offsets of the retained columns
  double response_mean = 0.0;
  int h = 0;  // columns per predictor (h_n)
  std::vector<CovariateBasis> bases;
  std::vector<std::string> names;

  Eigen::Index n() const { return z.rows(); }
  int num_predictors() const { return static_cast<int>(bases.size()); }
  int group_of_column(Eigen::Index col) const { return static_cast<int>(col) / h; }
  auto block(int j) const { return z.middleCols(static_cast<Eigen::Index>(j) * h, h); }
};

// Equally spaced interior knots on [min(x), max(x)], clamped ends.
CovariateBasis build_basis(const Vec& x_column, const SplineConfig& config);

// All num_basis() B-spline values at x (Cox-de Boor).  x outside [a, b] is
// clamped to the boundary.
Vec eval_basis(const CovariateBasis& basis, double x);

// Assemble the centered design from a dataset.  memory_budget_bytes caps the
// dense design allocation.
DesignMatrix build_design(const Dataset& data, const SplineConfig& config,
                          std::size_t memory_budget_bytes = std::size_t{2} << 30);

// One centered design row at an arbitrary point, consistent with
// build_design rows.
Vec eval_design_row(const DesignMatrix& design, const Vec& x_point);

// Centered basis block for predictor j at scalar x (length h).
Vec eval_centered_block(const DesignMatrix& design, int j, double x);

}  // namespace gfam::splines
