#include "gfam/splines.hpp"

#include <algorithm>
#include <cmath>

namespace gfam::splines {

void SplineConfig::validate() const {
  if (degree < 2) throw NumericError("SplineConfig: degree must be >= 2");
  if (interior_knots < 1) throw NumericError("SplineConfig: interior_knots must be >= 1");
}

CovariateBasis build_basis(const Vec& x_column, const SplineConfig& config) {
  config.validate();
  if (x_column.size() < 2) throw DegenerateCovariateError("build_basis: fewer than 2 values");
  const double a = x_column.minCoeff();
  const double b = x_column.maxCoeff();
  if (!(b > a)) throw DegenerateCovariateError("build_basis: constant covariate column");

  const int l = config.degree;
  const int k = config.interior_knots;
  CovariateBasis basis;
  basis.degree = l;
  basis.a = a;
  basis.b = b;
  basis.knots.resize(2 * (l + 1) + k);
  for (int i = 0; i <= l; ++i) basis.knots[i] = a;
  const double gap = (b - a) / (k + 1);
  for (int i = 1; i <= k; ++i) basis.knots[l + i] = a + gap * i;
  for (int i = 0; i <= l; ++i) basis.knots[l + k + 1 + i] = b;
  return basis;
}

Vec eval_basis(const CovariateBasis& basis, double x) {
  const int l = basis.degree;
  const int nb = basis.num_basis();
  x = std::clamp(x, basis.a, basis.b);

  // Knot span containing x: largest i with knots[i] <= x < knots[i+1],
  // except x == b which belongs to the last nonempty span.
  const auto& t = basis.knots;
  int span;
  if (x >= basis.b) {
    span = nb - 1;
  } else {
    span = l;
    while (span + 1 < nb && t[span + 1] <= x) ++span;
  }

  // Cox-de Boor: the l+1 nonzero values on this span.
  Vec nz = Vec::Zero(l + 1);
  nz[0] = 1.0;
  Vec left(l + 1), right(l + 1);
  for (int j = 1; j <= l; ++j) {
    left[j] = x - t[span + 1 - j];
    right[j] = t[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double temp = denom > 0.0 ? nz[r] / denom : 0.0;
      nz[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    nz[j] = saved;
  }

  Vec out = Vec::Zero(nb);
  for (int r = 0; r <= l; ++r) {
    const int idx = span - l + r;
    if (idx >= 0 && idx < nb) out[idx] = nz[r];
  }
  return out;
}

DesignMatrix build_design(const Dataset& data, const SplineConfig& config,
                          std::size_t memory_budget_bytes) {
  config.validate();
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (n < 2) throw DataError("build_design: need at least 2 observations");
  const int h = config.basis_size();

  const std::size_t bytes = static_cast<std::size_t>(n) * static_cast<std::size_t>(p) *
                            static_cast<std::size_t>(h) * sizeof(double);
  if (bytes > memory_budget_bytes)
    throw CapacityError("build_design: n*p*h_n design of " + std::to_string(bytes) +
                        " bytes exceeds the memory budget");

  DesignMatrix design;
  design.h = h;
  design.names = data.names;
  design.bases.reserve(p);
  design.z.resize(n, p * h);
  for (Eigen::Index j = 0; j < p; ++j) {
    CovariateBasis basis = build_basis(data.x.col(j), config);
    for (Eigen::Index i = 0; i < n; ++i) {
      // Drop the first basis function; keep phi_2 .. phi_{h+1}.
      design.z.row(i).segment(j * h, h) = eval_basis(basis, data.x(i, j)).tail(h);
    }
    design.bases.push_back(std::move(basis));
  }

  design.column_means = design.z.colwise().mean();
  design.z.rowwise() -= design.column_means.transpose();
  design.response_mean = data.y.mean();
  design.y_centered = data.y.array() - design.response_mean;
  return design;
}

Vec eval_centered_block(const DesignMatrix& design, int j, double x) {
  const Vec full = eval_basis(design.bases[j], x);
  return full.tail(design.h) - design.column_means.segment(static_cast<Eigen::Index>(j) * design.h, design.h);
}

Vec eval_design_row(const DesignMatrix& design, const Vec& x_point) {
  const int p = design.num_predictors();
  if (x_point.size() != p) throw DataError("eval_design_row: point has wrong dimension");
  Vec row(static_cast<Eigen::Index>(p) * design.h);
  for (int j = 0; j < p; ++j)
    row.segment(static_cast<Eigen::Index>(j) * design.h, design.h) =
        eval_centered_block(design, j, x_point[j]);
  return row;
}

}  // namespace gfam::splines
