#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "gfam/linmodel.hpp"
#include "gfam/splines.hpp"
#include "gfam/stats.hpp"

using namespace gfam;
using namespace gfam::linmodel;

namespace {

Dataset uniform_dataset(int n, int p, std::uint64_t seed) {
  stats::RngStream rng(seed, 0);
  Dataset data;
  data.x.resize(n, p);
  data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) data.x(i, j) = rng.uniform();
    data.y[i] = rng.normal();
  }
  for (int j = 0; j < p; ++j) data.names.push_back("x" + std::to_string(j + 1));
  return data;
}

}  // namespace

TEST_CASE("fit_ols: empty model and exact fit") {
  const Dataset data = uniform_dataset(30, 2, 1);
  const auto design = splines::build_design(data, {3, 2});

  const ModelFit empty = fit_ols(design, design.y_centered, Model{});
  CHECK(empty.rss == doctest::Approx(design.y_centered.squaredNorm()));
  CHECK(empty.beta_hat.size() == 0);
  CHECK(projection_rss(empty) == empty.rss);

  // y exactly in the span of Z_M
  Model m{{0}};
  const Mat zm = gather_columns(design, m);
  const Vec y_span = zm * Vec::LinSpaced(zm.cols(), -1.0, 2.0);
  const ModelFit exact = fit_ols(design, y_span, m);
  CHECK(exact.rss <= 1e-10 * y_span.squaredNorm() + 1e-14);
}

TEST_CASE("fit_ols matches the normal-equations oracle on a random 20x6 system") {
  const Dataset data = uniform_dataset(20, 2, 2);
  const auto design = splines::build_design(data, {2, 1});  // h = 3, two groups -> 6 cols
  Model m{{0, 1}};
  const ModelFit fit = fit_ols(design, design.y_centered, m);

  const Mat zm = gather_columns(design, m);
  const Mat gram = zm.transpose() * zm;
  const Vec beta_oracle = gram.ldlt().solve(zm.transpose() * design.y_centered);
  CHECK((fit.beta_hat - beta_oracle).cwiseAbs().maxCoeff() <= 1e-8);

  // explicit projection-matrix oracle for RSS
  const Mat hat = zm * gram.inverse() * zm.transpose();
  const Vec resid = design.y_centered - hat * design.y_centered;
  CHECK(std::abs(fit.rss - resid.squaredNorm()) <= 1e-9);

  // gram factor reproduces Z^T Z
  const Mat rtr = fit.gram_factor.transpose() * fit.gram_factor;
  CHECK((rtr - gram).cwiseAbs().maxCoeff() <= 1e-8 * gram.cwiseAbs().maxCoeff());

  // residual orthogonality
  const Vec zr = zm.transpose() * (design.y_centered - zm * fit.beta_hat);
  CHECK(zr.cwiseAbs().maxCoeff() <= 1e-8 * design.y_centered.norm() * zm.colwise().norm().maxCoeff());
}

TEST_CASE("fit_ols errors: admissibility and rank deficiency") {
  const Dataset data = uniform_dataset(12, 4, 3);
  const auto design = splines::build_design(data, {3, 2});  // h = 5, p* = 20 > 12-3
  CHECK_THROWS_AS(fit_ols(design, design.y_centered, Model{{0, 1, 2, 3}}), AdmissibilityError);

  // duplicate covariate columns make the model rank-deficient
  Dataset dup = uniform_dataset(40, 2, 4);
  dup.x.col(1) = dup.x.col(0);
  const auto design2 = splines::build_design(dup, {2, 1});
  CHECK_THROWS_AS(fit_ols(design2, design2.y_centered, Model{{0, 1}}), RankDeficiencyError);
}

TEST_CASE("RSS is monotone under nesting on random pairs") {
  const Dataset data = uniform_dataset(120, 6, 5);
  const auto design = splines::build_design(data, {3, 2});
  stats::RngStream rng(17, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> perm{0, 1, 2, 3, 4, 5};
    for (int k = 5; k > 0; --k)
      std::swap(perm[k], perm[rng.uniform_index(static_cast<std::uint64_t>(k + 1))]);
    const int small = 1 + static_cast<int>(rng.uniform_index(2));
    const int big = small + 1 + static_cast<int>(rng.uniform_index(2));
    Model inner, outer;
    inner.predictors.assign(perm.begin(), perm.begin() + small);
    outer.predictors.assign(perm.begin(), perm.begin() + big);
    std::sort(inner.predictors.begin(), inner.predictors.end());
    std::sort(outer.predictors.begin(), outer.predictors.end());
    const double rss_inner = fit_ols(design, design.y_centered, inner).rss;
    const double rss_outer = fit_ols(design, design.y_centered, outer).rss;
    CHECK(rss_outer <= rss_inner * (1.0 + 1e-12) + 1e-12);
  }
}
