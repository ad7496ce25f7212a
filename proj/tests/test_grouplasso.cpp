#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <set>

#include "gfam/grouplasso.hpp"
#include "gfam/simulate.hpp"

using namespace gfam;
using namespace gfam::grouplasso;

namespace {

// Random grouped regression instance with a sparse true support.
struct Instance {
  Mat z;
  Vec y;
  int h;
};

Instance random_instance(int n, int groups, int h, int active, double noise,
                         std::uint64_t seed) {
  stats::RngStream rng(seed, 0);
  Instance inst;
  inst.h = h;
  inst.z.resize(n, groups * h);
  for (Eigen::Index i = 0; i < inst.z.rows(); ++i)
    for (Eigen::Index j = 0; j < inst.z.cols(); ++j) inst.z(i, j) = rng.normal();
  Vec beta = Vec::Zero(groups * h);
  for (int g = 0; g < active; ++g)
    for (int k = 0; k < h; ++k) beta[g * h + k] = rng.normal();
  inst.y = inst.z * beta;
  for (Eigen::Index i = 0; i < inst.y.size(); ++i) inst.y[i] += noise * rng.normal();
  return inst;
}

double objective(const Instance& inst, const Vec& beta, double lambda) {
  double gsum = 0.0;
  for (Eigen::Index j = 0; j < beta.size() / inst.h; ++j)
    gsum += beta.segment(j * inst.h, inst.h).norm();
  return (inst.y - inst.z * beta).squaredNorm() + lambda * gsum;
}

}  // namespace

TEST_CASE("lambda_max: zero response and single-group definition") {
  const Instance inst = random_instance(30, 2, 4, 1, 0.1, 1);
  CHECK(lambda_max(inst.z, Vec::Zero(30), inst.h) == 0.0);

  const Instance single = random_instance(30, 1, 4, 1, 0.1, 2);
  CHECK(lambda_max(single.z, single.y, single.h) ==
        doctest::Approx(2.0 * (single.z.transpose() * single.y).norm()));
}

TEST_CASE("lambda >= lambda_max yields the exact zero solution") {
  const Instance inst = random_instance(30, 2, 4, 1, 0.1, 3);
  const double lam = 1.01 * lambda_max(inst.z, inst.y, inst.h);
  const double lip = lipschitz_estimate(inst.z);
  const SolveResult res =
      group_lasso_solve(inst.z, inst.y, inst.h, lam, Vec::Zero(inst.z.cols()), lip, {});
  CHECK(res.beta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lambda -> 0 recovers the OLS solution") {
  const Instance inst = random_instance(60, 3, 4, 3, 0.2, 4);
  PathConfig config;
  config.max_iter = 50000;
  config.kkt_tol = 1e-6;
  const double lam = 1e-8 * lambda_max(inst.z, inst.y, inst.h);
  const double lip = lipschitz_estimate(inst.z);
  const SolveResult res =
      group_lasso_solve(inst.z, inst.y, inst.h, lam, Vec::Zero(inst.z.cols()), lip, config);
  const Vec ols = (inst.z.transpose() * inst.z).ldlt().solve(inst.z.transpose() * inst.y);
  for (int j = 0; j < 3; ++j) {
    const double diff = (res.beta.segment(j * inst.h, inst.h) - ols.segment(j * inst.h, inst.h)).norm();
    CHECK(diff <= 1e-3);
  }
}

TEST_CASE("KKT certification and grouping on random instances") {
  PathConfig config;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = random_instance(100, 30, 4, 3, 0.5, 100 + seed);
    const double lam_max = lambda_max(inst.z, inst.y, inst.h);
    const double lip = lipschitz_estimate(inst.z);
    Vec warm = Vec::Zero(inst.z.cols());
    for (double frac : {0.5, 0.1, 0.02}) {
      const SolveResult res =
          group_lasso_solve(inst.z, inst.y, inst.h, frac * lam_max, warm, lip, config);
      CHECK(res.converged);
      CHECK(res.kkt_active <= 1e-4);
      CHECK(res.kkt_inactive <= 1e-4);
      warm = res.beta;
      // blocks are jointly zero or jointly nonzero by thresholding definition
      for (Eigen::Index j = 0; j < res.beta.size() / inst.h; ++j) {
        const auto block = res.beta.segment(j * inst.h, inst.h);
        const bool zero = block.norm() == 0.0;
        if (zero) CHECK(block.cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("objective descends across warm-started solves") {
  const Instance inst = random_instance(80, 10, 4, 2, 0.5, 7);
  const double lam = 0.1 * lambda_max(inst.z, inst.y, inst.h);
  const double lip = lipschitz_estimate(inst.z);
  // Chained restarts: each solve must not increase the objective of its own
  // warm start (the internal assert also enforces per-iteration descent).
  Vec warm = Vec::Zero(inst.z.cols());
  PathConfig quick;
  quick.max_iter = 5;
  double prev = objective(inst, warm, lam);
  for (int round = 0; round < 20; ++round) {
    const SolveResult res = group_lasso_solve(inst.z, inst.y, inst.h, lam, warm, lip, quick);
    const double obj = objective(inst, res.beta, lam);
    CHECK(obj <= prev * (1.0 + 1e-12) + 1e-12);
    prev = obj;
    warm = res.beta;
  }
}

TEST_CASE("support stability under tolerance tightening") {
  const Instance inst = random_instance(100, 12, 4, 3, 0.5, 8);
  PathConfig loose, tight;
  tight.tol = loose.tol / 10.0;
  int w1 = 0, w2 = 0;
  const auto path1 = solution_path(inst.z, inst.y, inst.h, loose, &w1);
  const auto path2 = solution_path(inst.z, inst.y, inst.h, tight, &w2);
  std::set<std::vector<int>> s1, s2;
  for (const auto& m : path1) s1.insert(m.predictors);
  for (const auto& m : path2) s2.insert(m.predictors);
  CHECK(s1 == s2);
}

TEST_CASE("solution path starts empty and harvests supports in order") {
  const Instance inst = random_instance(100, 12, 4, 3, 0.5, 9);
  const auto path = solution_path(inst.z, inst.y, inst.h, {});
  REQUIRE(!path.empty());
  CHECK(path.front().predictors.empty());
  // true predictors should appear jointly in some support
  bool found = false;
  for (const auto& m : path) {
    std::set<int> preds(m.predictors.begin(), m.predictors.end());
    if (preds.count(0) && preds.count(1) && preds.count(2)) found = true;
  }
  CHECK(found);
}

TEST_CASE("collect_candidates: dedupe, empty model, admissibility") {
  simulate::SimSettings settings;
  settings.n = 80;
  settings.p = 10;
  settings.sigma = 0.5;
  settings.spline = {3, 1};  // h = 4
  stats::RngStream data_rng(0, 0);
  const Dataset data = simulate::gen_dataset(settings, data_rng);
  const auto design = splines::build_design(data, settings.spline);

  PathConfig config;
  config.bootstrap_B = 4;
  stats::RngStream rng(20, 0);
  const CandidateModels cands = collect_candidates(design, config, rng);

  std::set<std::vector<int>> unique;
  bool has_empty = false;
  for (const auto& m : cands.models) {
    CHECK(unique.insert(m.predictors).second);  // no duplicates
    CHECK(m.p_star(design.h) <= static_cast<int>(design.n()) - 3);
    if (m.predictors.empty()) has_empty = true;
  }
  CHECK(has_empty);
  CHECK(cands.models.size() == cands.provenance.size());

  // bootstrap_B = 0: original-path supports only
  PathConfig no_boot;
  no_boot.bootstrap_B = 0;
  stats::RngStream rng2(20, 0);
  const CandidateModels original_only = collect_candidates(design, no_boot, rng2);
  CHECK(original_only.models.size() <= cands.models.size());
}
