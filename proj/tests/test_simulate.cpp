#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfam/simulate.hpp"

using namespace gfam;
using namespace gfam::simulate;

TEST_CASE("true_functions at hand-checked points") {
  {
    const auto f = true_functions(0.5);
    CHECK(f[0] == doctest::Approx(2.5));
    CHECK(f[1] == doctest::Approx(0.0));
    CHECK(f[2] == doctest::Approx(0.0).epsilon(1e-12));
  }
  {
    const auto f = true_functions(0.0);
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(3.0));
    CHECK(f[3] == doctest::Approx(1.6));
  }
  {
    // x = 0.25: sin = 1, cos = 0
    const auto f = true_functions(0.25);
    CHECK(f[0] == doctest::Approx(1.25));
    CHECK(f[1] == doctest::Approx(3.0 * 0.25));
    CHECK(f[2] == doctest::Approx(4.0));
    CHECK(f[3] == doctest::Approx(0.6 + 0.3 + 0.5));
  }
}

TEST_CASE("gen_dataset: reproducibility, noiseless limit, SNR") {
  SimSettings settings;
  settings.n = 100;
  settings.p = 8;
  settings.sigma = 0.8;
  settings.spline = {3, 4};

  stats::RngStream r1(3, 0), r2(3, 0), r3(4, 0);
  const Dataset a = gen_dataset(settings, r1);
  const Dataset b = gen_dataset(settings, r2);
  const Dataset c = gen_dataset(settings, r3);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.x - c.x).cwiseAbs().maxCoeff() > 0.0);

  // noiseless: spline fit of the true model leaves only approximation error
  SimSettings clean = settings;
  clean.sigma = 0.0;
  clean.n = 400;
  stats::RngStream r4(5, 0);
  const Dataset d = gen_dataset(clean, r4);
  Dataset truth;
  truth.x = d.x.leftCols(4);
  truth.y = d.y;
  truth.names.assign(d.names.begin(), d.names.begin() + 4);
  const auto design = splines::build_design(truth, {3, 8});
  const auto fit = linmodel::fit_ols(design, design.y_centered, linmodel::Model{{0, 1, 2, 3}});
  CHECK(fit.rss / d.n() < 1e-3);  // approximation error only

  // SNR > 1 at sigma = 0.8: signal variance dominates noise variance
  double signal_var = 0.0, mean_m = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) mean_m += true_mean(d.x.row(i));
  mean_m /= d.n();
  for (Eigen::Index i = 0; i < d.n(); ++i)
    signal_var += std::pow(true_mean(d.x.row(i)) - mean_m, 2);
  signal_var /= d.n() - 1;
  CHECK(signal_var > settings.sigma * settings.sigma);
}

TEST_CASE("oracle intervals: nesting and classical coverage") {
  SimSettings settings;
  settings.n = 120;
  settings.p = 6;
  settings.sigma = 0.8;
  settings.spline = {3, 2};

  stats::RngStream rng(6, 0);
  const Dataset data = gen_dataset(settings, rng);
  const auto iv95 = oracle_intervals(data, settings.spline, 0.95);
  const auto iv99 = oracle_intervals(data, settings.spline, 0.99);
  CHECK(iv99.sigma2.lower <= iv95.sigma2.lower);
  CHECK(iv99.sigma2.upper >= iv95.sigma2.upper);
  REQUIRE(iv95.means.size() == static_cast<std::size_t>(settings.n));
  for (std::size_t i = 0; i < iv95.means.size(); ++i) {
    CHECK(iv99.means[i].lower <= iv95.means[i].lower);
    CHECK(iv99.means[i].upper >= iv95.means[i].upper);
  }

  // Monte Carlo coverage of the classical sigma^2 interval.  K=6 keeps the
  // spline approximation bias well below the noise level; with very few
  // knots the residuals absorb approximation error and coverage degrades.
  settings.spline = {3, 6};
  const int reps = 400;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    stats::RngStream rep_rng(100, static_cast<std::uint64_t>(r));
    const Dataset rep = gen_dataset(settings, rep_rng);
    const auto iv = oracle_intervals(rep, settings.spline, 0.95);
    const double s2 = settings.sigma * settings.sigma;
    if (iv.sigma2.lower <= s2 && s2 <= iv.sigma2.upper) ++hits;
  }
  // 3 binomial s.e. around 0.95 at 400 reps is about +-0.033
  CHECK(hits / static_cast<double>(reps) > 0.91);
  CHECK(hits / static_cast<double>(reps) <= 1.0);
}

TEST_CASE("coverage_experiment: single-replication plumbing and determinism") {
  SimSettings settings;
  settings.n = 90;
  settings.p = 8;
  settings.sigma = 0.8;
  settings.spline = {3, 2};
  settings.replications = 2;
  settings.draws_per_rep = 500;
  settings.path.bootstrap_B = 2;
  settings.levels = {0.9, 0.95};
  settings.seed = 11;
  settings.threads = 2;

  const CoverageReport report = coverage_experiment(settings);
  REQUIRE(report.rows.size() == 8);  // 2 levels x 2 targets x 2 methods
  for (const auto& row : report.rows) {
    CHECK(row.coverage >= 0.0);
    CHECK(row.coverage <= 1.0);
    CHECK(row.avg_width > 0.0);
  }

  // same settings -> identical table, independent of thread count
  SimSettings serial = settings;
  serial.threads = 1;
  const CoverageReport again = coverage_experiment(serial);
  REQUIRE(again.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].coverage == again.rows[i].coverage);
    CHECK(report.rows[i].avg_width == again.rows[i].avg_width);
  }
  CHECK(coverage_csv(settings, report) == coverage_csv(settings, again));
}

TEST_CASE("selection_experiment: noiseless data selects the true model") {
  SimSettings settings;
  settings.n = 150;
  settings.p = 10;
  settings.sigma = 0.05;  // near-noiseless
  settings.spline = {3, 2};
  settings.replications = 5;
  settings.path.bootstrap_B = 2;
  settings.seed = 21;
  settings.threads = 2;
  const SelectionReport report = selection_experiment(settings);
  CHECK(report.frequency == doctest::Approx(1.0));
}
