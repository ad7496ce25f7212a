#include "gfam/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfam/io.hpp"
#include "gfam/parallel.hpp"

namespace gfam::simulate {

void SimSettings::validate() const {
  if (p < 4) throw NumericError("SimSettings: p must be >= 4 (four nonzero functions)");
  if (n < 2) throw NumericError("SimSettings: n must be >= 2");
  if (sigma < 0.0) throw NumericError("SimSettings: sigma must be nonnegative");
  if (replications < 1) throw NumericError("SimSettings: replications must be >= 1");
  if (correlation < 0.0 || correlation >= 1.0)
    throw NumericError("SimSettings: correlation must be in [0,1)");
  for (double lv : levels)
    if (lv <= 0.0 || lv >= 1.0) throw NumericError("SimSettings: level must be in (0,1)");
  spline.validate();
}

std::array<double, 4> true_functions(double x) {
  const double s = std::sin(2.0 * M_PI * x);
  const double c = std::cos(2.0 * M_PI * x);
  return {5.0 * x,
          3.0 * (2.0 * x - 1.0) * (2.0 * x - 1.0),
          4.0 * s / (2.0 - s),
          6.0 * (0.1 * s + 0.2 * c) + 0.3 * s * s + 0.4 * c * c * c + 0.5 * s * s * s};
}

double true_mean(const Vec& x_row) {
  double m = 0.0;
  const auto f = [&](int j) { return true_functions(x_row[j])[static_cast<std::size_t>(j)]; };
  for (int j = 0; j < 4; ++j) m += f(j);
  return m;
}

Dataset gen_dataset(const SimSettings& settings, stats::RngStream& rng) {
  settings.validate();
  Dataset data;
  data.x.resize(settings.n, settings.p);
  data.y.resize(settings.n);
  data.names.reserve(static_cast<std::size_t>(settings.p));
  for (int j = 0; j < settings.p; ++j) data.names.push_back("x" + std::to_string(j + 1));

  const double rho = settings.correlation;
  const auto normal_cdf = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
  for (int i = 0; i < settings.n; ++i) {
    if (rho > 0.0) {
      // Gaussian copula: equicorrelated latent normals mapped to uniforms.
      const double shared = rng.normal();
      for (int j = 0; j < settings.p; ++j)
        data.x(i, j) = normal_cdf(std::sqrt(rho) * shared + std::sqrt(1.0 - rho) * rng.normal());
    } else {
      for (int j = 0; j < settings.p; ++j) data.x(i, j) = rng.uniform();
    }
  }
  for (int i = 0; i < settings.n; ++i)
    data.y[i] = true_mean(data.x.row(i)) + settings.sigma * rng.normal();
  return data;
}

OracleIntervals oracle_intervals(const Dataset& data, const splines::SplineConfig& config,
                                 double level) {
  // Spline design restricted to the true support {1,2,3,4}.
  Dataset truth;
  truth.x = data.x.leftCols(4);
  truth.y = data.y;
  truth.names.assign(data.names.begin(), data.names.begin() + 4);
  const splines::DesignMatrix design = splines::build_design(truth, config);

  linmodel::Model model;
  model.predictors = {0, 1, 2, 3};
  const linmodel::ModelFit fit = linmodel::fit_ols(design, design.y_centered, model);
  const int df = fit.df_resid;
  const double alpha = 1.0 - level;
  const double s2 = fit.rss / df;
  const double t_crit = stats::student_t_quantile(1.0 - 0.5 * alpha, df);

  OracleIntervals out;
  out.sigma2 = {fit.rss / stats::chi_square_quantile(1.0 - 0.5 * alpha, df),
                fit.rss / stats::chi_square_quantile(0.5 * alpha, df), level};
  out.means.reserve(static_cast<std::size_t>(data.n()));
  const auto rt = fit.gram_factor.transpose().triangularView<Eigen::Lower>();
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Vec zi = design.z.row(i);
    const double fitted = design.response_mean + zi.dot(fit.beta_hat);
    const double leverage = rt.solve(zi).squaredNorm();  // z_i^T (Z^T Z)^{-1} z_i
    const double half = t_crit * std::sqrt(s2 * leverage);
    out.means.push_back({fitted - half, fitted + half, level});
  }
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
}

// Per-replication coverage tallies, indexed per level:
// {proposed sigma2, proposed mean, oracle sigma2, oracle mean} x {hit, width}.
struct RepOutcome {
  bool ok = false;
  std::vector<std::array<double, 8>> per_level;
};

RepOutcome run_replication(const SimSettings& settings, std::size_t rep) {
  RepOutcome outcome;
  stats::RngStream data_rng(settings.seed, (std::uint64_t{1} << 32) + rep);
  const Dataset data = gen_dataset(settings, data_rng);
  const double sigma2_true = settings.sigma * settings.sigma;

  pipeline::FitOptions opts;
  opts.spline = settings.spline;
  opts.path = settings.path;
  opts.draws = settings.draws_per_rep;
  opts.seed = settings.seed;
  opts.stream_id = rep;
  const pipeline::FitResult fit = pipeline::run_fit(data, opts);

  std::vector<double> sigma2_draws;
  sigma2_draws.reserve(fit.draws.size());
  for (const auto& d : fit.draws) sigma2_draws.push_back(d.sigma * d.sigma);
  std::sort(sigma2_draws.begin(), sigma2_draws.end());

  // Per-draw mean values at every design point, sorted per point.
  const Eigen::Index n = data.n();
  std::vector<std::vector<double>> mean_values(static_cast<std::size_t>(n));
  std::vector<double> truth(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec row = fit.design.z.row(i);
    mean_values[static_cast<std::size_t>(i)] =
        inference::mean_draw_values(fit.draws, row, fit.design.response_mean, fit.design.h);
    std::sort(mean_values[static_cast<std::size_t>(i)].begin(),
              mean_values[static_cast<std::size_t>(i)].end());
    truth[static_cast<std::size_t>(i)] = true_mean(data.x.row(i));
  }

  outcome.per_level.resize(settings.levels.size());
  for (std::size_t lv = 0; lv < settings.levels.size(); ++lv) {
    const double level = settings.levels[lv];
    const double alpha = 1.0 - level;
    auto& row = outcome.per_level[lv];

    const double s2_lo = quantile_sorted(sigma2_draws, 0.5 * alpha);
    const double s2_hi = quantile_sorted(sigma2_draws, 1.0 - 0.5 * alpha);
    row[0] = (s2_lo <= sigma2_true && sigma2_true <= s2_hi) ? 1.0 : 0.0;
    row[1] = s2_hi - s2_lo;

    double hits = 0.0, widths = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& vals = mean_values[static_cast<std::size_t>(i)];
      const double lo = quantile_sorted(vals, 0.5 * alpha);
      const double hi = quantile_sorted(vals, 1.0 - 0.5 * alpha);
      if (lo <= truth[static_cast<std::size_t>(i)] && truth[static_cast<std::size_t>(i)] <= hi)
        hits += 1.0;
      widths += hi - lo;
    }
    row[2] = hits / static_cast<double>(n);
    row[3] = widths / static_cast<double>(n);

    const OracleIntervals oracle = oracle_intervals(data, settings.spline, level);
    row[4] = (oracle.sigma2.lower <= sigma2_true && sigma2_true <= oracle.sigma2.upper) ? 1.0 : 0.0;
    row[5] = oracle.sigma2.upper - oracle.sigma2.lower;
    hits = widths = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& iv = oracle.means[static_cast<std::size_t>(i)];
      if (iv.lower <= truth[static_cast<std::size_t>(i)] &&
          truth[static_cast<std::size_t>(i)] <= iv.upper)
        hits += 1.0;
      widths += iv.upper - iv.lower;
    }
    row[6] = hits / static_cast<double>(n);
    row[7] = widths / static_cast<double>(n);
  }
  outcome.ok = true;
  return outcome;
}

}  // namespace

CoverageReport coverage_experiment(const SimSettings& settings) {
  settings.validate();
  const auto reps = static_cast<std::size_t>(settings.replications);
  std::vector<RepOutcome> outcomes(reps);
  parallel_for(reps, settings.threads, [&](std::size_t r) {
    try {
      outcomes[r] = run_replication(settings, r);
    } catch (const Error&) {
      // Failed replications are excluded and counted below.
    }
  });

  CoverageReport report;
  std::size_t ok_count = 0;
  for (const auto& o : outcomes)
    if (o.ok) ++ok_count;
  report.errors_excluded = static_cast<int>(reps - ok_count);
  if (ok_count == 0 || static_cast<double>(report.errors_excluded) > 0.02 * static_cast<double>(reps))
    throw NumericError("coverage_experiment: more than 2% of replications failed (" +
                       std::to_string(report.errors_excluded) + " of " + std::to_string(reps) + ")");

  for (std::size_t lv = 0; lv < settings.levels.size(); ++lv) {
    std::array<double, 8> sums{};
    for (const auto& o : outcomes) {
      if (!o.ok) continue;
      for (int k = 0; k < 8; ++k) sums[static_cast<std::size_t>(k)] += o.per_level[lv][static_cast<std::size_t>(k)];
    }
    for (auto& s : sums) s /= static_cast<double>(ok_count);
    const double level = settings.levels[lv];
    report.rows.push_back({"sigma2", "proposed", level, sums[0], sums[1]});
    report.rows.push_back({"sigma2", "oracle", level, sums[4], sums[5]});
    report.rows.push_back({"mean", "proposed", level, sums[2], sums[3]});
    report.rows.push_back({"mean", "oracle", level, sums[6], sums[7]});
  }
  return report;
}

SelectionReport selection_experiment(const SimSettings& settings) {
  settings.validate();
  const auto reps = static_cast<std::size_t>(settings.replications);
  std::vector<int> outcome(reps, -1);  // -1 error, 0 miss, 1 hit
  parallel_for(reps, settings.threads, [&](std::size_t r) {
    try {
      stats::RngStream data_rng(settings.seed, (std::uint64_t{1} << 32) + r);
      const Dataset data = gen_dataset(settings, data_rng);
      pipeline::FitOptions opts;
      opts.spline = settings.spline;
      opts.path = settings.path;
      opts.draws = 0;
      opts.seed = settings.seed;
      opts.stream_id = r;
      const pipeline::FitResult fit = pipeline::run_fit(data, opts);
      outcome[r] = fit.probs.front().model.predictors == std::vector<int>{0, 1, 2, 3} ? 1 : 0;
    } catch (const Error&) {
    }
  });

  SelectionReport report;
  std::size_t ok_count = 0, hits = 0;
  for (int o : outcome) {
    if (o < 0) continue;
    ++ok_count;
    hits += static_cast<std::size_t>(o);
  }
  report.errors_excluded = static_cast<int>(reps - ok_count);
  if (ok_count == 0 || static_cast<double>(report.errors_excluded) > 0.02 * static_cast<double>(reps))
    throw NumericError("selection_experiment: more than 2% of replications failed");
  report.frequency = static_cast<double>(hits) / static_cast<double>(ok_count);
  return report;
}

std::string coverage_csv(const SimSettings& settings, const CoverageReport& report) {
  std::ostringstream out;
  out << "target,method,level,coverage,avg_width,n,p,sigma,l,K,replications,errors_excluded\n";
  for (const auto& row : report.rows) {
    out << row.target << ',' << row.method << ',' << io::format_number(row.level) << ','
        << io::format_number(row.coverage) << ',' << io::format_number(row.avg_width) << ','
        << settings.n << ',' << settings.p << ',' << io::format_number(settings.sigma) << ','
        << settings.spline.degree << ',' << settings.spline.interior_knots << ','
        << settings.replications << ',' << report.errors_excluded << '\n';
  }
  return out.str();
}

}  // namespace gfam::simulate
