#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "gfam/io.hpp"
#include "gfam/pipeline.hpp"
#include "gfam/simulate.hpp"

namespace {

using namespace gfam;

struct CommonOpts {
  int degree = 3;
  int knots = 8;
  double q = 0.0;  // 0 means default 0.2/p
  int draws = 10000;
  std::vector<double> levels = {0.95};
  std::uint64_t seed = 0;
  int bootstraps = 10;
  int grid_size = 50;
  int threads = 1;
};

// Flags mirrored by GFAM_-prefixed environment variables.
void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--degree", opts.degree, "B-spline degree l")->envname("GFAM_DEGREE");
  cmd->add_option("--knots", opts.knots, "interior knot count K")->envname("GFAM_KNOTS");
  cmd->add_option("--q", opts.q, "sparsity penalty q (default 0.2/p)")->envname("GFAM_Q");
  cmd->add_option("--draws", opts.draws, "fiducial sample size")->envname("GFAM_DRAWS");
  cmd->add_option("--level", opts.levels, "confidence level(s)")->envname("GFAM_LEVEL");
  cmd->add_option("--seed", opts.seed, "random seed")->envname("GFAM_SEED");
  cmd->add_option("--bootstraps", opts.bootstraps, "bootstrap path count")
      ->envname("GFAM_BOOTSTRAPS");
  cmd->add_option("--grid-size", opts.grid_size, "lambda grid size")->envname("GFAM_GRID_SIZE");
  cmd->add_option("--threads", opts.threads, "worker thread cap")->envname("GFAM_THREADS");
}

pipeline::FitOptions to_fit_options(const CommonOpts& opts) {
  pipeline::FitOptions fit;
  fit.spline.degree = opts.degree;
  fit.spline.interior_knots = opts.knots;
  fit.path.bootstrap_B = opts.bootstraps;
  fit.path.grid_size = opts.grid_size;
  if (opts.q > 0.0) fit.q = opts.q;
  fit.draws = opts.draws;
  fit.seed = opts.seed;
  return fit;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
}

int run(int argc, char** argv) {
  CLI::App app{"Fiducial inference for sparse nonparametric additive models"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string input, response, out_path, state_path, truth_path;
  int screen_top = 0;
  int top_k = 10;

  auto* fit_cmd = app.add_subcommand("fit", "fit a dataset and write a results document");
  fit_cmd->add_option("--input", input, "input CSV")->required()->envname("GFAM_INPUT");
  fit_cmd->add_option("--response", response, "response column name (default: first column)")
      ->envname("GFAM_RESPONSE");
  fit_cmd->add_option("--screen-top", screen_top, "keep top-d covariates by variance")
      ->envname("GFAM_SCREEN_TOP");
  fit_cmd->add_option("--top-models", top_k, "models to list in the summary");
  fit_cmd->add_option("--out", out_path, "summary JSON path")->required()->envname("GFAM_OUT");
  fit_cmd->add_option("--state-out", state_path, "persisted fit state path (for predict)");
  add_common(fit_cmd, opts);

  std::string points_path;
  auto* predict_cmd = app.add_subcommand("predict", "intervals at new points from a saved fit");
  predict_cmd->add_option("--state", state_path, "fit state from fit --state-out")->required();
  predict_cmd->add_option("--input", points_path, "new points CSV")->required()
      ->envname("GFAM_INPUT");
  predict_cmd->add_option("--out", out_path, "intervals CSV path")->required()
      ->envname("GFAM_OUT");
  add_common(predict_cmd, opts);

  simulate::SimSettings sim;
  auto* sim_cmd = app.add_subcommand("simulate", "generate a simulated dataset CSV");
  sim_cmd->add_option("--n", sim.n, "sample size");
  sim_cmd->add_option("--p", sim.p, "covariate count");
  sim_cmd->add_option("--sigma", sim.sigma, "noise standard deviation");
  sim_cmd->add_option("--correlation", sim.correlation, "covariate equicorrelation");
  sim_cmd->add_option("--out", out_path, "dataset CSV path")->required()->envname("GFAM_OUT");
  sim_cmd->add_option("--truth-out", truth_path, "per-row true mean CSV");
  add_common(sim_cmd, opts);

  auto* cov_cmd = app.add_subcommand("coverage", "run the coverage experiment");
  cov_cmd->add_option("--n", sim.n, "sample size");
  cov_cmd->add_option("--p", sim.p, "covariate count");
  cov_cmd->add_option("--sigma", sim.sigma, "noise standard deviation");
  cov_cmd->add_option("--correlation", sim.correlation, "covariate equicorrelation");
  cov_cmd->add_option("--reps", sim.replications, "replication count");
  cov_cmd->add_option("--out", out_path, "coverage CSV path")->required()->envname("GFAM_OUT");
  add_common(cov_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's per-error exit codes onto the documented contract:
    // 0 for --help/--version, 1 for any usage error.
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (fit_cmd->parsed()) {
    Dataset data = io::ingest_csv(input, response);
    if (screen_top > 0) data = io::variance_screen(data, screen_top).first;
    const pipeline::FitResult result = pipeline::run_fit(data, to_fit_options(opts));
    write_file(out_path, io::fit_summary_json(result, top_k, opts.levels.front(), opts.seed));
    if (!state_path.empty()) io::save_fit_state(result, state_path);
  } else if (predict_cmd->parsed()) {
    const pipeline::FitResult state = io::load_fit_state(state_path);
    const Mat points = io::read_points_csv(points_path, state.design.names);
    stats::RngStream rng(opts.seed, 0xF1DUL);
    std::string csv = "row,level,mean_lower,mean_upper,pred_lower,pred_upper\n";
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const Vec x = points.row(i);
      for (double level : opts.levels) {
        const auto mean = inference::mean_ci(state.draws, x, state.design, level);
        const auto pred = inference::prediction_interval(state.draws, x, state.design, level, rng);
        csv += std::to_string(i + 1) + ',' + io::format_number(level) + ',' +
               io::format_number(mean.lower) + ',' + io::format_number(mean.upper) + ',' +
               io::format_number(pred.lower) + ',' + io::format_number(pred.upper) + '\n';
      }
    }
    write_file(out_path, csv);
  } else if (sim_cmd->parsed()) {
    sim.seed = opts.seed;
    stats::RngStream rng(sim.seed, std::uint64_t{1} << 32);
    const Dataset data = simulate::gen_dataset(sim, rng);
    io::write_dataset_csv(data, out_path);
    if (!truth_path.empty()) {
      std::string csv = "row,true_mean\n";
      for (Eigen::Index i = 0; i < data.n(); ++i)
        csv += std::to_string(i + 1) + ',' +
               io::format_number(simulate::true_mean(data.x.row(i))) + '\n';
      write_file(truth_path, csv);
    }
  } else if (cov_cmd->parsed()) {
    sim.spline.degree = opts.degree;
    sim.spline.interior_knots = opts.knots;
    sim.path.bootstrap_B = opts.bootstraps;
    sim.path.grid_size = opts.grid_size;
    sim.levels = opts.levels;
    sim.draws_per_rep = opts.draws;
    sim.seed = opts.seed;
    sim.threads = opts.threads;
    const auto report = simulate::coverage_experiment(sim);
    write_file(out_path, simulate::coverage_csv(sim, report));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gfam::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const gfam::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
