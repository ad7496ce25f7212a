#include "gfam/grouplasso.hpp"

#include <cassert>
#include <cmath>
#include <set>

namespace gfam::grouplasso {

void PathConfig::validate() const {
  if (grid_size < 2) throw NumericError("PathConfig: grid_size must be >= 2");
  if (grid_ratio <= 0.0 || grid_ratio >= 1.0)
    throw NumericError("PathConfig: grid_ratio must be in (0,1)");
  if (tol <= 0.0) throw NumericError("PathConfig: tol must be positive");
  if (max_iter < 1) throw NumericError("PathConfig: max_iter must be >= 1");
  if (bootstrap_B < 0) throw NumericError("PathConfig: bootstrap_B must be >= 0");
}

double lambda_max(const Mat& z, const Vec& y, int h) {
  const int num_groups = static_cast<int>(z.cols()) / h;
  const Vec zty = z.transpose() * y;
  double best = 0.0;
  for (int j = 0; j < num_groups; ++j)
    best = std::max(best, zty.segment(static_cast<Eigen::Index>(j) * h, h).norm());
  return 2.0 * best;
}

double lipschitz_estimate(const Mat& z, int power_iters) {
  Vec v = Vec::Ones(z.cols());
  v.normalize();
  double eig = 0.0;
  for (int i = 0; i < power_iters; ++i) {
    Vec w = z.transpose() * (z * v);
    const double nrm = w.norm();
    if (nrm == 0.0) return 2.0;  // Z == 0
    eig = nrm;
    v = w / nrm;
  }
  // Small headroom so the initial step is valid even if power iteration
  // has not fully converged.
  return 2.0 * eig * 1.01;
}

namespace {

double group_norm_sum(const Vec& beta, int h) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < beta.size() / h; ++j) s += beta.segment(j * h, h).norm();
  return s;
}

// prox of step * lambda * sum_j ||.||_2: blockwise shrink.
void group_prox(Vec& v, int h, double threshold) {
  for (Eigen::Index j = 0; j < v.size() / h; ++j) {
    auto block = v.segment(j * h, h);
    const double nrm = block.norm();
    if (nrm <= threshold)
      block.setZero();
    else
      block *= 1.0 - threshold / nrm;
  }
}

struct KktResidual {
  double active;
  double inactive;
};

// ztr = Z^T (y - Z beta).  Stationarity requires 2 Z_j^T r = lambda u_j with
// u_j = beta_j/||beta_j|| on active blocks and ||u_j|| <= 1 on inactive ones.
KktResidual kkt_residual(const Vec& beta, const Vec& ztr, int h, double lambda) {
  KktResidual res{0.0, 0.0};
  for (Eigen::Index j = 0; j < beta.size() / h; ++j) {
    const auto bj = beta.segment(j * h, h);
    const auto gj = ztr.segment(j * h, h);
    const double bnorm = bj.norm();
    if (bnorm > 0.0)
      res.active = std::max(res.active, (2.0 * gj - lambda * bj / bnorm).norm() / lambda);
    else
      res.inactive = std::max(res.inactive, (2.0 * gj.norm() - lambda) / lambda);
  }
  return res;
}

}  // namespace

SolveResult group_lasso_solve(const Mat& z, const Vec& y, int h, double lambda,
                              const Vec& warm_start, double lipschitz,
                              const PathConfig& config) {
  if (lambda <= 0.0) throw NumericError("group_lasso_solve: lambda must be positive");
  config.validate();

  // At or above lambda_max the all-zero vector is the exact solution; return
  // it directly rather than letting rounding in the prox threshold leave a
  // stray near-zero block.
  const double lmax = lambda_max(z, y, h);
  if (lambda >= lmax) {
    SolveResult out;
    out.beta = Vec::Zero(z.cols());
    out.converged = true;
    out.objective = y.squaredNorm();
    out.kkt_inactive = std::max(0.0, (lmax - lambda) / lambda);
    if (config.record_objective) out.objective_trace.push_back(out.objective);
    return out;
  }

  Vec x = warm_start.size() == z.cols() ? warm_start : Vec::Zero(z.cols());
  Vec x_prev = x;
  Vec zx = z * x;
  Vec zx_prev = zx;
  double obj = (y - zx).squaredNorm() + lambda * group_norm_sum(x, h);
  double theta = 1.0;
  double step = 1.0 / std::max(lipschitz, 1e-300);

  SolveResult out;
  if (config.record_objective) out.objective_trace.push_back(obj);
  Vec v, grad, cand, zcand;
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    // Nesterov extrapolation; Z*v comes from cached Z*x vectors.
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const double mom = (theta - 1.0) / theta_next;
    v = x + mom * (x - x_prev);
    Vec zv = zx + mom * (zx - zx_prev);

    auto backtrack = [&](const Vec& point, const Vec& zpoint) {
      const Vec r = y - zpoint;
      const double f_point = r.squaredNorm();
      grad = -2.0 * (z.transpose() * r);
      for (;;) {
        cand = point - step * grad;
        group_prox(cand, h, step * lambda);
        zcand = z * cand;
        const double f_cand = (y - zcand).squaredNorm();
        const Vec diff = cand - point;
        if (f_cand <= f_point + grad.dot(diff) + diff.squaredNorm() / (2.0 * step) + 1e-12)
          return f_cand;
        step *= 0.5;
      }
    };

    double f_cand = backtrack(v, zv);
    double obj_cand = f_cand + lambda * group_norm_sum(cand, h);
    if (obj_cand > obj) {
      // Monotone safeguard: fall back to a plain proximal step from x.
      f_cand = backtrack(x, zx);
      obj_cand = f_cand + lambda * group_norm_sum(cand, h);
      theta = 1.0;
    }
    assert(obj_cand <= obj * (1.0 + 1e-12) + 1e-12);

    const Vec ztr = z.transpose() * (y - zcand);
    const KktResidual kkt = kkt_residual(cand, ztr, h, lambda);
    const double rel_change = std::abs(obj - obj_cand) / std::max(1.0, std::abs(obj));

    x_prev = x;
    zx_prev = zx;
    x = cand;
    zx = zcand;
    obj = obj_cand;
    if (config.record_objective) out.objective_trace.push_back(obj);
    const double theta_future = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    theta = theta_future;

    out.iterations = iter;
    out.kkt_active = kkt.active;
    out.kkt_inactive = kkt.inactive;
    const bool kkt_ok = kkt.active <= config.kkt_tol && kkt.inactive <= config.kkt_tol;
    if ((kkt_ok && rel_change <= config.tol) ||
        (kkt.active <= 0.1 * config.kkt_tol && kkt.inactive <= 0.1 * config.kkt_tol)) {
      out.converged = true;
      break;
    }
  }

  out.beta = x;
  out.objective = obj;
  if (!out.converged)
    out.converged = out.kkt_active <= config.kkt_tol && out.kkt_inactive <= config.kkt_tol;
  return out;
}

namespace {

linmodel::Model support_of(const Vec& beta, int h, double select_tol) {
  linmodel::Model model;
  const double total = beta.norm();
  if (total == 0.0) return model;
  for (Eigen::Index j = 0; j < beta.size() / h; ++j)
    if (beta.segment(j * h, h).norm() > select_tol * total)
      model.predictors.push_back(static_cast<int>(j));
  return model;
}

}  // namespace

std::vector<linmodel::Model> solution_path(const Mat& z, const Vec& y, int h,
                                           const PathConfig& config, int* warnings) {
  config.validate();
  std::vector<linmodel::Model> supports;
  std::set<std::vector<int>> seen;
  auto push = [&](const linmodel::Model& m) {
    if (seen.insert(m.predictors).second) supports.push_back(m);
  };
  push(linmodel::Model{});

  const double lam_max = lambda_max(z, y, h);
  if (lam_max <= 0.0) return supports;  // y orthogonal to every group

  const double lip = lipschitz_estimate(z);
  const double log_ratio = std::log(config.grid_ratio);
  Vec warm = Vec::Zero(z.cols());
  for (int i = 0; i < config.grid_size; ++i) {
    const double lam = lam_max * std::exp(log_ratio * i / (config.grid_size - 1));
    SolveResult res = group_lasso_solve(z, y, h, lam, warm, lip, config);
    if (!res.converged && warnings) ++(*warnings);
    warm = res.beta;
    const linmodel::Model m = support_of(res.beta, h, config.select_tol);
    if (config.max_support > 0 && m.m() > config.max_support) break;
    push(m);
  }
  return supports;
}

CandidateModels collect_candidates(const splines::DesignMatrix& design,
                                   const PathConfig& config, stats::RngStream& rng) {
  config.validate();
  const Eigen::Index n = design.n();
  const int h = design.h;

  PathConfig path_config = config;
  if (path_config.max_support <= 0)
    path_config.max_support = std::max(1, (static_cast<int>(n) - 3) / h);

  CandidateModels out;
  std::set<std::vector<int>> seen;
  auto admissible = [&](const linmodel::Model& m) {
    if (m.p_star(h) > static_cast<int>(n) - 3) return false;
    if (m.m() == 0) return true;
    try {
      linmodel::fit_ols(design, design.y_centered, m);
    } catch (const NumericError&) {
      return false;
    }
    return true;
  };
  auto absorb = [&](const std::vector<linmodel::Model>& supports, int run) {
    for (const auto& m : supports)
      if (seen.insert(m.predictors).second && admissible(m)) {
        out.models.push_back(m);
        out.provenance.push_back(run);
      }
  };

  absorb({linmodel::Model{}}, -1);
  int warnings = 0;
  absorb(solution_path(design.z, design.y_centered, h, path_config, &warnings), -1);
  for (int b = 0; b < config.bootstrap_B; ++b) {
    Mat zb(n, design.z.cols());
    Vec yb(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = rng.uniform_index(static_cast<std::uint64_t>(n));
      zb.row(i) = design.z.row(static_cast<Eigen::Index>(row));
      yb[i] = design.y_centered[static_cast<Eigen::Index>(row)];
    }
    absorb(solution_path(zb, yb, h, path_config, &warnings), b);
  }
  out.convergence_warnings = warnings;
  return out;
}

}  // namespace gfam::grouplasso
