#pragma once

#include <cstdint>
#include <vector>

#include "gfam/types.hpp"

namespace gfam::stats {

// Deterministic random stream keyed by (seed, stream_id).  The same pair
// always reproduces the same draw sequence, so parallel replications can
// each own a stream keyed by their index and the results do not depend on
// scheduling.  All draws are generated from our own uniform/normal/gamma
// routines (not std::*_distribution) so sequences are stable across
// standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on (0,1), 53-bit resolution, never exactly 0.
  double uniform();

  // One standard normal draw (Marsaglia polar method).
  double normal();

  // Index in [0, n) for categorical / resampling use.
  std::uint64_t uniform_index(std::uint64_t n);

  double gamma(double shape, double scale);

 private:
  std::uint64_t next_raw();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_[4];  // xoshiro256++ state
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// One chi-square draw with df degrees of freedom (df >= 1).
double sample_chi_square(RngStream& rng, int df);

// n independent standard normal draws.
Vec sample_std_normal_vec(RngStream& rng, int n);

// Linear-interpolation quantile: with sorted v_1 <= ... <= v_N and
// h = (N-1)q + 1, returns v_floor(h) + (h - floor(h)) (v_ceil(h) - v_floor(h)).
double empirical_quantile(const std::vector<double>& samples, double q);
double empirical_quantile(const Vec& samples, double q);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// by series (x < a+1) or continued fraction (x >= a+1).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Exact P(chi^2_j > c).
double chi_square_upper_tail(double c, int j);

// Leading-order tail approximation (c/2)^{j/2-1} exp(-c/2) / Gamma(j/2).
double chi_square_tail_asymptotic(double c, int j);

// Regularized incomplete beta I_x(a,b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// Quantile of the chi-square distribution: P(chi^2_df <= result) = prob.
double chi_square_quantile(double prob, int df);

// Quantile of Student's t with df degrees of freedom.
double student_t_quantile(double prob, int df);

}  // namespace gfam::stats
