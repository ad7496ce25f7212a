#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gfam/stats.hpp"

using namespace gfam;
using namespace gfam::stats;

namespace {

// Adaptive Simpson quadrature, independent of the implementation under test.
double simpson(double (*f)(double, int), int j, double a, double b) {
  const int steps = 200000;  // fine uniform grid; integrand is smooth
  const double dx = (b - a) / steps;
  double sum = f(a, j) + f(b, j);
  for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * dx, j);
  return sum * dx / 3.0;
}

double chi2_density(double x, int j) {
  const double half = 0.5 * j;
  return std::exp((half - 1.0) * std::log(x) - 0.5 * x - half * std::log(2.0) -
                  std::lgamma(half));
}

double chi2_tail_by_integration(double c, int j) {
  // exp(-x/2) decay makes the mass beyond c + 400 negligible at 1e-15.
  return simpson(chi2_density, j, c, c + 400.0);
}

double normal_density(double x, int /*unused*/) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

}  // namespace

TEST_CASE("chi-square draws match first two moments") {
  RngStream rng(42, 0);
  const int n = 1000000;

  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_chi_square(rng, 2);
  CHECK(sum / n == doctest::Approx(2.0).epsilon(0.005));

  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_chi_square(rng, 10);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  CHECK(s2 / n - mean * mean == doctest::Approx(20.0).epsilon(0.025));
}

TEST_CASE("chi-square tail frequency matches the integration oracle") {
  // oracle: P(chi^2_5 > 11.07) by quadrature
  const double expected = chi2_tail_by_integration(11.07, 5);
  CHECK(expected == doctest::Approx(0.050).epsilon(0.01));

  RngStream rng(7, 3);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (sample_chi_square(rng, 5) > 11.07) ++hits;
  CHECK(std::abs(static_cast<double>(hits) / n - expected) < 0.002);
}

TEST_CASE("chi-square draws: mean/variance within 4 MC s.e. for df 1..30") {
  const int n = 100000;
  for (int df = 1; df <= 30; ++df) {
    RngStream rng(1234, static_cast<std::uint64_t>(df));
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_chi_square(rng, df);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    // se(mean) = sqrt(2 df / n); se(var) uses Var(X^2)-based bound ~ sqrt(8df(df+3))/sqrt(n)
    const double se_mean = std::sqrt(2.0 * df / n);
    const double se_var = std::sqrt(8.0 * df * (df + 3.0) / n);
    CHECK(std::abs(mean - df) < 4.0 * se_mean);
    CHECK(std::abs(var - 2.0 * df) < 4.0 * se_var);
  }
}

TEST_CASE("sample_chi_square rejects df = 0") {
  RngStream rng(0, 0);
  CHECK_THROWS_AS(sample_chi_square(rng, 0), NumericError);
}

TEST_CASE("standard normal vector moments") {
  RngStream rng(9, 1);
  const int n = 1000000;
  double sum = 0.0, cross = 0.0;
  double tail = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec z = sample_std_normal_vec(rng, 2);
    sum += z[0];
    cross += z[0] * z[1];
    if (std::abs(z[0]) > 1.96) tail += 1.0;
  }
  CHECK(std::abs(sum / n) < 0.005);
  CHECK(std::abs(cross / n) < 0.005);

  const double expected = 2.0 * simpson(normal_density, 0, 1.96, 40.0);
  CHECK(expected == doctest::Approx(0.05).epsilon(0.01));
  CHECK(std::abs(tail / n - expected) < 0.002);

  CHECK_THROWS_AS(sample_std_normal_vec(rng, 0), NumericError);
}

TEST_CASE("reproducibility: same (seed, stream) gives identical sequences") {
  RngStream a(99, 5), b(99, 5), c(99, 6);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double xa = a.normal(), xb = b.normal(), xc = c.normal();
    all_equal = all_equal && (xa == xb);
    any_diff = any_diff || (xa != xc);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("empirical_quantile examples") {
  CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4, 5}, 0.5) == 3.0);
  CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4}, 0.0) == 1.0);
  // h = (2-1)*0.25 + 1 = 1.25 -> 10 + 0.25*(20-10)
  CHECK(empirical_quantile(std::vector<double>{10, 20}, 0.25) == doctest::Approx(12.5));
  CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), NumericError);
}

TEST_CASE("empirical_quantile is monotone in q and affine-equivariant") {
  RngStream rng(3, 0);
  std::vector<double> samples(57);
  for (auto& s : samples) s = rng.normal();
  double prev = -1e300;
  for (int k = 0; k <= 20; ++k) {
    const double q = k / 20.0;
    const double v = empirical_quantile(samples, q);
    CHECK(v >= prev);
    prev = v;
  }
  std::vector<double> scaled(samples);
  for (auto& s : scaled) s = 2.5 * s - 7.0;
  for (double q : {0.1, 0.37, 0.5, 0.9})
    CHECK(empirical_quantile(scaled, q) ==
          doctest::Approx(2.5 * empirical_quantile(samples, q) - 7.0).epsilon(1e-12));
}

TEST_CASE("chi_square_upper_tail exact values") {
  CHECK(chi_square_upper_tail(1e-14, 3) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(chi_square_upper_tail(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const double oracle = chi2_tail_by_integration(10.0, 4);
  CHECK(std::abs(chi_square_upper_tail(10.0, 4) - oracle) < 1e-10);
}

TEST_CASE("tail asymptotic matches Lemma-style leading term") {
  CHECK(chi_square_tail_asymptotic(20.0, 2) == doctest::Approx(std::exp(-10.0)).epsilon(1e-12));
  for (int j : {2, 4, 8}) {
    const double c = 50.0 * j;
    const double ratio = chi_square_tail_asymptotic(c, j) / chi_square_upper_tail(c, j);
    CHECK(std::abs(ratio - 1.0) <= 0.05);
  }
}

TEST_CASE("chi-square and t quantiles invert their cdfs") {
  for (int df : {1, 4, 30, 113}) {
    for (double prob : {0.025, 0.5, 0.975}) {
      const double x = chi_square_quantile(prob, df);
      CHECK(1.0 - chi_square_upper_tail(x, df) == doctest::Approx(prob).epsilon(1e-8));
    }
  }
  // Classic t critical values.
  CHECK(student_t_quantile(0.975, 10) == doctest::Approx(2.228138852).epsilon(1e-6));
  CHECK(student_t_quantile(0.975, 1) == doctest::Approx(12.7062047).epsilon(1e-6));
  CHECK(student_t_quantile(0.5, 7) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(student_t_quantile(0.025, 10) == doctest::Approx(-2.228138852).epsilon(1e-6));
}
