#include "gfam/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gfam::stats {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Expand (seed, stream_id) through splitmix64 so nearby keys give
  // unrelated states.
  std::uint64_t s = seed ^ rotl(stream_id, 32) ^ 0xA3EC647659359ACDULL;
  splitmix64(s);
  std::uint64_t t = s ^ stream_id;
  for (auto& w : state_) w = splitmix64(t);
}

std::uint64_t RngStream::next_raw() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  // 53-bit mantissa; map 0 to the smallest representable step.
  double u = static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  // Rejection to remove modulo bias.
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t r;
  do {
    r = next_raw();
  } while (r >= limit);
  return r % n;
}

double RngStream::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  have_cached_normal_ = true;
  return u * f;
}

double RngStream::gamma(double shape, double scale) {
  // Marsaglia-Tsang squeeze method; shape < 1 boosted via Gamma(a+1) U^{1/a}.
  if (shape < 1.0) {
    const double u = uniform();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double sample_chi_square(RngStream& rng, int df) {
  if (df < 1) throw NumericError("sample_chi_square: df must be >= 1");
  return rng.gamma(0.5 * df, 2.0);
}

Vec sample_std_normal_vec(RngStream& rng, int n) {
  if (n < 1) throw NumericError("sample_std_normal_vec: n must be >= 1");
  Vec z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.normal();
  return z;
}

double empirical_quantile(const std::vector<double>& samples, double q) {
  if (samples.empty()) throw NumericError("empirical_quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw NumericError("empirical_quantile: q outside [0,1]");
  std::vector<double> v(samples);
  std::sort(v.begin(), v.end());
  const double h = static_cast<double>(v.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return v[lo] + (h - std::floor(h)) * (v[hi] - v[lo]);
}

double empirical_quantile(const Vec& samples, double q) {
  return empirical_quantile(
      std::vector<double>(samples.data(), samples.data() + samples.size()), q);
}

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;

// Series representation of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw NumericError("gamma_p: invalid arguments");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw NumericError("gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_upper_tail(double c, int j) {
  if (c <= 0.0) return 1.0;
  if (j < 1) throw NumericError("chi_square_upper_tail: j must be >= 1");
  return gamma_q(0.5 * j, 0.5 * c);
}

double chi_square_tail_asymptotic(double c, int j) {
  if (c <= 0.0 || j < 1) throw NumericError("chi_square_tail_asymptotic: invalid arguments");
  const double half = 0.5 * j;
  return std::exp((half - 1.0) * std::log(0.5 * c) - 0.5 * c - std::lgamma(half));
}

namespace {

double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0 || x < 0.0 || x > 1.0)
    throw NumericError("incomplete_beta: invalid arguments");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

namespace {

// Invert a monotone-increasing cdf by bisection on [lo, hi].
template <typename Cdf>
double invert_cdf(Cdf cdf, double prob, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < prob)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * (1.0 + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double chi_square_quantile(double prob, int df) {
  if (df < 1 || prob <= 0.0 || prob >= 1.0)
    throw NumericError("chi_square_quantile: invalid arguments");
  double hi = df + 10.0 * std::sqrt(2.0 * df) + 10.0;
  while (gamma_p(0.5 * df, 0.5 * hi) < prob) hi *= 2.0;
  return invert_cdf([df](double x) { return gamma_p(0.5 * df, 0.5 * x); }, prob, 0.0, hi);
}

double student_t_quantile(double prob, int df) {
  if (df < 1 || prob <= 0.0 || prob >= 1.0)
    throw NumericError("student_t_quantile: invalid arguments");
  // Symmetry keeps the median exact and avoids evaluating the beta
  // continued fraction at x ~ 1, where it loses precision.
  if (prob == 0.5) return 0.0;
  if (prob < 0.5) return -student_t_quantile(1.0 - prob, df);
  const auto cdf = [df](double t) {
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
  };
  double hi = 1.0;
  while (cdf(hi) < prob) hi *= 2.0;
  return invert_cdf(cdf, prob, 0.0, hi);
}

}  // namespace gfam::stats
