#include "stablecx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace stablecx {
namespace {

/// Mean and unbiased variance, accumulated in index order.
std::pair<double, double> mean_variance(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const double mean = static_cast<double>(sum / n);
  long double ss = 0.0L;
  for (double v : values) {
    const long double d = v - mean;
    ss += d * d;
  }
  const double var = values.size() > 1 ? static_cast<double>(ss / (n - 1.0)) : 0.0;
  return {mean, var};
}

}  // namespace

StatResult mean_estimate(std::span<const double> values, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("mean_estimate: no values");
  const auto [mean, var] = mean_variance(values);
  return {mean, std::sqrt(var / static_cast<double>(values.size())), values.size(), seed};
}

StatResult batch_mean_estimate(std::span<const double> values, std::size_t batches, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("batch_mean_estimate: no values");
  const std::size_t n = values.size();
  batches = std::clamp<std::size_t>(batches, 1, n);
  std::vector<double> means(batches);
  long double total = 0.0L;
  for (std::size_t b = 0; b < batches; ++b) {
    // Batch b covers [b n / B, (b+1) n / B).
    const std::size_t lo = b * n / batches;
    const std::size_t hi = (b + 1) * n / batches;
    long double sum = 0.0L;
    for (std::size_t j = lo; j < hi; ++j) sum += values[j];
    total += sum;
    means[b] = static_cast<double>(sum / static_cast<long double>(hi - lo));
  }
  const double mean = static_cast<double>(total / static_cast<long double>(n));
  double err = 0.0;
  if (batches > 1) {
    const auto [bm, bvar] = mean_variance(means);
    (void)bm;
    err = std::sqrt(bvar / static_cast<double>(batches));
  }
  return {mean, err, n, seed};
}

StatResult power_mean_estimate(std::span<const double> values, double r, double norm, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("power_mean_estimate: no values");
  if (!(r > 0.0) || !(norm > 0.0)) throw std::domain_error("power_mean_estimate: r and norm must be positive");
  const std::size_t n = values.size();
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const double mean = static_cast<double>(sum / static_cast<long double>(n));
  const double estimate = std::pow(mean, 1.0 / r) / norm;
  if (n < 2) return {estimate, 0.0, n, seed};

  // Delete-one replicates theta_j = ((sum - v_j)/(n-1))^(1/r) / norm.
  std::vector<double> reps(n);
  long double rep_sum = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const double loo = static_cast<double>((sum - values[j]) / static_cast<long double>(n - 1));
    reps[j] = std::pow(std::max(loo, 0.0), 1.0 / r) / norm;
    rep_sum += reps[j];
  }
  const double rep_mean = static_cast<double>(rep_sum / static_cast<long double>(n));
  long double ss = 0.0L;
  for (double t : reps) {
    const long double d = t - rep_mean;
    ss += d * d;
  }
  const double var = static_cast<double>(ss) * static_cast<double>(n - 1) / static_cast<double>(n);
  return {estimate, std::sqrt(var), n, seed};
}

std::complex<double> empirical_cf(std::span<const double> values, double t) {
  if (values.empty()) throw std::invalid_argument("empirical_cf: no values");
  long double re = 0.0L;
  long double im = 0.0L;
  for (double x : values) {
    re += std::cos(t * x);
    im += std::sin(t * x);
  }
  const auto n = static_cast<long double>(values.size());
  return {static_cast<double>(re / n), static_cast<double>(im / n)};
}

double kolmogorov_survival(double lambda) {
  using std::numbers::pi;
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Small-lambda form: 1 - sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double y = -pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 8; ++k) cdf += std::exp(y * (2 * k - 1) * (2 * k - 1));
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: both samples must be non-empty");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());

  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    // Step past every copy of the smaller value in both samples before comparing.
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double en = std::sqrt(nx * ny / (nx + ny));
  return {d, kolmogorov_survival(en * d)};
}

}  // namespace stablecx
