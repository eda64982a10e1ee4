#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace stablecx {

/// A Monte Carlo estimate with its standard error and provenance.
struct StatResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Sample mean with stderr = sample standard deviation / sqrt(n).
StatResult mean_estimate(std::span<const double> values, std::uint64_t seed);

/// Sample mean with stderr from `batches` contiguous batch means. Suited to
/// heavy-tailed per-trial values whose variance may not exist.
StatResult batch_mean_estimate(std::span<const double> values, std::size_t batches, std::uint64_t seed);

/// (mean of values)^(1/r) / norm with a delete-one jackknife standard error.
/// `values` are |S_j|^r draws; the result estimates ||S||_r / norm.
StatResult power_mean_estimate(std::span<const double> values, double r, double norm, std::uint64_t seed);

/// Empirical characteristic function (1/n) sum_j exp(i t x_j), summed in index order.
std::complex<double> empirical_cf(std::span<const double> values, double t);

struct KsResult {
  double statistic;
  double p_value;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q(sqrt(n m / (n + m)) D). Throws std::invalid_argument on empty input.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace stablecx
