#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stablecx/parallel.hpp"
#include "stablecx/random.hpp"

namespace stablecx {

/// A stable law S(alpha, beta, gamma, delta; 0) in Nolan's 0-parameterization.
///
/// Construction validates 0 < alpha <= 2, -1 <= beta <= 1, gamma > 0 and a
/// finite delta, throwing std::domain_error otherwise. Values are immutable.
class StableParams {
 public:
  StableParams(double alpha, double beta, double gamma, double delta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double delta() const noexcept { return delta_; }
  bool symmetric() const noexcept { return beta_ == 0.0; }

  friend bool operator==(const StableParams&, const StableParams&) = default;

 private:
  double alpha_;
  double beta_;
  double gamma_;
  double delta_;
};

/// Symmetric p-stable law with characteristic function exp(-sigma^p |t|^p / 2).
struct PStableSpec {
  double p;
  double sigma;
};

struct SampleBatch {
  StableParams params;
  std::uint64_t seed;
  std::vector<double> values;

  std::size_t count() const noexcept { return values.size(); }
};

/// S(p, 0, sigma / 2^(1/p), 0; 0). Requires 1 < p < 2 and sigma > 0.
StableParams make_p_stable(const PStableSpec& spec);

/// Characteristic function E exp(itX).
std::complex<double> cf(const StableParams& params, double t);

/// Law of aX + b: S(alpha, sign(a) beta, |a| gamma, a delta + b; 0). Requires a != 0.
StableParams scale_shift(const StableParams& params, double a, double b);

/// Law of X1 + X2 for independent X1, X2 sharing the same alpha (exact equality).
StableParams add(const StableParams& p1, const StableParams& p2);

/// Chambers-Mallows-Stuck transform of one uniform and one exponential variate.
///
/// The two variates come from the two 64-bit halves of a RandomWords block, so
/// the draw at (seed, stream, index) is fixed independently of evaluation order.
class StableSampler {
 public:
  explicit StableSampler(const StableParams& params);

  double operator()(RandomWords words) const noexcept;
  double draw(const CounterStream& rng, std::uint64_t stream, std::uint64_t index) const noexcept {
    return (*this)(rng.words(stream, index));
  }
  const StableParams& params() const noexcept { return params_; }

 private:
  StableParams params_;
  bool unit_alpha_;
  double inv_alpha_;
  double exponent_;  // (1 - alpha) / alpha
  double skew_angle_;
  double skew_scale_;
  double zero_shift_;  // beta tan(pi alpha / 2)
};

/// `count` draws; value j is the draw at stream 0, index j of CounterStream(seed).
SampleBatch sample(const StableParams& params, std::size_t count, std::uint64_t seed, Workers workers = {});

/// gamma^alpha c_alpha (1 + beta) x^-alpha with c_alpha = sin(pi alpha/2) Gamma(alpha) / pi.
/// Requires 0 < alpha < 2, -1 < beta < 1 and x > 0.
double tail_asymptote(const StableParams& params, double x);

struct TailFrequency {
  double x;          // empirical (1 - level) quantile
  double frequency;  // fraction of draws strictly above x
  double asymptote;  // tail_asymptote(params, x)
  double ratio;      // frequency / asymptote
};

/// Empirical exceedance frequency at the empirical (1 - level) quantile of
/// `count` draws of sample(params, count, seed), against the tail asymptote.
TailFrequency empirical_tail(const StableParams& params, std::size_t count, double level, std::uint64_t seed,
                             Workers workers = {});

/// P(X > x) for a symmetric law (beta = 0), from Nolan's integral representation
/// evaluated with adaptive Gauss-Kronrod quadrature. Closed form at alpha = 1.
double upper_tail_probability(const StableParams& params, double x);

/// E|X|^r for a symmetric law, 0 < r < alpha, by quadrature of
/// r * int t^(r-1) P(|X| > t) dt. Past the crossover point where the tail
/// asymptote agrees with the quadrature tail to 1e-5 (relative), the integral
/// is closed analytically. Relative accuracy about 1e-6.
double abs_moment(const StableParams& params, double r);

/// Point at which abs_moment switches from numerical tail probabilities to the
/// asymptote, in units of the law's scale. Infinity for alpha = 2.
double abs_moment_crossover(const StableParams& params);

}  // namespace stablecx
