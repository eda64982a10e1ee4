#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stablecx/parallel.hpp"
#include "stablecx/report.hpp"
#include "stablecx/stable.hpp"
#include "stablecx/stats.hpp"

namespace stablecx {

/// (sum |v_k|^p)^(1/p), accumulated in long double over magnitudes sorted
/// ascending so the result does not depend on entry order.
double p_norm(std::span<const double> v, double p);

/// Leading coordinates of a sequence in l_p together with its exponent.
class CoefVector {
 public:
  /// Throws std::domain_error unless 1 < p <= 2 and every entry is finite.
  CoefVector(std::vector<double> entries, double p);

  std::span<const double> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double p() const noexcept { return p_; }
  double norm() const noexcept { return norm_; }

 private:
  std::vector<double> entries_;
  double p_;
  double norm_;
};

/// The single law equal in distribution to sum_k v_k X_k, X_k iid ~ base:
/// scale_shift(base, ||v||_p, 0). Requires base.alpha() == v.p() and beta = 0.
StableParams equivalent_single(const CoefVector& v, const StableParams& base);

/// Draw j of sum_k v_k X_{jk}, where X_{jk} is the sampler's draw at (stream k, index j).
/// Zero coefficients are skipped, so trailing zeros never change a draw.
double combination_draw(const StableSampler& sampler, const CounterStream& rng, std::span<const double> v,
                        std::uint64_t j) noexcept;

/// KS comparison of n draws of sum_k v_k X_k against n draws of
/// equivalent_single(v, base). Pass iff the p-value exceeds 0.01.
VerificationReport verify_stability_law(const CoefVector& v, const StableParams& base, std::size_t n,
                                        std::uint64_t seed, Workers workers = {});

/// c_{p,r} = (E|sum v_k X_k|^r)^(1/r) / ||v||_p for X_k ~ S(p, 0, 1, 0), with a
/// jackknife standard error. Requires 0 < r < p and v.p() == p.
StatResult c_pr_estimate(double p, double r, const CoefVector& v, std::size_t trials, std::uint64_t seed,
                         Workers workers = {});

/// C(p) = 1 / E|X| for X ~ S(p, 0, 1, 0), from abs_moment. Requires 1 < p < 2.
double contraction_constant(double p);

/// ||v||_p <= C(p) E|sum v_k X_k|: exact left side, Monte Carlo right side.
/// The right side is estimated with sum_k |v_k X_k| as a control variate.
VerificationReport verify_norm_bound(const CoefVector& v, std::size_t trials, std::uint64_t seed,
                                     Workers workers = {});

struct TruncationPoint {
  std::size_t cutoff;
  StatResult error;  // estimate of ||sum_{k > cutoff} v_k X_k||_r
};

/// L_r distance between the full combination and its first-K truncation, for
/// each K in `cutoffs` (ascending, at most v.size()). All cutoffs share the
/// same draws. Requires 0 < r < v.p().
std::vector<TruncationPoint> lr_truncation_convergence(const CoefVector& v, double r,
                                                       std::span<const std::size_t> cutoffs, std::size_t trials,
                                                       std::uint64_t seed, Workers workers = {});

/// True when each error is at most the previous one plus `k` combined stderr.
bool nonincreasing_within(std::span<const TruncationPoint> points, double k = 2.0);

}  // namespace stablecx
