#include "stablecx/empirical_sums.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stablecx {
namespace {

constexpr std::uint64_t kSingleSideTag = 1;

StableParams unit_law(double p) { return StableParams(p, 0.0, 1.0, 0.0); }

}  // namespace

double p_norm(std::span<const double> v, double p) {
  if (!(p > 0.0)) throw std::domain_error("p_norm: p must be positive");
  std::vector<double> mags;
  mags.reserve(v.size());
  for (double x : v) mags.push_back(std::abs(x));
  std::sort(mags.begin(), mags.end());
  if (mags.empty() || mags.back() == 0.0) return 0.0;
  const double top = mags.back();
  long double sum = 0.0L;
  for (double m : mags) sum += std::pow(static_cast<long double>(m / top), static_cast<long double>(p));
  return top * static_cast<double>(std::pow(sum, 1.0L / static_cast<long double>(p)));
}

CoefVector::CoefVector(std::vector<double> entries, double p) : entries_(std::move(entries)), p_(p), norm_(0.0) {
  if (!(p > 1.0 && p <= 2.0)) throw std::domain_error("CoefVector: p must lie in (1, 2]");
  for (double x : entries_)
    if (!std::isfinite(x)) throw std::domain_error("CoefVector: entries must be finite");
  norm_ = p_norm(entries_, p_);
}

StableParams equivalent_single(const CoefVector& v, const StableParams& base) {
  if (base.alpha() != v.p()) throw std::domain_error("equivalent_single: base alpha must equal the vector's p");
  if (!base.symmetric()) throw std::domain_error("equivalent_single: base law must be symmetric");
  if (v.norm() == 0.0) throw std::domain_error("equivalent_single: coefficient vector is zero");
  return scale_shift(base, v.norm(), 0.0);
}

double combination_draw(const StableSampler& sampler, const CounterStream& rng, std::span<const double> v,
                        std::uint64_t j) noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] != 0.0) sum += v[k] * sampler.draw(rng, k, j);
  }
  return sum;
}

VerificationReport verify_stability_law(const CoefVector& v, const StableParams& base, std::size_t n,
                                        std::uint64_t seed, Workers workers) {
  if (n == 0) throw std::invalid_argument("verify_stability_law: n must be positive");
  const StableParams single = equivalent_single(v, base);
  const StableSampler base_sampler(base);
  const CounterStream sum_rng(seed);
  std::vector<double> sums(n);
  parallel_fill(sums, workers, [&](std::size_t j) { return combination_draw(base_sampler, sum_rng, v.entries(), j); });

  const std::uint64_t single_seed = derive_seed(seed, kSingleSideTag);
  const SampleBatch direct = sample(single, n, single_seed, workers);
  const KsResult ks = ks_two_sample(sums, direct.values);

  VerificationReport report;
  report.name = "stability";
  report.rule = VerdictRule::kKsPValue;
  report.statistic = ks.statistic;
  report.p_value = ks.p_value;
  report.lhs_seed = seed;
  report.rhs_seed = single_seed;
  report.lhs_trials = n;
  report.rhs_trials = n;
  return finalize(report);
}

StatResult c_pr_estimate(double p, double r, const CoefVector& v, std::size_t trials, std::uint64_t seed,
                         Workers workers) {
  if (v.p() != p) throw std::domain_error("c_pr_estimate: vector exponent must equal p");
  if (!(r > 0.0 && r < p)) throw std::domain_error("c_pr_estimate: requires 0 < r < p");
  if (v.norm() == 0.0) throw std::domain_error("c_pr_estimate: coefficient vector is zero");
  if (trials == 0) throw std::invalid_argument("c_pr_estimate: trials must be positive");
  const StableSampler sampler(unit_law(p));
  const CounterStream rng(seed);
  std::vector<double> powered(trials);
  parallel_fill(powered, workers, [&](std::size_t j) {
    return std::pow(std::abs(combination_draw(sampler, rng, v.entries(), j)), r);
  });
  return power_mean_estimate(powered, r, v.norm(), seed);
}

double contraction_constant(double p) {
  if (!(p > 1.0 && p < 2.0)) throw std::domain_error("contraction_constant: p must lie in (1, 2)");
  return 1.0 / abs_moment(unit_law(p), 1.0);
}

VerificationReport verify_norm_bound(const CoefVector& v, std::size_t trials, std::uint64_t seed, Workers workers) {
  const double p = v.p();
  const double constant = contraction_constant(p);
  if (trials == 0) throw std::invalid_argument("verify_norm_bound: trials must be positive");
  const StableSampler sampler(unit_law(p));
  const CounterStream rng(seed);
  // Control variate sum_k |v_k||X_k|, whose mean is ||v||_1 E|X| = ||v||_1 / C(p). The
  // difference |sum v_k X_k| - sum |v_k X_k| loses the single large jump that
  // dominates both terms, so it has finite variance and an honest standard error.
  const auto entries = v.entries();
  std::vector<double> diffs(trials);
  parallel_fill(diffs, workers, [&](std::size_t j) {
    double sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k] == 0.0) continue;
      const double term = entries[k] * sampler.draw(rng, k, j);
      sum += term;
      abs_sum += std::abs(term);
    }
    return std::abs(sum) - abs_sum;
  });
  StatResult mc = mean_estimate(diffs, seed);
  mc.estimate += p_norm(entries, 1.0) / constant;

  VerificationReport report;
  report.name = "norm-bound";
  report.lhs = v.norm();
  report.rhs = mc.estimate;
  report.rhs_err = mc.std_error;
  report.constant = constant;
  report.rhs_seed = seed;
  report.rhs_trials = trials;
  return finalize(report);
}

std::vector<TruncationPoint> lr_truncation_convergence(const CoefVector& v, double r,
                                                       std::span<const std::size_t> cutoffs, std::size_t trials,
                                                       std::uint64_t seed, Workers workers) {
  if (!(r > 0.0 && r < v.p())) throw std::domain_error("lr_truncation_convergence: requires 0 < r < p");
  if (trials == 0) throw std::invalid_argument("lr_truncation_convergence: trials must be positive");
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end()))
    throw std::invalid_argument("lr_truncation_convergence: cutoffs must be ascending");
  if (!cutoffs.empty() && cutoffs.back() > v.size())
    throw std::invalid_argument("lr_truncation_convergence: cutoff beyond the vector length");

  const StableSampler sampler(unit_law(v.p()));
  const CounterStream rng(seed);
  const auto entries = v.entries();
  const std::size_t count = cutoffs.size();
  // powered[c * trials + j] = |sum_{k >= cutoffs[c]} v_k X_{jk}|^r
  std::vector<double> powered(count * trials);
  parallel_chunks(trials, 64, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      double tail = 0.0;
      std::size_t next = count;  // cutoffs are consumed from the largest down
      std::size_t k = entries.size();
      while (true) {
        while (next > 0 && cutoffs[next - 1] == k) {
          --next;
          powered[next * trials + j] = std::pow(std::abs(tail), r);
        }
        if (k == 0 || next == 0) break;
        --k;
        if (entries[k] != 0.0) tail += entries[k] * sampler.draw(rng, k, j);
      }
    }
  });

  std::vector<TruncationPoint> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::span<const double> slice(powered.data() + c * trials, trials);
    out.push_back({cutoffs[c], power_mean_estimate(slice, r, 1.0, seed)});
  }
  return out;
}

bool nonincreasing_within(std::span<const TruncationPoint> points, double k) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& prev = points[i - 1].error;
    const auto& cur = points[i].error;
    if (cur.estimate > prev.estimate + k * std::hypot(prev.std_error, cur.std_error)) return false;
  }
  return true;
}

}  // namespace stablecx
