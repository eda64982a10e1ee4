#include "stablecx/counterexample.hpp"

#include <cmath>
#include <stdexcept>

#include "stablecx/complexity.hpp"
#include "stablecx/empirical_sums.hpp"
#include "stablecx/random.hpp"

namespace stablecx {

double root_p(double n, double p) {
  if (!(n >= 0.0) || !(p > 0.0)) throw std::domain_error("root_p: requires n >= 0 and p > 0");
  if (n == 0.0 || p == 1.0) return n;
  double r = std::pow(n, 1.0 / p);
  // One Newton step on r^p = n removes the rounding of 1/p.
  r -= (std::pow(r, p) - n) / (p * std::pow(r, p - 1.0));
  return r;
}

CounterexampleRow counterexample_exact(std::size_t n, double p) {
  if (n == 0) throw std::domain_error("counterexample_exact: n must be at least 1");
  if (!(p >= 1.0 && p <= 2.0)) throw std::domain_error("counterexample_exact: p must lie in [1, 2]");
  const double lhs = static_cast<double>(n) / 2.0;
  const double rhs = root_p(static_cast<double>(n), p);
  return {n, p, lhs, rhs, lhs / rhs};
}

CounterexampleMc counterexample_mc(std::size_t n, double p, std::size_t trials, std::uint64_t seed,
                                   Workers workers) {
  if (n == 0 || n > 30) throw std::domain_error("counterexample_mc: n must lie in [1, 30]");
  if (!(p >= 1.0 && p <= 2.0)) throw std::domain_error("counterexample_mc: p must lie in [1, 2]");
  if (trials == 0) throw std::invalid_argument("counterexample_mc: trials must be positive");
  const double rhs_exact = root_p(static_cast<double>(n), p);
  const CounterStream rng(seed);
  std::vector<double> lhs(trials);
  std::vector<double> deviation(trials);
  parallel_chunks(trials, 1024, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> eps(n);
    std::vector<double> t(n * n);
    std::vector<double> column(n);
    for (std::size_t j = begin; j < end; ++j) {
      const std::uint64_t bits = rng.words(0, j).first;
      for (std::size_t i = 0; i < n; ++i) eps[i] = ((bits >> i) & 1U) != 0 ? 1.0 : -1.0;
      std::fill(t.begin(), t.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) t[i * n + i] = eps[i] > 0.0 ? 1.0 : 0.0;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < n; ++r) column[r] = t[r * n + i];  // T_eps e_i
        sum += eps[i] * p_norm(column, p);
      }
      lhs[j] = sum;
      deviation[j] = std::abs(p_norm(eps, p) - rhs_exact);
    }
  });
  double worst = 0.0;
  for (double d : deviation) worst = std::max(worst, d);
  return {mean_estimate(lhs, seed), rhs_exact, worst};
}

DivergenceTable divergence_table(std::span<const std::size_t> ns, double p) {
  DivergenceTable out{{}, true, p > 1.0};
  for (std::size_t j = 0; j < ns.size(); ++j) {
    if (j > 0 && ns[j] <= ns[j - 1]) throw std::invalid_argument("divergence_table: ns must strictly increase");
    out.rows.push_back(counterexample_exact(ns[j], p));
    if (j > 0 && !(out.rows[j].ratio > out.rows[j - 1].ratio)) out.strictly_increasing = false;
  }
  return out;
}

SphereCase sphere_family_case(std::size_t n, Workers workers) {
  if (n == 0) throw std::domain_error("sphere_family_case: n must be at least 1");
  const RealTable ones(n, 2 * n, 1.0);
  const std::vector<double> all_plus(n, 1.0);
  return {rademacher_complexity_exact(ones, workers), p_norm(all_plus, 1.0)};
}

}  // namespace stablecx
