#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stablecx/parallel.hpp"
#include "stablecx/stats.hpp"

namespace stablecx {

/// One row of the l_p counter-example: with T_eps the coordinate projection
/// onto {i : eps_i = 1} and x_i = e_i, the left side E sum_i eps_i ||T_eps e_i||_p
/// equals n/2 while E ||sum_i eps_i e_i||_p = n^(1/p).
struct CounterexampleRow {
  std::size_t n;
  double p;
  double lhs;        // n / 2
  double rhs_bound;  // n^(1/p)
  double ratio;      // lhs / rhs_bound
};

/// n^(1/p), correctly rounded whenever the root is an exact double (64^(2/3) == 16).
double root_p(double n, double p);

/// Requires n >= 1 and 1 <= p <= 2.
CounterexampleRow counterexample_exact(std::size_t n, double p);

struct CounterexampleMc {
  StatResult lhs;
  double rhs_exact;
  /// Largest |computed ||sum eps_i e_i||_p - n^(1/p)| over all simulated sign vectors.
  double max_rhs_deviation;
};

/// Simulates eps, forms T_eps as a dense n x n matrix and evaluates both
/// sides. Sign eps_i of trial j is bit i of words(0, j). Requires 1 <= n <= 30.
CounterexampleMc counterexample_mc(std::size_t n, double p, std::size_t trials, std::uint64_t seed,
                                   Workers workers = {});

struct DivergenceTable {
  std::vector<CounterexampleRow> rows;
  bool strictly_increasing;  // ratio column
  bool divergent;            // ratio grows like n^(1 - 1/p); false at p = 1
};

/// Rows for strictly ascending ns.
DivergenceTable divergence_table(std::span<const std::size_t> ns, double p);

struct SphereCase {
  double lhs;        // E sup_s sum_i eps_i psi_i(s) with psi = 1 on the l_1 unit sphere
  double rhs_bound;  // ||sum_i eps_i e_i||_1
};

/// The p = 1 family: hypotheses +-e_1, ..., +-e_n on the l_1 unit sphere,
/// psi_i(s) = ||s||_1 = 1. Left side by exact enumeration of the n x 2n table.
SphereCase sphere_family_case(std::size_t n, Workers workers = {});

}  // namespace stablecx
