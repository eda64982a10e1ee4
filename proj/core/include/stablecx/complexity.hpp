#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stablecx/parallel.hpp"
#include "stablecx/random.hpp"
#include "stablecx/report.hpp"
#include "stablecx/stable.hpp"
#include "stablecx/stats.hpp"

namespace stablecx {

/// Dense row-major real matrix.
class RealTable {
 public:
  RealTable() = default;
  RealTable(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws std::invalid_argument if data.size() != rows * cols.
  RealTable(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const RealTable&, const RealTable&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A finite hypothesis class S = {0, ..., m-1} evaluated on n points: scalar
/// outputs psi_i(s) and K-dimensional features phi_i(s)_k.
class FunctionClassTable {
 public:
  /// psi is n x m. phi is row-major [i][k][s] with n * K * m entries.
  /// Throws std::invalid_argument on shape mismatch, non-finite entries,
  /// m == 0, K == 0, or p outside (1, 2].
  FunctionClassTable(RealTable psi, std::vector<double> phi, std::size_t K, double p);

  std::size_t n() const noexcept { return psi_.rows(); }
  std::size_t m() const noexcept { return psi_.cols(); }
  std::size_t K() const noexcept { return K_; }
  double p() const noexcept { return p_; }
  const RealTable& psi() const noexcept { return psi_; }
  double psi(std::size_t i, std::size_t s) const noexcept { return psi_(i, s); }
  double phi(std::size_t i, std::size_t k, std::size_t s) const noexcept { return phi_[(i * K_ + k) * m() + s]; }
  std::span<const double> phi_data() const noexcept { return phi_; }

  friend bool operator==(const FunctionClassTable&, const FunctionClassTable&) = default;

 private:
  RealTable psi_;
  std::vector<double> phi_;
  std::size_t K_;
  double p_;
};

struct LipschitzViolation {
  std::size_t i;
  std::size_t s;
  std::size_t s2;
  double gap;  // psi_i(s) - psi_i(s2) - ||phi_i(s) - phi_i(s2)||_p, positive
};

/// Full pairwise scan of psi_i(s) - psi_i(s') <= ||phi_i(s) - phi_i(s')||_p.
/// Gaps below 1e-12 (1 + |psi_i(s)| + |psi_i(s')|) are treated as rounding.
std::vector<LipschitzViolation> check_lipschitz(const FunctionClassTable& table);

/// Largest n accepted by exhaustive sign enumeration.
inline constexpr std::size_t kMaxExactRows = 22;

/// 2^-n sum over eps in {-1,1}^n of max_s sum_i eps_i values(i, s).
///
/// Enumerates every sign vector for n <= 22. Tables whose rows are all equal
/// are handled for any n by summing over the number of +1 signs. Other tables
/// with n > 22 throw std::domain_error (use rademacher_complexity_mc).
double rademacher_complexity_exact(const RealTable& values, Workers workers = {});

/// Monte Carlo version with one sign vector per trial; eps_i of trial j is
/// bit i % 128 of CounterStream(seed).words(i / 128, j).
StatResult rademacher_complexity_mc(const RealTable& values, std::size_t trials, std::uint64_t seed,
                                    Workers workers = {});

/// E max_s sum_{i,k} X_ik phi_i(s)_k with X_ik ~ params drawn at stream i K + k,
/// index j for trial j. Standard error from 100 batch means.
StatResult stable_complexity_mc(const FunctionClassTable& table, const StableParams& params, std::size_t trials,
                                std::uint64_t seed, Workers workers = {});

/// Single-index inequality with offset:
/// (max_s psi(s)+f(s) + max_s -psi(s)+f(s)) / 2 <= E max_s (C(p) sum_k X_k phi_k(s) + f(s)).
/// phi is K x m. Throws std::invalid_argument if the Lipschitz coupling fails.
VerificationReport verify_lemma_instance(std::span<const double> psi, const RealTable& phi,
                                         std::span<const double> f, double p, std::size_t trials,
                                         std::uint64_t seed, Workers workers = {});

/// Rademacher complexity of psi (exact) against C(p) times the unit-scale
/// p-stable complexity of phi (Monte Carlo). Requires 1 < p < 2 and n <= 22.
VerificationReport verify_vector_contraction(const FunctionClassTable& table, std::size_t trials, std::uint64_t seed,
                                             Workers workers = {});

/// Continuous piecewise-linear map through (knots[j], values[j]), extended
/// linearly outside the knots with the given slopes.
class PiecewiseLinear {
 public:
  /// Knots strictly increasing, same length as values, at least one knot.
  PiecewiseLinear(std::vector<double> knots, std::vector<double> values, double left_slope, double right_slope);

  static PiecewiseLinear identity();
  static PiecewiseLinear absolute();
  static PiecewiseLinear clamp(double lo, double hi);
  /// Knots on a uniform grid over [lo, hi] with slopes uniform in [-1, 1].
  static PiecewiseLinear random(SequentialRng& rng, double lo = -4.0, double hi = 4.0, std::size_t pieces = 16);

  double operator()(double x) const noexcept;
  /// Largest absolute slope.
  double lipschitz_constant() const noexcept;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double left_slope_;
  double right_slope_;
};

/// E max_s sum_i eps_i h_i(f(i, s)) <= L E max_s sum_i eps_i f(i, s), both
/// sides by enumeration. Throws std::invalid_argument if some pair of entries
/// in row i gives |h_i(x) - h_i(y)| > L |x - y| beyond rounding.
VerificationReport verify_scalar_contraction(const RealTable& f_values, std::span<const PiecewiseLinear> h,
                                             double lipschitz, Workers workers = {});

/// p = 2 with doubly indexed signs: exact Rademacher complexity of psi against
/// sqrt(2) E max_s sum_{i,k} eps_ik phi_i(s)_k. Sign eps_ik of trial j uses the
/// flat index q = i K + k: bit q % 128 of words(q / 128, j).
VerificationReport verify_corollary_p2(const FunctionClassTable& table, std::size_t trials, std::uint64_t seed,
                                       Workers workers = {});

/// Random valid table: phi uniform on [-1, 1]; psi_i(s) = h_i(g_i(phi_i(s)))
/// where g_i is either the p-norm or a linear form with dual norm below one,
/// and h_i is PiecewiseLinear::random.
FunctionClassTable generate_instance(std::size_t n, std::size_t m, std::size_t K, double p, std::uint64_t seed);

}  // namespace stablecx
