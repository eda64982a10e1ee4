#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace stablecx {

enum class VerdictRule {
  /// lhs <= constant * rhs + 3 (lhs_err + constant * rhs_err)
  kScaledBound,
  /// rhs already carries the constant: lhs <= rhs + 3 (lhs_err + rhs_err)
  kConstantInsideRhs,
  /// p_value > p_threshold
  kKsPValue,
};

/// Outcome of one inequality or distributional check. `pass` is always the
/// value of evaluate_verdict on the other fields.
struct VerificationReport {
  std::string name;
  VerdictRule rule = VerdictRule::kScaledBound;
  double lhs = 0.0;
  double lhs_err = 0.0;
  double rhs = 0.0;
  double rhs_err = 0.0;
  double constant = 1.0;
  std::optional<double> statistic;
  std::optional<double> p_value;
  double p_threshold = 0.01;
  std::uint64_t lhs_seed = 0;
  std::uint64_t rhs_seed = 0;
  std::size_t lhs_trials = 0;  // 0 means computed exactly
  std::size_t rhs_trials = 0;
  bool pass = false;
};

/// Relative slack for floating-point ties (e.g. both sides exactly equal in
/// exact arithmetic but rounded differently).
inline constexpr double kVerdictRoundingSlack = 1e-12;

bool evaluate_verdict(const VerificationReport& report);

/// Sets `pass` from the other fields and returns the report.
VerificationReport finalize(VerificationReport report);

}  // namespace stablecx
