#include "stablecx/report.hpp"

#include <algorithm>
#include <cmath>

namespace stablecx {

bool evaluate_verdict(const VerificationReport& report) {
  switch (report.rule) {
    case VerdictRule::kKsPValue:
      return report.p_value.has_value() && *report.p_value > report.p_threshold;
    case VerdictRule::kScaledBound:
    case VerdictRule::kConstantInsideRhs: {
      const bool inside = report.rule == VerdictRule::kConstantInsideRhs;
      const double scale = inside ? 1.0 : report.constant;
      const double bound = scale * report.rhs;
      const double margin = 3.0 * (report.lhs_err + scale * report.rhs_err);
      const double slack = kVerdictRoundingSlack * std::max({1.0, std::abs(report.lhs), std::abs(bound)});
      return report.lhs <= bound + margin + slack;
    }
  }
  return false;
}

VerificationReport finalize(VerificationReport report) {
  report.pass = evaluate_verdict(report);
  return report;
}

}  // namespace stablecx
