#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stablecx::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). The report goes to
/// --output when given, otherwise to `out`; diagnostics go to `err`.
/// Returns 0 on pass, 1 on a failed verification, 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablecx::cli
