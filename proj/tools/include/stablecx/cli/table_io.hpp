#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stablecx/complexity.hpp"

namespace stablecx::cli {

/// A FunctionClassTable read from JSON, with the optional per-hypothesis
/// offset used by the single-index lemma.
struct LoadedTable {
  FunctionClassTable table;
  std::optional<std::vector<double>> offset;
};

/// Parses {n, m, K, p, psi: [n][m], phi: [n][K][m], offset?: [m]}.
/// Throws std::invalid_argument naming the first violated invariant.
LoadedTable parse_table(const std::string& text);
LoadedTable load_table(const std::string& path);

std::string table_to_json(const FunctionClassTable& table, const std::optional<std::vector<double>>& offset = {});

}  // namespace stablecx::cli
