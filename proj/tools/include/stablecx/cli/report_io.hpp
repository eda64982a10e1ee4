#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stablecx/report.hpp"

namespace stablecx::cli {

/// Everything a subcommand writes. Serialization is a pure function of these
/// fields, so equal runs give byte-identical output.
struct Report {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::optional<VerificationReport> check;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::optional<bool> verdict;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::vector<std::pair<double, double>> points;
};

/// Shortest round-trip decimal form.
std::string format_number(double x);

std::string to_json(const Report& report);
/// Header row then data rows. Reports with a table print the table; the
/// others print one line with the verification fields.
std::string to_csv(const Report& report);
std::string points_csv(const Report& report);

}  // namespace stablecx::cli
