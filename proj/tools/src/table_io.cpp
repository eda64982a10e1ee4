#include "stablecx/cli/table_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stablecx::cli {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw std::invalid_argument("table: " + what); }

std::size_t read_count(const json& doc, const char* key) {
  if (!doc.contains(key)) invalid(std::string("missing field '") + key + "'");
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) invalid(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

double read_real(const json& v, const std::string& where) {
  if (!v.is_number()) invalid(where + " must be a number");
  return v.get<double>();
}

const json& read_array(const json& v, std::size_t length, const std::string& where) {
  if (!v.is_array()) invalid(where + " must be an array");
  if (v.size() != length) invalid(where + " must have " + std::to_string(length) + " entries, found " +
                                  std::to_string(v.size()));
  return v;
}

}  // namespace

LoadedTable parse_table(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(std::string("not valid JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) invalid("document must be a JSON object");
  const std::size_t n = read_count(doc, "n");
  const std::size_t m = read_count(doc, "m");
  const std::size_t K = read_count(doc, "K");
  if (!doc.contains("p")) invalid("missing field 'p'");
  const double p = read_real(doc.at("p"), "'p'");
  if (!doc.contains("psi")) invalid("missing field 'psi'");
  if (!doc.contains("phi")) invalid("missing field 'phi'");

  std::vector<double> psi;
  psi.reserve(n * m);
  const json& psi_rows = read_array(doc.at("psi"), n, "psi");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "psi[" + std::to_string(i) + "]";
    const json& row = read_array(psi_rows[i], m, where);
    for (std::size_t s = 0; s < m; ++s) psi.push_back(read_real(row[s], where + "[" + std::to_string(s) + "]"));
  }
  std::vector<double> phi;
  phi.reserve(n * K * m);
  const json& phi_rows = read_array(doc.at("phi"), n, "phi");
  for (std::size_t i = 0; i < n; ++i) {
    const json& slab = read_array(phi_rows[i], K, "phi[" + std::to_string(i) + "]");
    for (std::size_t k = 0; k < K; ++k) {
      const std::string where = "phi[" + std::to_string(i) + "][" + std::to_string(k) + "]";
      const json& row = read_array(slab[k], m, where);
      for (std::size_t s = 0; s < m; ++s) phi.push_back(read_real(row[s], where + "[" + std::to_string(s) + "]"));
    }
  }
  std::optional<std::vector<double>> offset;
  if (doc.contains("offset")) {
    std::vector<double> f;
    const json& row = read_array(doc.at("offset"), m, "offset");
    for (std::size_t s = 0; s < m; ++s) f.push_back(read_real(row[s], "offset[" + std::to_string(s) + "]"));
    offset = std::move(f);
  }
  try {
    return {FunctionClassTable(RealTable(n, m, std::move(psi)), std::move(phi), K, p), std::move(offset)};
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
}

LoadedTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("table: cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_table(buffer.str());
}

std::string table_to_json(const FunctionClassTable& table, const std::optional<std::vector<double>>& offset) {
  nlohmann::ordered_json doc;
  doc["n"] = table.n();
  doc["m"] = table.m();
  doc["K"] = table.K();
  doc["p"] = table.p();
  auto psi = nlohmann::ordered_json::array();
  auto phi = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < table.n(); ++i) {
    const auto row = table.psi().row(i);
    psi.push_back(std::vector<double>(row.begin(), row.end()));
    auto slab = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < table.K(); ++k) {
      std::vector<double> cols(table.m());
      for (std::size_t s = 0; s < table.m(); ++s) cols[s] = table.phi(i, k, s);
      slab.push_back(cols);
    }
    phi.push_back(slab);
  }
  doc["psi"] = psi;
  doc["phi"] = phi;
  if (offset) doc["offset"] = *offset;
  return doc.dump(2) + "\n";
}

}  // namespace stablecx::cli
