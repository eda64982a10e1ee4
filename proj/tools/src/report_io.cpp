#include "stablecx/cli/report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace stablecx::cli {
namespace {

using nlohmann::ordered_json;

ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_json(const Report& report) {
  ordered_json doc;
  doc["command"] = report.command;
  doc["config"] = report.config;
  if (report.check) {
    const auto& c = *report.check;
    if (c.rule != VerdictRule::kKsPValue) {
      doc["lhs"] = number(c.lhs);
      doc["lhs_err"] = number(c.lhs_err);
      doc["rhs"] = number(c.rhs);
      doc["rhs_err"] = number(c.rhs_err);
      doc["constant"] = number(c.constant);
    }
    if (c.statistic) doc["statistic"] = number(*c.statistic);
    if (c.p_value) doc["p_value"] = number(*c.p_value);
  }
  if (report.verdict) doc["verdict"] = *report.verdict ? "pass" : "fail";
  if (report.seed) doc["seed"] = *report.seed;
  if (report.trials) doc["trials"] = *report.trials;
  if (!report.columns.empty()) {
    auto rows = ordered_json::array();
    for (const auto& row : report.rows) {
      ordered_json obj;
      for (std::size_t c = 0; c < report.columns.size() && c < row.size(); ++c) obj[report.columns[c]] = number(row[c]);
      rows.push_back(obj);
    }
    doc["rows"] = rows;
  }
  return doc.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  if (!report.columns.empty()) {
    for (std::size_t c = 0; c < report.columns.size(); ++c) out << (c ? "," : "") << report.columns[c];
    out << "\n";
    for (const auto& row : report.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
      out << "\n";
    }
    return out.str();
  }
  out << "command,lhs,lhs_err,rhs,rhs_err,constant,statistic,p_value,verdict,seed,trials\n";
  out << report.command;
  auto opt = [&](std::optional<double> x) { out << "," << (x ? format_number(*x) : ""); };
  if (report.check) {
    const auto& c = *report.check;
    if (c.rule != VerdictRule::kKsPValue) {
      opt(c.lhs);
      opt(c.lhs_err);
      opt(c.rhs);
      opt(c.rhs_err);
      opt(c.constant);
    } else {
      out << ",,,,,";
    }
    opt(c.statistic);
    opt(c.p_value);
  } else {
    out << ",,,,,,,";
  }
  out << "," << (report.verdict ? (*report.verdict ? "pass" : "fail") : "");
  out << "," << (report.seed ? std::to_string(*report.seed) : "");
  out << "," << (report.trials ? std::to_string(*report.trials) : "");
  out << "\n";
  return out.str();
}

std::string points_csv(const Report& report) {
  std::ostringstream out;
  out << "x,y\n";
  for (const auto& [x, y] : report.points) out << format_number(x) << "," << format_number(y) << "\n";
  return out.str();
}

}  // namespace stablecx::cli
