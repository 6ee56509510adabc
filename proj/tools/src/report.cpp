#include "qdlab_cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qdlab::cli {

void Report::add_row(std::vector<Json> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width differs from column count");
  rows.push_back(std::move(row));
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("format must be csv or json, got '" + name + "'");
}

namespace {

std::string plain(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_cell(const Json& v) {
  std::string s = plain(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_csv(const Report& r, std::ostream& os) {
  for (const auto& [key, value] : r.header.items()) {
    if (value.is_object()) {
      for (const auto& [k2, v2] : value.items()) os << "# " << key << '.' << k2 << '=' << plain(v2) << '\n';
    } else {
      os << "# " << key << '=' << plain(value) << '\n';
    }
  }
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  for (const auto& [key, value] : r.summary.items()) os << "# summary." << key << '=' << plain(value) << '\n';
}

void write_json(const Report& r, std::ostream& os) {
  Json doc;
  doc["header"] = r.header;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = r.summary;
  os << doc.dump(2) << '\n';
}

}  // namespace

void write_report(const Report& report, Format format, std::ostream& os) {
  if (format == Format::Csv) {
    write_csv(report, os);
  } else {
    write_json(report, os);
  }
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

void MeanAccumulator::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

double MeanAccumulator::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double MeanAccumulator::standard_error() const noexcept {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

}  // namespace qdlab::cli
