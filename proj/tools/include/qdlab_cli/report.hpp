#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qdlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportFormatVersion = 1;

/// Header, one table of rows, summary. Rows are positional against `columns`.
struct Report {
  Json header = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json summary = Json::object();
  bool gates_passed = true;

  void add_row(std::vector<Json> row);
};

enum class Format { Csv, Json };

Format parse_format(const std::string& name);
void write_report(const Report& report, Format format, std::ostream& os);

/// Wilson score interval for a binomial proportion.
struct Interval {
  double low;
  double high;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// Running mean / standard error in a fixed summation order.
class MeanAccumulator {
 public:
  void add(double x);
  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // unbiased
  double standard_error() const noexcept;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace qdlab::cli
