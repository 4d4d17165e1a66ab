#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rpz {

using ojson = nlohmann::ordered_json;

/// Pass/fail check on one report statistic.
struct Gate {
  std::string name;
  double value;
  std::string comparison;  // "<=", ">=", "<", ">"
  double threshold;
  bool passed;
};

Gate make_gate(std::string name, double value, std::string comparison, double threshold);

/// Seeded Monte Carlo summary: config echo, per-trial table, aggregates and gates.
struct ExperimentReport {
  std::string experiment;
  ojson config = ojson::object();
  std::vector<std::string> columns;
  std::vector<ojson> rows;  // each row is an array aligned with columns
  ojson summary = ojson::object();
  std::vector<Gate> gates;
  std::vector<std::string> warnings;

  bool passed() const;
};

/// Shortest decimal string that parses back to the same double. Infinities
/// are "inf" / "-inf"; NaN is rejected.
std::string format_double(double v);

/// Replaces non-finite numbers by the strings "inf" / "-inf" so JSON output is
/// valid and lossless.
ojson sanitize(ojson j);

std::string to_json_string(const ExperimentReport& r);

/// Header comment lines (config, summary, gates, warnings) followed by the
/// per-trial table.
std::string to_csv(const ExperimentReport& r);

/// Version string embedded in every report.
std::string software_version();

}  // namespace rpz
