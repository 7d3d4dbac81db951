#pragma once

// Tabular report emission shared by sweeps, expectation tables and the CLI.

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wpvol {

// 15 significant digits, "%.15g" style; non-finite values print as inf/nan.
std::string format_double(double x);
// "3;1;0" so index vectors survive inside a CSV cell.
std::string format_index(std::span<const int> d);
std::string format_reals(std::span<const double> x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_csv() const;
  nlohmann::json to_json() const;  // array of objects keyed by column
};

/// Result of a sweep: a row per record in lexicographic key order, summary
/// fields (estimates, witnesses, flags) and an overall verdict.
struct SweepReport {
  std::string name;
  bool passed = true;
  std::vector<std::pair<std::string, std::string>> summary;
  Table table;

  void note(std::string key, std::string value) { summary.emplace_back(std::move(key), std::move(value)); }
  std::string to_csv() const;  // summary as leading "# key: value" lines
  nlohmann::json to_json() const;
};

}  // namespace wpvol
