#pragma once

// The acceptance suite shared by `verify` and the acceptance test binary.

#include "wpvol/intersect.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wpvol {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<std::pair<std::string, std::string>> facts;  // deterministic only
  double seconds = 0.0;                                    // excluded from reports

  void fact(std::string key, std::string value) { facts.emplace_back(std::move(key), std::move(value)); }
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;

  bool passed() const;
  std::vector<int> failing() const;
  // One "[PASS] <id> <title>: k=v; ..." line per criterion, then a verdict line.
  std::string to_text() const;
  nlohmann::ordered_json to_json() const;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  // Where the warm-cache run of criterion 10 stores its cache file.
  std::optional<std::filesystem::path> scratch_dir;
};

// all, base, bounds, symmetry, crossover, trace, determinism
const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for an unknown suite.
std::vector<int> suite_criteria(const std::string& suite);

CriterionResult run_criterion(int id, const IntersectionEngine& engine, const AcceptanceOptions& opt);

// Runs the suite's criteria in order on the given engine. Criterion 10
// repeats criteria 1-9 on a cold and a warm cache and compares the reports.
AcceptanceReport run_suite(const std::string& suite, const IntersectionEngine& engine,
                           const AcceptanceOptions& opt = {});

}  // namespace wpvol
