#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace wpvol {

// Raised when a computation would exceed a configured resource limit.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::string limit, const std::string& detail)
      : std::runtime_error("budget exceeded (" + limit + "): " + detail), limit_(std::move(limit)) {}
  const std::string& limit() const { return limit_; }

 private:
  std::string limit_;
};

// Conflicting cache values, failed homogeneity, or a corrupt cache file.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Budget {
  int max_g = 10;
  int max_n = 6;
  std::size_t max_cache_entries = 10'000'000;
  std::optional<std::chrono::steady_clock::duration> max_wall;

  // Throws BudgetError when a top-level request for (g, n) is not admitted.
  void admit(int g, int n) const;
};

// Wall-clock deadline derived from Budget::max_wall; inactive when unset.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(const Budget& budget);
  void check() const;

 private:
  std::optional<std::chrono::steady_clock::time_point> until_;
};

}  // namespace wpvol
