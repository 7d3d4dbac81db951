#pragma once

// Memoized psi-class intersection numbers [tau_{d_1} ... tau_{d_n}]_{g,n},
// normalized so that V_{g,n}(2x) = sum_d [tau_d]_{g,n} prod x_i^{2d_i}/(2d_i+1)!.

#include "wpvol/budget.hpp"
#include "wpvol/scalar.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace wpvol {

struct IndexKey {
  int g = 0;
  int n = 0;
  std::vector<int> d;  // sorted descending, length n

  int dimension() const { return 3 * g - 3 + n; }
  int index_sum() const;
  // pi^2-degree carried by the intersection number: dimension - |d|.
  int degree() const { return dimension() - index_sum(); }

  friend bool operator==(const IndexKey&, const IndexKey&) = default;
  friend auto operator<=>(const IndexKey&, const IndexKey&) = default;

  nlohmann::json to_json() const;
  static IndexKey from_json(const nlohmann::json& j);
  std::string to_string() const;
};

struct IndexKeyHash {
  std::size_t operator()(const IndexKey& k) const noexcept;
};

enum class KeyClass {
  kKey,            // generic hyperbolic key, computed by the recursion
  kZero,           // negative index or |d| > 3g-3+n
  kBase03,         // (0,3): the only value is [tau_0^3] = 1
  kBase11,         // (1,1): [tau_0] = pi^2/12, [tau_1] = 1/2
  kNonhyperbolic,  // 2g-2+n <= 0
};

struct Classified {
  KeyClass kind = KeyClass::kZero;
  IndexKey key;  // canonical key; meaningful for kKey and the base cases
};

// Sorts d descending and classifies (g, n, d). Throws std::invalid_argument
// when d.size() != n or g, n are negative.
Classified canonical_key(int g, int n, std::span<const int> d);

/// Concurrent memo table from IndexKey to exact values. Every insert is
/// checked: the value must be a positive homogeneous element of pi^2-degree
/// key.degree(), and re-inserting a key with a different value throws
/// IntegrityError.
class MemoCache {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit MemoCache(std::size_t max_entries = 10'000'000) : max_entries_(max_entries) {}

  // Stable pointer to the stored value, or nullptr.
  const Pi2Scalar* find(const IndexKey& key) const;
  const Pi2Scalar& insert(const IndexKey& key, Pi2Scalar value);

  std::size_t size() const;
  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  void set_max_entries(std::size_t n) { max_entries_ = n; }

  // Entries in lexicographic key order.
  std::vector<std::pair<IndexKey, Pi2Scalar>> sorted_entries() const;

  // Newline-delimited JSON: {"key": {g, n, d}, "value": {...}, "schema": 1}.
  void save(const std::filesystem::path& path) const;
  // Inserts every record through the checked insert path; returns the
  // number of records read. Schema mismatches throw IntegrityError.
  std::size_t load(const std::filesystem::path& path);

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<IndexKey, Pi2Scalar, IndexKeyHash> table_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
  std::size_t max_entries_;
};

/// Mirzakhani's recursion over a shared cache. The largest index always
/// plays the distinguished role of d_1; tau() is pure given the cache.
class IntersectionEngine {
 public:
  explicit IntersectionEngine(std::shared_ptr<MemoCache> cache = std::make_shared<MemoCache>(),
                              Budget budget = {});

  Pi2Scalar tau(int g, int n, std::span<const int> d) const;
  Pi2Scalar tau(int g, std::initializer_list<int> d) const {
    std::vector<int> v(d);
    return tau(g, static_cast<int>(v.size()), v);
  }
  // tau(g,n,d) / tau(g,n,0...0) as an enclosure.
  Interval tau_ratio_interval(int g, int n, std::span<const int> d,
                              mpfr_prec_t prec = working_precision()) const;
  double tau_ratio(int g, int n, std::span<const int> d) const;

  // One unmemoized level of the recursion with d[0] as the distinguished
  // index and d[1..] in the given order; children come from the cache.
  // Used to verify that the choice of distinguished index is immaterial.
  Pi2Scalar expand(int g, std::span<const int> d) const;

  const std::shared_ptr<MemoCache>& cache() const { return cache_; }
  const Budget& budget() const { return budget_; }
  void set_deadline(Deadline d) { deadline_ = d; }

 private:
  const Pi2Scalar& lookup(int g, std::vector<int>& d) const;  // d is consumed (sorted in place)
  const Pi2Scalar& compute(const IndexKey& key) const;

  std::shared_ptr<MemoCache> cache_;
  Budget budget_;
  Deadline deadline_;
};

}  // namespace wpvol
