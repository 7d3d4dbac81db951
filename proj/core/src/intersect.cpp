#include "wpvol/intersect.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>

namespace wpvol {

int IndexKey::index_sum() const { return std::accumulate(d.begin(), d.end(), 0); }

nlohmann::json IndexKey::to_json() const { return {{"g", g}, {"n", n}, {"d", d}}; }

IndexKey IndexKey::from_json(const nlohmann::json& j) {
  IndexKey k;
  k.g = j.at("g").get<int>();
  k.n = j.at("n").get<int>();
  k.d = j.at("d").get<std::vector<int>>();
  if (k.g < 0 || k.n < 1 || static_cast<int>(k.d.size()) != k.n) {
    throw IntegrityError("malformed key " + j.dump());
  }
  std::sort(k.d.begin(), k.d.end(), std::greater<>());
  return k;
}

std::string IndexKey::to_string() const {
  std::ostringstream os;
  os << "(g=" << g << ", n=" << n << ", d=[";
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << "])";
  return os.str();
}

std::size_t IndexKeyHash::operator()(const IndexKey& k) const noexcept {
  std::size_t h = static_cast<std::size_t>(k.g) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::size_t>(k.n);
  for (int v : k.d) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001B3ULL + 0x9E37;
  return h;
}

Classified canonical_key(int g, int n, std::span<const int> d) {
  if (g < 0 || n < 0) throw std::invalid_argument("canonical_key: g and n must be nonnegative");
  if (static_cast<int>(d.size()) != n) {
    throw std::invalid_argument("canonical_key: index vector has length " + std::to_string(d.size()) +
                                " but n = " + std::to_string(n));
  }
  Classified c;
  c.key.g = g;
  c.key.n = n;
  c.key.d.assign(d.begin(), d.end());
  std::sort(c.key.d.begin(), c.key.d.end(), std::greater<>());
  if (2 * g - 2 + n <= 0) {
    c.kind = KeyClass::kNonhyperbolic;
    return c;
  }
  if ((n > 0 && c.key.d.back() < 0) || c.key.index_sum() > c.key.dimension()) {
    c.kind = KeyClass::kZero;
    return c;
  }
  if (g == 0 && n == 3) {
    c.kind = KeyClass::kBase03;
  } else if (g == 1 && n == 1) {
    c.kind = KeyClass::kBase11;
  } else {
    c.kind = KeyClass::kKey;
  }
  return c;
}

// ---------------------------------------------------------------------------
// MemoCache

const Pi2Scalar* MemoCache::find(const IndexKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = table_.find(key);
  if (it == table_.end()) {
    misses_.fetch_add(1, std::memory_order_relaxed);
    return nullptr;
  }
  hits_.fetch_add(1, std::memory_order_relaxed);
  return &it->second;
}

const Pi2Scalar& MemoCache::insert(const IndexKey& key, Pi2Scalar value) {
  if (!value.is_homogeneous(key.degree()) || value.is_zero()) {
    throw IntegrityError("value " + value.to_string() + " for " + key.to_string() +
                         " is not a nonzero homogeneous element of pi^2-degree " +
                         std::to_string(key.degree()));
  }
  if (value.terms().front().second <= 0) {
    throw IntegrityError("nonpositive value " + value.to_string() + " for " + key.to_string());
  }
  std::unique_lock lock(mutex_);
  auto it = table_.find(key);
  if (it != table_.end()) {
    if (it->second != value) {
      throw IntegrityError("conflicting values for " + key.to_string() + ": " + it->second.to_string() +
                           " vs " + value.to_string());
    }
    return it->second;
  }
  if (table_.size() >= max_entries_) {
    throw BudgetError("max_cache_entries", std::to_string(max_entries_) + " entries");
  }
  return table_.emplace(key, std::move(value)).first->second;
}

std::size_t MemoCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

std::vector<std::pair<IndexKey, Pi2Scalar>> MemoCache::sorted_entries() const {
  std::vector<std::pair<IndexKey, Pi2Scalar>> out;
  {
    std::shared_lock lock(mutex_);
    out.assign(table_.begin(), table_.end());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void MemoCache::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write cache file " + path.string());
  for (const auto& [key, value] : sorted_entries()) {
    nlohmann::json rec{{"key", key.to_json()}, {"value", value.to_json()}, {"schema", kSchemaVersion}};
    os << rec.dump() << '\n';
  }
  if (!os) throw std::runtime_error("error while writing cache file " + path.string());
}

std::size_t MemoCache::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read cache file " + path.string());
  std::string line;
  std::size_t count = 0;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IntegrityError("cache line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!rec.contains("schema") || rec.at("schema") != kSchemaVersion) {
      throw IntegrityError("cache line " + std::to_string(line_no) + ": schema version mismatch (expected " +
                           std::to_string(kSchemaVersion) + ")");
    }
    try {
      insert(IndexKey::from_json(rec.at("key")), Pi2Scalar::from_json(rec.at("value")));
    } catch (const nlohmann::json::exception& e) {
      throw IntegrityError("cache line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw IntegrityError("cache line " + std::to_string(line_no) + ": " + e.what());
    }
    ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// IntersectionEngine

namespace {

const Pi2Scalar& zero_value() {
  static const Pi2Scalar z;
  return z;
}

const Pi2Scalar& base_value(const IndexKey& key) {
  static const Pi2Scalar one(Rational(1));
  static const Pi2Scalar tau0_11 = Pi2Scalar::monomial(1, Rational(1, 12));
  static const Pi2Scalar tau1_11(Rational(1, 2));
  if (key.g == 0) return one;  // (0,3): only [0,0,0] reaches here
  return key.d[0] == 0 ? tau0_11 : tau1_11;
}

// Distinct values of a multiset with their multiplicities.
std::vector<std::pair<int, int>> group_counts(std::span<const int> values) {
  std::vector<int> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::pair<int, int>> out;
  for (int v : sorted) {
    if (!out.empty() && out.back().first == v) {
      ++out.back().second;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

}  // namespace

IntersectionEngine::IntersectionEngine(std::shared_ptr<MemoCache> cache, Budget budget)
    : cache_(std::move(cache)), budget_(budget), deadline_(budget) {
  if (!cache_) cache_ = std::make_shared<MemoCache>(budget_.max_cache_entries);
}

const Pi2Scalar& IntersectionEngine::lookup(int g, std::vector<int>& d) const {
  const int n = static_cast<int>(d.size());
  if (g < 0 || 2 * g - 2 + n <= 0) return zero_value();
  int sum = 0;
  for (int v : d) {
    if (v < 0) return zero_value();
    sum += v;
  }
  if (sum > 3 * g - 3 + n) return zero_value();
  std::sort(d.begin(), d.end(), std::greater<>());
  IndexKey key{g, n, std::move(d)};
  if ((g == 0 && n == 3) || (g == 1 && n == 1)) return base_value(key);
  if (const Pi2Scalar* hit = cache_->find(key)) return *hit;
  return compute(key);
}

const Pi2Scalar& IntersectionEngine::compute(const IndexKey& key) const {
  deadline_.check();
  Pi2Scalar value = expand(key.g, key.d);
  return cache_->insert(key, std::move(value));
}

Pi2Scalar IntersectionEngine::expand(int g, std::span<const int> d) const {
  const int n = static_cast<int>(d.size());
  if (n < 1) throw std::invalid_argument("expand: need at least one index");
  const int d1 = d[0];
  const std::vector<int> rest(d.begin() + 1, d.end());
  const int dim = 3 * g - 3 + n;
  const int sum = std::accumulate(d.begin(), d.end(), 0);
  const int top = dim - sum;  // L runs over 0..top
  Pi2Scalar acc;
  if (top < 0) return acc;

  const auto groups = group_counts(rest);
  std::vector<int> child;

  // A-terms: merge d_1 with each d_j, j >= 2. Equal d_j give equal children.
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto [v, count] = groups[gi];
    const Rational coef(8 * (2 * v + 1) * count);
    for (int L = 0; L <= top; ++L) {
      child.clear();
      child.push_back(d1 + v + L - 1);
      bool skipped = false;
      for (int x : rest) {
        if (!skipped && x == v) {
          skipped = true;
          continue;
        }
        child.push_back(x);
      }
      const Pi2Scalar& c = lookup(g, child);
      if (c.is_zero()) continue;
      acc.add_product(coef, a_coeff(L), c);
    }
  }

  // B-term: cut along a non-separating curve, genus drops by one.
  if (g >= 1) {
    for (int L = 0; L <= top; ++L) {
      const int m = L + d1 - 2;
      if (m < 0) continue;
      const Pi2Scalar aL = a_coeff(L);
      for (int k1 = 0; 2 * k1 <= m; ++k1) {
        const int k2 = m - k1;
        child.assign({k1, k2});
        child.insert(child.end(), rest.begin(), rest.end());
        const Pi2Scalar& c = lookup(g - 1, child);
        if (c.is_zero()) continue;
        acc.add_product(Rational(k1 == k2 ? 16 : 32), aL, c);
      }
    }
  }

  // C-term: separating cuts. Ordered splits I | J of the remaining indices
  // are enumerated as sub-multisets weighted by binomial multiplicities.
  std::vector<int> take(groups.size(), 0);
  std::vector<int> left_idx;
  std::vector<int> right_idx;
  std::vector<const Pi2Scalar*> xs;
  std::vector<const Pi2Scalar*> ys;
  const std::function<void(std::size_t)> visit = [&](std::size_t pos) {
    if (pos < groups.size()) {
      for (int t = 0; t <= groups[pos].second; ++t) {
        take[pos] = t;
        visit(pos + 1);
      }
      return;
    }
    Integer mult(1);
    left_idx.clear();
    right_idx.clear();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      mult *= binomial(static_cast<unsigned>(groups[i].second), static_cast<unsigned>(take[i]));
      for (int t = 0; t < take[i]; ++t) left_idx.push_back(groups[i].first);
      for (int t = take[i]; t < groups[i].second; ++t) right_idx.push_back(groups[i].first);
    }
    const int n1 = static_cast<int>(left_idx.size()) + 1;
    const int n2 = static_cast<int>(right_idx.size()) + 1;
    const int s1 = std::accumulate(left_idx.begin(), left_idx.end(), 0);
    const int s2 = std::accumulate(right_idx.begin(), right_idx.end(), 0);
    const Rational coef(Integer(16) * mult);
    for (int g1 = 0; g1 <= g; ++g1) {
      const int g2 = g - g1;
      if (2 * g1 - 2 + n1 <= 0 || 2 * g2 - 2 + n2 <= 0) continue;
      const int k1max = 3 * g1 - 3 + n1 - s1;
      const int k2max = 3 * g2 - 3 + n2 - s2;
      if (k1max < 0 || k2max < 0) continue;
      xs.assign(static_cast<std::size_t>(k1max) + 1, nullptr);
      ys.assign(static_cast<std::size_t>(k2max) + 1, nullptr);
      for (int k = 0; k <= k1max; ++k) {
        child.assign(1, k);
        child.insert(child.end(), left_idx.begin(), left_idx.end());
        xs[static_cast<std::size_t>(k)] = &lookup(g1, child);
      }
      for (int k = 0; k <= k2max; ++k) {
        child.assign(1, k);
        child.insert(child.end(), right_idx.begin(), right_idx.end());
        ys[static_cast<std::size_t>(k)] = &lookup(g2, child);
      }
      for (int L = 0; L <= top; ++L) {
        const int m = L + d1 - 2;
        if (m < 0) continue;
        Pi2Scalar conv;
        for (int k1 = std::max(0, m - k2max); k1 <= std::min(m, k1max); ++k1) {
          conv.add_product(Rational(1), *xs[static_cast<std::size_t>(k1)],
                           *ys[static_cast<std::size_t>(m - k1)]);
        }
        if (!conv.is_zero()) acc.add_product(coef, a_coeff(L), conv);
      }
    }
  };
  visit(0);
  return acc;
}

Pi2Scalar IntersectionEngine::tau(int g, int n, std::span<const int> d) const {
  const Classified c = canonical_key(g, n, d);
  budget_.admit(g, n);
  switch (c.kind) {
    case KeyClass::kZero:
    case KeyClass::kNonhyperbolic:
      return Pi2Scalar();
    case KeyClass::kBase03:
    case KeyClass::kBase11:
      return base_value(c.key);
    case KeyClass::kKey:
      break;
  }
  if (const Pi2Scalar* hit = cache_->find(c.key)) return *hit;
  return compute(c.key);
}

Interval IntersectionEngine::tau_ratio_interval(int g, int n, std::span<const int> d,
                                                mpfr_prec_t prec) const {
  const std::vector<int> zeros(static_cast<std::size_t>(n), 0);
  const Interval num = tau(g, n, d).enclose(prec);
  const Interval den = tau(g, n, zeros).enclose(prec);
  if (!den.positive()) throw std::domain_error("tau_ratio: volume vanishes for a nonhyperbolic (g, n)");
  return num / den;
}

double IntersectionEngine::tau_ratio(int g, int n, std::span<const int> d) const {
  return tau_ratio_interval(g, n, d).mid();
}

}  // namespace wpvol
