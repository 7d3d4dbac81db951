#pragma once

// Independent oracle for the volume coefficients: Witten-Kontsevich numbers
// <tau_d>_g from the DVV recursion in the standard normalization, kappa_1
// powers through forgetful pushforwards, and the Weil-Petersson expansion
// V_{g,n}(L) = sum (2 pi^2)^m / (2^|d| prod d_i! m!) <kappa_1^m tau_d> L^{2d}.

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;

inline Q double_factorial(int n) {
  Q r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

inline Q fact(int n) {
  Q r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

class WittenKontsevich {
 public:
  Q operator()(int g, std::vector<int> d) {
    if (g < 0) return 0;
    const int n = static_cast<int>(d.size());
    if (2 * g - 2 + n <= 0) return 0;
    for (int x : d) {
      if (x < 0) return 0;
    }
    if (std::accumulate(d.begin(), d.end(), 0) != 3 * g - 3 + n) return 0;
    std::sort(d.begin(), d.end(), std::greater<>());
    if (g == 0 && n == 3) return 1;
    if (g == 1 && n == 1) return Q(1, 24);
    const auto key = std::make_pair(g, d);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int k = d[0] - 1;
    const std::vector<int> S(d.begin() + 1, d.end());
    const int m = static_cast<int>(S.size());
    Q total = 0;
    for (int j = 0; j < m; ++j) {
      std::vector<int> t = S;
      t[j] += k;
      total += double_factorial(2 * k + 2 * S[j] + 1) / double_factorial(2 * S[j] - 1) * (*this)(g, t);
    }
    for (int r = 0; r <= k - 1; ++r) {
      const int s = k - 1 - r;
      const Q w = double_factorial(2 * r + 1) * double_factorial(2 * s + 1) / 2;
      std::vector<int> t = S;
      t.push_back(r);
      t.push_back(s);
      total += w * (*this)(g - 1, t);
      for (int g1 = 0; g1 <= g; ++g1) {
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
          std::vector<int> a{r};
          std::vector<int> b{s};
          for (int i = 0; i < m; ++i) ((mask >> i) & 1u ? a : b).push_back(S[i]);
          total += w * (*this)(g1, a) * (*this)(g - g1, b);
        }
      }
    }
    total /= double_factorial(2 * k + 3);
    memo_.emplace(key, total);
    return total;
  }

 private:
  std::map<std::pair<int, std::vector<int>>, Q> memo_;
};

// <kappa_{a_1} ... kappa_{a_m} tau_d>_g from
// pi_*(prod psi_{n+i}^{a_i+1}) = sum_{sigma} prod_{cycles c} kappa_{a(c)}.
class KappaIntegrals {
 public:
  Q operator()(int g, const std::vector<int>& d, std::vector<int> a) {
    std::sort(a.begin(), a.end());
    const auto key = std::make_tuple(g, d, a);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<int> pts = d;
    for (int x : a) pts.push_back(x + 1);
    Q val = wk_(g, pts);
    const int m = static_cast<int>(a.size());
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<int> merged;
      std::vector<bool> seen(m, false);
      for (int i = 0; i < m; ++i) {
        if (seen[i]) continue;
        int sum = 0;
        for (int j = i; !seen[j]; j = perm[j]) {
          seen[j] = true;
          sum += a[j];
        }
        merged.push_back(sum);
      }
      val -= (*this)(g, d, merged);
    }
    memo_.emplace(key, val);
    return val;
  }

 private:
  WittenKontsevich wk_;
  std::map<std::tuple<int, std::vector<int>, std::vector<int>>, Q> memo_;
};

// Coefficient of prod L_i^{2 d_i} in V_{g,n}(L) as q * pi^{2m}; returns (m, q).
inline std::pair<int, Q> volume_coefficient(KappaIntegrals& kappa, int g, const std::vector<int>& d) {
  const int n = static_cast<int>(d.size());
  const int sum = std::accumulate(d.begin(), d.end(), 0);
  const int m = 3 * g - 3 + n - sum;
  if (m < 0) return {0, 0};
  Q q = kappa(g, d, std::vector<int>(m, 1));
  for (int i = 0; i < m; ++i) q *= 2;
  q /= fact(m);
  for (int x : d) q /= fact(x);
  for (int i = 0; i < sum; ++i) q /= 2;
  return {m, q};
}

}  // namespace oracle
