#pragma once

// Subset enumeration and ranking. All k-subset iteration in the project uses
// colexicographic order; ranks computed here index every per-subset array.

#include <cstdint>
#include <vector>

#include "bphf/errors.hpp"
#include "bphf/rational.hpp"

namespace bphf {

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return Int(0);
  if (k > n - k) k = n - k;
  Int r(1);
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline Int factorial(unsigned n) {
  Int r(1);
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

// n! / (n-k)!
inline Int falling_factorial(unsigned n, unsigned k) {
  if (k > n) return Int(0);
  Int r(1);
  for (unsigned i = 0; i < k; ++i) r *= n - i;
  return r;
}

inline std::uint64_t binomial_u64(unsigned n, unsigned k) {
  Int b = binomial(n, k);
  if (b > Int(UINT64_MAX)) throw budget_error("binomial(n,k) exceeds 64-bit range");
  return b.template convert_to<std::uint64_t>();
}

// Visits every k-subset of {0..n-1} in colex order as a sorted int vector.
// f may return void, or bool (false stops the enumeration).
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k <= 0 || k > n) return;
  std::vector<int> s(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = i;
  for (;;) {
    if constexpr (std::is_same_v<decltype(f(s)), bool>) {
      if (!f(s)) return;
    } else {
      f(s);
    }
    // colex successor: bump the lowest element that can move.
    int i = 0;
    while (i + 1 < k && s[static_cast<std::size_t>(i)] + 1 == s[static_cast<std::size_t>(i + 1)]) ++i;
    if (i == k - 1 && s.back() + 1 >= n) return;
    ++s[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) s[static_cast<std::size_t>(j)] = j;
  }
}

// Colex rank: sum of C(s_j, j+1) over the sorted elements.
inline std::uint64_t subset_rank(const std::vector<int>& sorted, const std::vector<std::vector<std::uint64_t>>& choose) {
  std::uint64_t r = 0;
  for (std::size_t j = 0; j < sorted.size(); ++j)
    r += choose[static_cast<std::size_t>(sorted[j])][j + 1];
  return r;
}

// Small Pascal table choose[i][j] = C(i,j), j <= k, with 64-bit saturation guard.
inline std::vector<std::vector<std::uint64_t>> make_choose_table(int n, int k) {
  std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(n) + 1,
                                            std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 1, 0));
  for (int i = 0; i <= n; ++i) {
    c[static_cast<std::size_t>(i)][0] = 1;
    for (int j = 1; j <= k && j <= i; ++j) {
      std::uint64_t a = c[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1];
      std::uint64_t b = c[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)];
      if (a > UINT64_MAX - b) throw budget_error("subset rank table exceeds 64-bit range");
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a + b;
    }
  }
  return c;
}

}  // namespace bphf
