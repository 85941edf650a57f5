#pragma once

// Small exact combinatorics kit: subsets and permutations in a fixed
// lexicographic order, plus checked integer falling factorials and binomial
// coefficients with log-space companions for formulas that outgrow 64 bits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace borda {

// Sorted, distinct, 0-based item ids.
using ItemSet = std::vector<int>;
// Best-to-worst order of the items of some ItemSet.
using Ranking = std::vector<int>;

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw std::overflow_error("integer overflow in " + std::to_string(a) +
                              " * " + std::to_string(b));
  return out;
}

}  // namespace detail

// n! / (n-k)!, exact. Throws std::overflow_error instead of wrapping.
inline std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("falling_factorial: k > n");
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r = detail::checked_mul(r, n - i);
  return r;
}

inline std::uint64_t factorial(std::uint64_t n) { return falling_factorial(n, n); }

// Exact binomial coefficient; 0 when k > n. Uses a 128-bit intermediate so it
// only reports overflow when the coefficient itself exceeds 64 bits.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // divisible at every step
    if (r > static_cast<unsigned __int128>(UINT64_MAX))
      throw std::overflow_error("binomial overflow: C(" + std::to_string(n) +
                                "," + std::to_string(k) + ")");
  }
  return static_cast<std::uint64_t>(r);
}

inline double log_falling_factorial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0);
}

inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

inline double log_binomial(double n, double k) {
  return log_falling_factorial(n, k) - log_factorial(k);
}

// Double-precision falling factorial: exact while the value fits in 64 bits,
// log-space beyond that.
inline double falling_factorial_dbl(int n, int k) {
  try {
    return static_cast<double>(falling_factorial(n, k));
  } catch (const std::overflow_error&) {
    return std::exp(log_falling_factorial(n, k));
  }
}

inline double binomial_dbl(int n, int k) {
  try {
    return static_cast<double>(binomial(n, k));
  } catch (const std::overflow_error&) {
    return std::exp(log_binomial(n, k));
  }
}

inline double factorial_dbl(int n) { return falling_factorial_dbl(n, n); }

inline void validate_item_set(int n, const ItemSet& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] < 0 || items[i] >= n)
      throw std::invalid_argument("item out of range: " + std::to_string(items[i]));
    if (i > 0 && items[i] <= items[i - 1])
      throw std::invalid_argument("item set must be sorted and distinct");
  }
}

inline void validate_ranking(int n, const Ranking& v) {
  std::vector<bool> seen(n, false);
  for (int x : v) {
    if (x < 0 || x >= n) throw std::invalid_argument("ranked item out of range");
    if (seen[x]) throw std::invalid_argument("ranking repeats an item");
    seen[x] = true;
  }
}

// Visits all m-subsets of {0,...,n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int m, Fn&& fn) {
  if (m < 0 || m > n) throw std::invalid_argument("for_each_subset: need 0 <= m <= n");
  ItemSet cur(m);
  for (int i = 0; i < m; ++i) cur[i] = i;
  while (true) {
    fn(const_cast<const ItemSet&>(cur));
    int i = m - 1;
    while (i >= 0 && cur[i] == n - m + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
}

inline std::vector<ItemSet> enumerate_subsets(int n, int m) {
  std::vector<ItemSet> out;
  out.reserve(binomial(n, m));
  for_each_subset(n, m, [&](const ItemSet& s) { out.push_back(s); });
  return out;
}

// Visits all orderings of `items` in lexicographic order.
template <typename Fn>
void for_each_permutation(const ItemSet& items, Fn&& fn) {
  Ranking v = items;
  std::sort(v.begin(), v.end());
  do {
    fn(const_cast<const Ranking&>(v));
  } while (std::next_permutation(v.begin(), v.end()));
}

inline std::vector<Ranking> enumerate_permutations(const ItemSet& items) {
  std::vector<Ranking> out;
  out.reserve(factorial(items.size()));
  for_each_permutation(items, [&](const Ranking& v) { out.push_back(v); });
  return out;
}

// Index of `items` within the lexicographic enumeration of m-subsets of
// {0,...,n-1}; inverse of enumerate_subsets order.
inline std::uint64_t subset_lex_rank(int n, const ItemSet& items) {
  validate_item_set(n, items);
  const int m = static_cast<int>(items.size());
  std::uint64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < m; ++i) {
    for (int v = prev + 1; v < items[i]; ++v) rank += binomial(n - 1 - v, m - 1 - i);
    prev = items[i];
  }
  return rank;
}

// Index of `v` within the lexicographic enumeration of the permutations of
// its own item set (Lehmer code).
inline std::uint64_t permutation_lex_rank(const Ranking& v) {
  const int m = static_cast<int>(v.size());
  std::uint64_t rank = 0;
  for (int i = 0; i < m; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < m; ++j)
      if (v[j] < v[i]) ++smaller;
    rank += smaller * factorial(m - 1 - i);
  }
  return rank;
}

}  // namespace borda
