#pragma once

// Brute-force reference computations used only by the test suites. They share no code
// path with the library beyond the value types.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "rperm/core.hpp"
#include "rperm/numeric.hpp"

namespace oracle {

// Every image list of S_n, in lexicographic order.
inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

inline std::vector<std::vector<int>> b_regular(const std::vector<int>& b) {
  std::vector<std::vector<int>> out;
  for (auto& p : all_permutations(static_cast<int>(b.size()))) {
    bool ok = true;
    for (std::size_t i = 0; i < b.size(); ++i) ok = ok && p[i] >= b[i];
    if (ok) out.push_back(p);
  }
  return out;
}

inline long permanent(const rperm::RestrictionMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  long total = 0;
  for (auto& p : all_permutations(n)) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = m.allowed(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(p[static_cast<std::size_t>(i)]));
    total += ok ? 1 : 0;
  }
  return total;
}

// Number of orbits of length k.
inline int k_cycles(const std::vector<int>& img, int k) {
  std::vector<bool> seen(img.size() + 1, false);
  int count = 0;
  for (std::size_t s = 1; s <= img.size(); ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (std::size_t x = s; !seen[x]; x = static_cast<std::size_t>(img[x - 1])) {
      seen[x] = true;
      ++len;
    }
    count += len == k ? 1 : 0;
  }
  return count;
}

// Compositions of n by recursion on the first part.
inline std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int first = 1; first <= left; ++first) {
      cur.push_back(first);
      rec(left - first);
      cur.pop_back();
    }
  };
  rec(n);
  return out;
}

inline int count_parts(const std::vector<int>& c, int k) {
  return static_cast<int>(std::count(c.begin(), c.end(), k));
}

// All valid restriction vectors of length n.
inline std::vector<std::vector<int>> restriction_vectors(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> b(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int i, int lo) {
    if (i > n) {
      out.push_back(b);
      return;
    }
    for (int v = lo; v <= i; ++v) {
      b[static_cast<std::size_t>(i - 1)] = v;
      rec(i + 1, v);
    }
  };
  rec(1, 1);
  return out;
}

struct Moments {
  rperm::Rational mean;
  rperm::Rational variance;
  rperm::Rational second_falling;
};

template <typename Values>
Moments moments_of(const Values& xs) {
  rperm::BigInt s1 = 0, s2 = 0;
  for (int x : xs) {
    s1 += x;
    s2 += x * x;
  }
  const rperm::BigInt count = static_cast<long>(xs.size());
  const rperm::Rational mean(s1, count);
  const rperm::Rational second(s2, count);
  return {mean, second - mean * mean, second - mean};
}

// Moments of C_{n,k} over all compositions of n (k-parts).
inline Moments composition_part_moments(int n, int k) {
  std::vector<int> xs;
  for (auto& c : compositions(n)) xs.push_back(count_parts(c, k));
  return moments_of(xs);
}

}  // namespace oracle
