#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "counting.hpp"
#include "numeric.hpp"
#include "permanent.hpp"

namespace rperm {

inline const BigInt kDefaultEnumerationCap = BigInt(1) << 22;

/// The set S_b together with its cardinality.
struct BRegularFamily {
  RestrictionVector b;
  BigInt cardinality;

  explicit BRegularFamily(RestrictionVector vec) : b(std::move(vec)), cardinality(count_b_regular(b)) {}
  std::size_t n() const noexcept { return b.size(); }
};

struct MomentPair {
  Rational mean;
  Rational variance;
};

/// Visits every b-regular permutation once, in lexicographic order of image lists.
/// The visitor returns false to stop early.
template <typename Visitor>
void for_each_b_regular(const RestrictionVector& b, Visitor&& visit,
                        const BigInt& cap = kDefaultEnumerationCap) {
  const BigInt total = count_b_regular(b);
  if (total > cap)
    throw cap_exceeded("bregular: family has " + total.str() + " permutations, cap is " + cap.str());
  const std::size_t n = b.size();
  std::vector<int> img(n, 0);
  std::vector<bool> used(n + 1, false);
  bool stop = false;

  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (stop) return;
    if (i == n) {
      if (!visit(Permutation(img))) stop = true;
      return;
    }
    for (int v = b(i + 1); v <= static_cast<int>(n) && !stop; ++v) {
      if (used[v]) continue;
      used[v] = true;
      img[i] = v;
      place(i + 1);
      used[v] = false;
    }
  };
  place(0);
}

inline std::vector<Permutation> enumerate_b_regular(const RestrictionVector& b,
                                                    const BigInt& cap = kDefaultEnumerationCap) {
  std::vector<Permutation> out;
  for_each_b_regular(b, [&](const Permutation& p) {
    out.push_back(p);
    return true;
  }, cap);
  return out;
}

namespace detail {

// Fenwick tree over values 1..n marking which are still unused.
class AliveValues {
 public:
  explicit AliveValues(std::size_t n) : n_(n), top_(std::bit_floor(n)), alive_(n), tree_(n + 1, 0) {
    for (std::size_t v = 1; v <= n; ++v) {
      tree_[v] += 1;
      const std::size_t parent = v + lowbit(v);
      if (parent <= n) tree_[parent] += tree_[v];
    }
  }

  std::size_t alive() const noexcept { return alive_; }

  // Number of alive values <= v.
  std::size_t prefix(std::size_t v) const {
    std::size_t s = 0;
    for (; v > 0; v -= lowbit(v)) s += tree_[v];
    return s;
  }

  // Smallest value whose prefix count reaches `rank` (1-based).
  std::size_t select(std::size_t rank) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step >>= 1) {
      if (pos + step <= n_ && tree_[pos + step] < rank) {
        pos += step;
        rank -= tree_[pos];
      }
    }
    return pos + 1;
  }

  void erase(std::size_t v) {
    --alive_;
    for (; v <= n_; v += lowbit(v)) tree_[v] -= 1;
  }

 private:
  static std::size_t lowbit(std::size_t v) { return v & (~v + 1); }

  std::size_t n_;
  std::size_t top_;
  std::size_t alive_;
  std::vector<std::size_t> tree_;
};

}  // namespace detail

/// Uniform element of S_b: choose pi(n), pi(n-1), ..., pi(1), each uniformly among the
/// unused values >= b_i. O(n log n).
template <typename Rng>
Permutation sample_b_regular(const RestrictionVector& b, Rng& rng) {
  const std::size_t n = b.size();
  detail::AliveValues alive(n);
  std::vector<int> img(n);
  for (std::size_t i = n; i >= 1; --i) {
    const std::size_t below = alive.prefix(static_cast<std::size_t>(b(i)) - 1);
    const std::size_t choices = alive.alive() - below;
    if (choices == 0)
      throw error("bregular: no admissible value for position " + std::to_string(i));
    std::uniform_int_distribution<std::size_t> pick(1, choices);
    const std::size_t v = alive.select(below + pick(rng));
    alive.erase(v);
    img[i - 1] = static_cast<int>(v);
  }
  return Permutation(std::move(img));
}

inline int count_k_cycles(const Permutation& p, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > p.size())
    throw invalid_input("bregular: cycle length k must satisfy 1 <= k <= n");
  const std::size_t n = p.size();
  std::vector<bool> seen(n + 1, false);
  int count = 0;
  for (std::size_t s = 1; s <= n; ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (auto x = static_cast<std::size_t>(s); !seen[x]; x = static_cast<std::size_t>(p(x))) {
      seen[x] = true;
      ++len;
    }
    count += len == k ? 1 : 0;
  }
  return count;
}

/// E[C_{n,1}] = sum_k |S_{b,k}| / |S_b|.
inline Rational fixed_point_mean(const RestrictionVector& b) {
  BigInt sum = 0;
  for (std::size_t k = 1; k <= b.size(); ++k) sum += count_with_fixed_points(b, {k});
  return Rational(sum, count_b_regular(b));
}

/// Var(C_{n,1}) from the covariance expansion of the fixed-point indicators:
/// sum_k p_k (1 - p_k) + 2 sum_{i<j} (p_ij - p_i p_j). O(n^3).
inline Rational fixed_point_variance(const RestrictionVector& b) {
  const std::size_t n = b.size();
  const BigInt total = count_b_regular(b);
  std::vector<Rational> p(n + 1);
  Rational var = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    p[k] = Rational(count_with_fixed_points(b, {k}), total);
    var += p[k] * (1 - p[k]);
  }
  Rational cov = 0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      cov += Rational(count_with_fixed_points(b, {i, j}), total) - p[i] * p[j];
  return var + 2 * cov;
}

inline MomentPair fixed_point_moments(const RestrictionVector& b) {
  return {fixed_point_mean(b), fixed_point_variance(b)};
}

}  // namespace rperm
