#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "counting.hpp"
#include "numeric.hpp"

namespace rperm {

inline constexpr std::size_t kDefaultRyserCap = 30;
inline constexpr std::size_t kDefaultEnumerateCap = 10;

namespace detail {

inline BigInt from_u128(unsigned __int128 v) {
  BigInt r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

// Sums nonnegative terms into a 128-bit buffer, spilling to a BigInt on overflow.
class ExactSum {
 public:
  void add(unsigned __int128 v) {
    unsigned __int128 next;
    if (__builtin_add_overflow(buffer_, v, &next)) {
      spill_ += from_u128(buffer_);
      buffer_ = v;
    } else {
      buffer_ = next;
    }
  }
  void add(const BigInt& v) { spill_ += v; }
  BigInt value() const { return spill_ + from_u128(buffer_); }

 private:
  unsigned __int128 buffer_ = 0;
  BigInt spill_ = 0;
};

}  // namespace detail

/// Per(M) by Ryser inclusion-exclusion over column subsets, visiting subsets in
/// Gray-code order so each step touches one column: O(n 2^n) row-sum updates.
inline BigInt permanent_ryser(const RestrictionMatrix& m, std::size_t cap = kDefaultRyserCap) {
  const std::size_t n = m.size();
  if (n > cap)
    throw cap_exceeded("permanent: dimension " + std::to_string(n) + " exceeds Ryser cap " +
                       std::to_string(cap));
  if (n == 0) return 1;
  if (n > 62) throw cap_exceeded("permanent: dimension exceeds 62-bit subset counter");

  std::vector<std::vector<std::size_t>> column_rows(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (m.allowed(i + 1, j + 1)) column_rows[j].push_back(i);

  std::vector<std::int64_t> row_sum(n, 0);
  std::vector<bool> in_subset(n, false);
  std::size_t subset_size = 0;
  std::size_t zero_rows = n;

  // Terms with sign (-1)^(n - |S|) go to `plus` when n - |S| is even.
  detail::ExactSum plus;
  detail::ExactSum minus;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto col = static_cast<std::size_t>(std::countr_zero(step));
    const bool adding = !in_subset[col];
    in_subset[col] = adding;
    if (adding) {
      ++subset_size;
    } else {
      --subset_size;
    }
    for (std::size_t r : column_rows[col]) {
      if (adding) {
        if (row_sum[r]++ == 0) --zero_rows;
      } else {
        if (--row_sum[r] == 0) ++zero_rows;
      }
    }
    if (zero_rows != 0) continue;

    unsigned __int128 prod = 1;
    bool overflow = false;
    for (std::size_t r = 0; r < n && !overflow; ++r)
      overflow = __builtin_mul_overflow(prod, static_cast<unsigned __int128>(row_sum[r]), &prod);

    auto& sink = ((n - subset_size) % 2 == 0) ? plus : minus;
    if (!overflow) {
      sink.add(prod);
    } else {
      BigInt big = 1;
      for (std::size_t r = 0; r < n; ++r) big *= row_sum[r];
      sink.add(big);
    }
  }
  return plus.value() - minus.value();
}

/// Per(M) as the direct sum over all n! permutations. Oracle for permanent_ryser.
inline BigInt permanent_enumerate(const RestrictionMatrix& m, std::size_t cap = kDefaultEnumerateCap) {
  const std::size_t n = m.size();
  if (n > cap)
    throw cap_exceeded("permanent: dimension " + std::to_string(n) + " exceeds enumeration cap " +
                       std::to_string(cap));
  if (n == 0) return 1;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{1});
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = m.allowed(i + 1, perm[i]);
    count += ok ? 1 : 0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

/// Restriction vector of the permutations of the remaining n-1 points once pi(i) = i
/// is forced: entry i is erased and later entries above i drop by one.
inline RestrictionVector reduce_vector_on_fixed_point(const RestrictionVector& b, std::size_t i) {
  const std::size_t n = b.size();
  if (i < 1 || i > n)
    throw invalid_input("permanent: fixed index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  if (n == 1) return RestrictionVector::empty();
  std::vector<int> out;
  out.reserve(n - 1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (j < i) out.push_back(b(j));
    if (j > i) out.push_back(b(j) > static_cast<int>(i) ? b(j) - 1 : b(j));
  }
  return RestrictionVector(std::move(out));
}

/// Reduces b on every index of `fixed`, given in original labels, in the given order.
/// Labels are translated to current positions as earlier reductions shift them.
inline RestrictionVector reduce_vector_on_fixed_points(const RestrictionVector& b,
                                                       std::span<const std::size_t> fixed) {
  const std::size_t n = b.size();
  std::set<std::size_t> seen;
  for (std::size_t f : fixed) {
    if (f < 1 || f > n)
      throw invalid_input("permanent: fixed index " + std::to_string(f) + " outside 1.." + std::to_string(n));
    if (!seen.insert(f).second)
      throw invalid_input("permanent: fixed index " + std::to_string(f) + " repeated");
  }

  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{1});
  RestrictionVector cur = b;
  for (std::size_t f : fixed) {
    const auto pos = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), f) - labels.begin()) + 1;
    cur = reduce_vector_on_fixed_point(cur, pos);
    labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(pos - 1));
  }
  return cur;
}

/// Number of b-regular permutations fixing every index in `fixed` (original labels).
inline BigInt count_with_fixed_points(const RestrictionVector& b, std::span<const std::size_t> fixed) {
  return count_b_regular(reduce_vector_on_fixed_points(b, fixed));
}

inline BigInt count_with_fixed_points(const RestrictionVector& b, std::initializer_list<std::size_t> fixed) {
  return count_with_fixed_points(b, std::span<const std::size_t>(fixed.begin(), fixed.size()));
}

/// Product form of |S_{b,k}|: positions before k keep their factor, positions after k
/// shift down by one and lose a column when b_j > k.
inline BigInt count_fixing_one_closed_form(const RestrictionVector& b, std::size_t k) {
  const std::size_t n = b.size();
  if (k < 1 || k > n) throw invalid_input("permanent: index out of range");
  BigInt r = 1;
  for (std::size_t j = 1; j < k; ++j) r *= 1 + static_cast<long>(j) - b(j);
  for (std::size_t j = k + 1; j <= n; ++j) {
    const long bj = b(j) - (b(j) > static_cast<int>(k) ? 1 : 0);
    r *= static_cast<long>(j) - bj;
  }
  return r;
}

/// Product form of |S_{b,i,j}| for i < j, written in original labels.
inline BigInt count_fixing_two_closed_form(const RestrictionVector& b, std::size_t i, std::size_t j) {
  const std::size_t n = b.size();
  if (!(1 <= i && i < j && j <= n)) throw invalid_input("permanent: need 1 <= i < j <= n");
  const auto above = [](int v, std::size_t t) { return v > static_cast<int>(t) ? 1 : 0; };
  BigInt r = 1;
  for (std::size_t m = 1; m < i; ++m) r *= 1 + static_cast<long>(m) - b(m);
  for (std::size_t m = i + 1; m < j; ++m) r *= static_cast<long>(m) - (b(m) - above(b(m), i));
  for (std::size_t m = j + 1; m <= n; ++m)
    r *= static_cast<long>(m) - 1 - (b(m) - above(b(m), i) - above(b(m), j));
  return r;
}

}  // namespace rperm
