#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "numeric.hpp"

namespace rperm {

inline constexpr int kDefaultCompositionCap = 24;

/// Prefix-maximum positions of a permutation and the values attained there.
struct RecordProfile {
  std::vector<std::size_t> positions;
  std::vector<int> values;
};

inline RecordProfile record_positions(const Permutation& p) {
  RecordProfile r;
  int best = 0;
  for (std::size_t i = 1; i <= p.size(); ++i) {
    if (p(i) > best) {
      best = p(i);
      r.positions.push_back(i);
      r.values.push_back(best);
    }
  }
  return r;
}

// pi(i) >= i - 1 for all i.
inline bool is_b2_regular(const Permutation& p) {
  for (std::size_t i = 2; i <= p.size(); ++i)
    if (p(i) < static_cast<int>(i) - 1) return false;
  return true;
}

/// Composition whose parts are the gaps between consecutive record positions.
/// For b2-regular input the parts are the cycle lengths read left to right.
inline Composition perm_to_composition(const Permutation& p) {
  if (!is_b2_regular(p))
    throw invalid_input("bijection: permutation is not b2-regular (needs pi(i) >= i-1)");
  const auto rec = record_positions(p);
  std::vector<int> parts;
  parts.reserve(rec.positions.size());
  for (std::size_t t = 0; t < rec.positions.size(); ++t) {
    const std::size_t next = t + 1 < rec.positions.size() ? rec.positions[t + 1] : p.size() + 1;
    parts.push_back(static_cast<int>(next - rec.positions[t]));
  }
  return Composition(std::move(parts));
}

/// Inverse of perm_to_composition. A block s..e becomes the cycle
/// s -> e -> e-1 -> ... -> s+1 -> s, i.e. pi(s) = e and pi(m) = m - 1 inside.
inline Permutation composition_to_perm(const Composition& c) {
  std::vector<int> img(static_cast<std::size_t>(c.total()));
  int start = 1;
  for (int len : c.parts()) {
    const int end = start + len - 1;
    img[start - 1] = end;
    for (int m = start + 1; m <= end; ++m) img[m - 1] = m - 1;
    start = end + 1;
  }
  return Permutation(std::move(img));
}

/// Composition of n from cut bits: bit t of `words` (t = 0..n-2, little-endian across
/// words) set means a cut after position t + 1.
inline Composition composition_from_cut_words(int n, std::span<const std::uint64_t> words) {
  if (n < 1) throw invalid_input("bijection: n must be >= 1");
  if (words.size() * 64 < static_cast<std::size_t>(n - 1))
    throw invalid_input("bijection: not enough cut bits for n");
  std::vector<int> parts;
  int run = 1;
  for (int t = 0; t < n - 1; ++t) {
    if ((words[static_cast<std::size_t>(t) / 64] >> (t % 64)) & 1U) {
      parts.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  parts.push_back(run);
  return Composition(std::move(parts));
}

inline Composition composition_from_cuts(int n, std::uint64_t mask) {
  return composition_from_cut_words(n, std::span<const std::uint64_t>(&mask, 1));
}

/// Visits the 2^(n-1) compositions of n in cut-mask counter order (mask 0 = (n)).
template <typename Visitor>
void for_each_composition(int n, Visitor&& visit, int cap = kDefaultCompositionCap) {
  if (n < 1) throw invalid_input("bijection: n must be >= 1");
  if (n > cap)
    throw cap_exceeded("bijection: n = " + std::to_string(n) + " exceeds composition cap " +
                       std::to_string(cap));
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (!visit(composition_from_cuts(n, mask))) return;
  }
}

inline std::vector<Composition> enumerate_compositions(int n, int cap = kDefaultCompositionCap) {
  std::vector<Composition> out;
  for_each_composition(n, [&](const Composition& c) {
    out.push_back(c);
    return true;
  }, cap);
  return out;
}

/// Total number of k-parts over all compositions of n: (n-k+3) 2^(n-k-2) for k <= n-2,
/// 2 for k = n-1 and 1 for k = n.
inline BigInt total_k_parts(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw invalid_input("bijection: need 1 <= k <= n");
  if (k == n) return 1;
  if (k == n - 1) return 2;
  return BigInt(n - k + 3) * pow2(static_cast<unsigned>(n - k - 2));
}

}  // namespace rperm
