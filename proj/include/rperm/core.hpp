#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rperm {

// Errors carry a module prefix ("permanent: ...") in their message.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_input : public error {
 public:
  using error::error;
};

class cap_exceeded : public error {
 public:
  using error::error;
};

/// Lower bounds b_1..b_n for one-sided restrictions pi(i) >= b_i.
/// Non-decreasing, positive, and b_i <= i. All indices are 1-based.
class RestrictionVector {
 public:
  explicit RestrictionVector(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw invalid_input("core: restriction vector must have n >= 1");
    validate();
  }

  // Length-zero vector. Only produced by fixed-point reduction of a length-one vector.
  static RestrictionVector empty() { return RestrictionVector(); }

  std::size_t size() const noexcept { return entries_.size(); }
  bool is_empty() const noexcept { return entries_.empty(); }
  int operator()(std::size_t i) const { return entries_.at(i - 1); }
  std::span<const int> entries() const noexcept { return entries_; }

  friend bool operator==(const RestrictionVector&, const RestrictionVector&) = default;

 private:
  RestrictionVector() = default;

  void validate() const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const int v = entries_[i];
      if (v < 1)
        throw invalid_input("core: entry b_" + std::to_string(i + 1) + " = " + std::to_string(v) +
                            " is not positive");
      if (v > static_cast<int>(i + 1))
        throw invalid_input("core: entry b_" + std::to_string(i + 1) + " = " + std::to_string(v) +
                            " exceeds its index");
      if (i > 0 && v < entries_[i - 1])
        throw invalid_input("core: restriction vector is not non-decreasing at index " +
                            std::to_string(i + 1));
    }
  }

  std::vector<int> entries_;
};

/// b_r = [1,...,1 (r ones), 2, 3, ..., n-r+1]; for n < r all entries are 1.
inline RestrictionVector make_br(int r, int n) {
  if (r < 1) throw invalid_input("core: r must be >= 1");
  if (n < 1) throw invalid_input("core: n must be >= 1");
  std::vector<int> b(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) b[i - 1] = std::max(1, i - r + 1);
  return RestrictionVector(std::move(b));
}

inline RestrictionVector make_b2(int n) { return make_br(2, n); }
inline RestrictionVector make_b3(int n) { return make_br(3, n); }

// b = [1,2,...,n]: only the identity survives.
inline RestrictionVector make_identity_vector(int n) { return make_br(1, n); }

// b = [1,...,1]: no restriction.
inline RestrictionVector make_unrestricted_vector(int n) {
  if (n < 1) throw invalid_input("core: n must be >= 1");
  return RestrictionVector(std::vector<int>(static_cast<std::size_t>(n), 1));
}

/// n x n 0/1 matrix; M(i,j) = 1 iff pi(i) = j is allowed. n = 0 is the empty matrix.
class RestrictionMatrix {
 public:
  RestrictionMatrix() = default;

  explicit RestrictionMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  RestrictionMatrix(std::size_t n, std::vector<std::uint8_t> cells) : n_(n), cells_(std::move(cells)) {
    if (cells_.size() != n * n) throw invalid_input("core: matrix cell count does not match n*n");
    for (auto& c : cells_) {
      if (c > 1) throw invalid_input("core: matrix entries must be 0 or 1");
    }
  }

  static RestrictionMatrix all_ones(std::size_t n) {
    return RestrictionMatrix(n, std::vector<std::uint8_t>(n * n, 1));
  }

  static RestrictionMatrix identity(std::size_t n) {
    RestrictionMatrix m(n);
    for (std::size_t i = 1; i <= n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  bool allowed(std::size_t i, std::size_t j) const { return cells_.at((i - 1) * n_ + (j - 1)) != 0; }
  void set(std::size_t i, std::size_t j, bool v) { cells_.at((i - 1) * n_ + (j - 1)) = v ? 1 : 0; }

  std::size_t row_count(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t j = 1; j <= n_; ++j) c += allowed(i, j) ? 1 : 0;
    return c;
  }

  std::size_t total_allowed() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
  }

  friend bool operator==(const RestrictionMatrix&, const RestrictionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

inline RestrictionMatrix matrix_from_vector(const RestrictionVector& b) {
  const std::size_t n = b.size();
  RestrictionMatrix m(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = static_cast<std::size_t>(b(i)); j <= n; ++j) m.set(i, j, true);
  return m;
}

/// A bijection on {1..n}, stored as its image list.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const std::size_t n = images_.size();
    if (n == 0) throw invalid_input("core: permutation must have n >= 1");
    std::vector<bool> seen(n + 1, false);
    for (int v : images_) {
      if (v < 1 || static_cast<std::size_t>(v) > n || seen[v])
        throw invalid_input("core: image list is not a permutation of 1..n");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
  }

  // Each cycle lists c, pi(c), pi(pi(c)), ...
  static Permutation from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> img(n, 0);
    for (const auto& c : cycles) {
      for (std::size_t t = 0; t < c.size(); ++t) {
        const int from = c[t];
        if (from < 1 || static_cast<std::size_t>(from) > n)
          throw invalid_input("core: cycle element out of range");
        img[from - 1] = c[(t + 1) % c.size()];
      }
    }
    return Permutation(std::move(img));
  }

  std::size_t size() const noexcept { return images_.size(); }
  int operator()(std::size_t i) const { return images_.at(i - 1); }
  std::span<const int> images() const noexcept { return images_; }

  /// Orbits in order of their smallest element; each starts at that element.
  std::vector<std::vector<int>> cycles() const {
    const std::size_t n = images_.size();
    std::vector<bool> seen(n + 1, false);
    std::vector<std::vector<int>> out;
    for (std::size_t s = 1; s <= n; ++s) {
      if (seen[s]) continue;
      std::vector<int> c;
      for (int x = static_cast<int>(s); !seen[x]; x = images_[x - 1]) {
        seen[x] = true;
        c.push_back(x);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  bool satisfies(const RestrictionVector& b) const {
    if (b.size() != size()) return false;
    for (std::size_t i = 1; i <= size(); ++i)
      if ((*this)(i) < b(i)) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// Ordered list of positive parts.
class Composition {
 public:
  explicit Composition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw invalid_input("core: composition must have at least one part");
    for (int p : parts_)
      if (p < 1) throw invalid_input("core: composition parts must be positive");
    total_ = std::accumulate(parts_.begin(), parts_.end(), 0);
  }

  int total() const noexcept { return total_; }
  std::size_t part_count() const noexcept { return parts_.size(); }
  std::span<const int> parts() const noexcept { return parts_; }

  int count_parts(int k) const {
    return static_cast<int>(std::count(parts_.begin(), parts_.end(), k));
  }

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;

 private:
  std::vector<int> parts_;
  int total_ = 0;
};

/// Cycle length -> multiplicity. Only nonzero multiplicities are stored.
class CycleType {
 public:
  CycleType() = default;
  explicit CycleType(std::map<int, int> counts) : counts_(std::move(counts)) {
    std::erase_if(counts_, [](const auto& kv) { return kv.second == 0; });
  }

  int count(int k) const {
    auto it = counts_.find(k);
    return it == counts_.end() ? 0 : it->second;
  }

  // Sum of k * n_k.
  int degree() const {
    int s = 0;
    for (auto [k, c] : counts_) s += k * c;
    return s;
  }

  const std::map<int, int>& counts() const noexcept { return counts_; }

  friend bool operator==(const CycleType&, const CycleType&) = default;

 private:
  std::map<int, int> counts_;
};

inline CycleType cycle_type(const Permutation& p) {
  std::map<int, int> counts;
  for (const auto& c : p.cycles()) ++counts[static_cast<int>(c.size())];
  return CycleType(std::move(counts));
}

}  // namespace rperm
