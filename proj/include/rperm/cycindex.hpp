#pragma once

#include <string>

#include "core.hpp"
#include "numeric.hpp"
#include "series.hpp"

namespace rperm {

using RationalSeries = BivariateSeries<Rational>;

/// Cycle-index series of b2-regular permutations with one tracked cycle length k:
///
///   G(u, x) = sum_{n>=1} (u^n / 2^(n-1)) sum_{pi in S_b2(n)} x^{C_{n,k}(pi)}
///           = 2 T / (1 - T),   T = x (u/2)^k + sum_{i != k} (u/2)^i.
///
/// With this normalization the u^n coefficient is E[x^{C_{n,k}}], so G(u, 1) = u/(1-u).
/// The series is expanded around x = center (default 1, where moments are read off).
inline RationalSeries build_tracked_cycle_index(std::size_t n_max, std::size_t k, std::size_t d_max,
                                                const Rational& center = Rational(1)) {
  if (n_max < 1) throw invalid_input("cycindex: n_max must be >= 1");
  if (k < 1 || k > n_max) throw invalid_input("cycindex: need 1 <= k <= n_max");
  if (d_max < 1) throw invalid_input("cycindex: d_max must be >= 1");

  RationalSeries t(n_max, d_max, center);
  for (std::size_t i = 1; i <= n_max; ++i) {
    const Rational w = inv_pow2(static_cast<unsigned>(i));
    if (i == k) {
      t.at(i, 0) = center * w;
      t.at(i, 1) = w;
    } else {
      t.at(i, 0) = w;
    }
  }
  const auto one = RationalSeries::constant(n_max, d_max, Rational(1), center);
  return (Rational(2) * t).divide(one - t);
}

/// E[C (C-1) ... (C-m+1)] read from a series built around x = 1.
inline Rational extract_factorial_moment(const RationalSeries& g, std::size_t n, std::size_t m) {
  if (g.center() != 1) throw invalid_input("cycindex: series must be expanded around x = 1");
  if (n > g.max_u() || m > g.max_x())
    throw invalid_input("cycindex: truncation orders (" + std::to_string(g.max_u()) + ", " +
                        std::to_string(g.max_x()) + ") insufficient for n = " + std::to_string(n) +
                        ", m = " + std::to_string(m));
  Rational factorial = 1;
  for (std::size_t t = 2; t <= m; ++t) factorial *= static_cast<long>(t);
  return factorial * g.at(n, m);
}

inline Rational extract_factorial_moment(std::size_t n, std::size_t k, std::size_t m) {
  if (n < 1 || m < 1) throw invalid_input("cycindex: need n >= 1 and m >= 1");
  if (k < 1 || k > n) throw invalid_input("cycindex: need 1 <= k <= n");
  return extract_factorial_moment(build_tracked_cycle_index(n, k, m + 1), n, m);
}

struct ClosedFormMoments {
  int n = 0;
  int k = 0;
  Rational mean;
  Rational variance;
  Rational second_falling;
};

namespace detail {
inline void check_nk(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw invalid_input("cycindex: need 1 <= k <= n");
}
}  // namespace detail

/// (n - k + 3) / 2^(k+1)
inline Rational mean_k_cycles(int n, int k) {
  detail::check_nk(n, k);
  return Rational(n - k + 3) * inv_pow2(static_cast<unsigned>(k + 1));
}

/// (n + 2 - 2k)(n + 7 - 2k) / 4^(k+1)
inline Rational second_falling_moment(int n, int k) {
  detail::check_nk(n, k);
  return Rational(static_cast<long>(n + 2 - 2 * k) * (n + 7 - 2 * k)) *
         inv_pow2(static_cast<unsigned>(2 * (k + 1)));
}

/// ((2^(k+1) - 2k + 3) n + 3k(k-4) + (3-k) 2^(k+1) + 5) / 4^(k+1)
inline Rational variance_k_cycles(int n, int k) {
  detail::check_nk(n, k);
  const BigInt p = pow2(static_cast<unsigned>(k + 1));
  const BigInt num = (p - 2 * k + 3) * n + 3 * k * (k - 4) + (3 - k) * p + 5;
  return Rational(num) * inv_pow2(static_cast<unsigned>(2 * (k + 1)));
}

inline ClosedFormMoments closed_form_moments(int n, int k) {
  return {n, k, mean_k_cycles(n, k), variance_k_cycles(n, k), second_falling_moment(n, k)};
}

/// Exact mean, variance and second falling moment of C_{n,k} from the cycle index.
inline ClosedFormMoments series_moments(int n, int k) {
  detail::check_nk(n, k);
  const auto g = build_tracked_cycle_index(static_cast<std::size_t>(n), static_cast<std::size_t>(k), 2);
  ClosedFormMoments r{n, k, extract_factorial_moment(g, n, 1), 0, extract_factorial_moment(g, n, 2)};
  r.variance = r.second_falling + r.mean - r.mean * r.mean;
  return r;
}

}  // namespace rperm
