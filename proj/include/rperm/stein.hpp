#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bijection.hpp"
#include "bregular.hpp"
#include "core.hpp"
#include "cycindex.hpp"
#include "numeric.hpp"
#include "stats.hpp"

namespace rperm {

// Indicator I^k_i marks the cycle on {i, ..., i+k-1} of a uniform b2-regular permutation,
// equivalently a k-part occupying positions i..i+k-1 of a uniform composition of n.

namespace detail {
inline void check_indicator(int n, int k, int i) {
  if (k < 1 || n < k) throw invalid_input("stein: need 1 <= k <= n");
  if (i < 1 || i > n - k + 1)
    throw invalid_input("stein: indicator index " + std::to_string(i) + " outside 1.." +
                        std::to_string(n - k + 1));
}
}  // namespace detail

/// P(I^k_i): the free segments on either side compose independently.
/// Equals 1/2^k at the two ends and 1/2^(k+1) in between whenever both regimes exist.
inline Rational indicator_probability(int n, int k, int i) {
  detail::check_indicator(n, k, i);
  return Rational(composition_count(i - 1) * composition_count(n - (i + k - 1)),
                  composition_count(n));
}

/// P(I^k_i and I^k_j), i < j. Zero when the two cycles share an element.
inline Rational joint_indicator_probability(int n, int k, int i, int j) {
  detail::check_indicator(n, k, i);
  detail::check_indicator(n, k, j);
  if (!(i < j)) throw invalid_input("stein: joint probability needs i < j");
  if (j - i < k) return 0;
  return Rational(composition_count(i - 1) * composition_count(j - i - k) *
                      composition_count(n - (j + k - 1)),
                  composition_count(n));
}

struct IndicatorLaw {
  int n = 0;
  int k = 0;
  std::vector<Rational> p;  // p[i-1] = P(I^k_i)

  Rational total() const {
    Rational s = 0;
    for (const auto& v : p) s += v;
    return s;
  }
};

inline IndicatorLaw indicator_law(int n, int k) {
  IndicatorLaw law{n, k, {}};
  for (int i = 1; i <= n - k + 1; ++i) law.p.push_back(indicator_probability(n, k, i));
  return law;
}

inline bool indicators_independent(int n, int k, int i, int j) {
  if (i > j) std::swap(i, j);
  return joint_indicator_probability(n, k, i, j) ==
         indicator_probability(n, k, i) * indicator_probability(n, k, j);
}

struct DependenceReport {
  int n = 0;
  int k = 0;
  // Smallest d with every pair at |i-j| >= d independent; 1 if every pair is independent.
  int threshold = 0;
  int threshold_mid = 0;       // pairs with both indices in 2..n-k
  int threshold_endpoint = 0;  // pairs with at least one index in {1, n-k+1}
  int witness_i = 0;           // a dependent pair at distance threshold - 1
  int witness_j = 0;
  // Largest |{j : I_j dependent on I_i}|, counting i itself.
  int max_neighborhood = 0;
  bool matches_at_least_k_plus_1 = false;   // independence iff |i-j| >= k+1
  bool matches_greater_than_k_plus_1 = false;  // independence iff |i-j| > k+1
};

/// Exact pair scan over all indicator pairs. O(n^2) rational comparisons.
inline DependenceReport dependence_threshold(int n, int k) {
  if (k < 1 || n < 2 * k + 4) throw invalid_input("stein: dependence scan needs n >= 2k + 4");
  const int last = n - k + 1;
  DependenceReport r{n, k};
  int max_all = 0, max_mid = 0, max_end = 0;
  std::vector<int> neighborhood(static_cast<std::size_t>(last) + 1, 1);
  for (int i = 1; i <= last; ++i)
    for (int j = i + 1; j <= last; ++j) {
      if (indicators_independent(n, k, i, j)) continue;
      ++neighborhood[i];
      ++neighborhood[j];
      const int d = j - i;
      const bool endpoint = i == 1 || j == last;
      if (d > max_all) {
        max_all = d;
        r.witness_i = i;
        r.witness_j = j;
      }
      if (endpoint) {
        max_end = std::max(max_end, d);
      } else {
        max_mid = std::max(max_mid, d);
      }
    }
  r.threshold = max_all + 1;
  r.threshold_mid = max_mid + 1;
  r.threshold_endpoint = max_end + 1;
  r.max_neighborhood = *std::max_element(neighborhood.begin() + 1, neighborhood.end());
  r.matches_at_least_k_plus_1 = r.threshold == k + 1;
  r.matches_greater_than_k_plus_1 = r.threshold == k + 2;
  return r;
}

/// E|B - p|^m for B ~ Bernoulli(p).
inline Rational two_point_abs_moment(const Rational& p, int m) {
  Rational lo = 1, hi = 1;
  for (int t = 0; t < m; ++t) {
    lo *= p;
    hi *= 1 - p;
  }
  return lo * (1 - p) + hi * p;
}

struct ShiftedMomentSums {
  Rational endpoint_third;
  Rational mid_third;
  Rational endpoint_fourth;
  Rational mid_fourth;
  Rational a;  // sum_i E|X_i|^3
  Rational b;  // sum_i E[X_i^4]
};

namespace detail {
// (2^{3q} - 3 2^{2q} + 2^{q+2} - 2) / 2^{4q}
inline Rational third_abs_moment_display(int q) {
  const auto e = static_cast<unsigned>(q);
  return Rational(pow2(3 * e) - 3 * pow2(2 * e) + pow2(e + 2) - 2, pow2(4 * e));
}
// (2^{2q} - 3 2^q + 3)(2^q - 1) / 2^{4q}
inline Rational fourth_moment_display(int q) {
  const auto e = static_cast<unsigned>(q);
  return Rational((pow2(2 * e) - 3 * pow2(e) + 3) * (pow2(e) - 1), pow2(4 * e));
}
}  // namespace detail

/// Third and fourth moments of the centred indicators X_i = I^k_i - P(I^k_i), summed over i.
inline ShiftedMomentSums shifted_moment_sums(int n, int k) {
  if (k < 1 || n < k + 2) throw invalid_input("stein: moment sums need n >= k + 2");
  ShiftedMomentSums s;
  s.endpoint_third = detail::third_abs_moment_display(k);
  s.mid_third = detail::third_abs_moment_display(k + 1);
  s.endpoint_fourth = detail::fourth_moment_display(k);
  s.mid_fourth = detail::fourth_moment_display(k + 1);
  s.a = 2 * s.endpoint_third + (n - k - 1) * s.mid_third;
  s.b = 2 * s.endpoint_fourth + (n - k - 1) * s.mid_fourth;
  return s;
}

/// Local-dependence bound with neighborhood size D:
///   D^2 / sigma^3 * a + sqrt(28) D^{3/2} / (sqrt(pi) sigma^2) * sqrt(b).
inline double local_dependence_bound(double d, double sigma2, double a, double b) {
  const double sigma = std::sqrt(sigma2);
  return d * d / (sigma2 * sigma) * a +
         std::sqrt(28.0) * std::pow(d, 1.5) / (std::sqrt(std::numbers::pi) * sigma2) * std::sqrt(b);
}

/// Upper bound on d_W(W, Z) with D = 2k and sigma^2 = sigma^2_{n,k}.
inline double wasserstein_bound(int n, int k) {
  const auto sums = shifted_moment_sums(n, k);
  const Rational sigma2 = variance_k_cycles(n, k);
  if (sigma2 <= 0) throw invalid_input("stein: variance is not positive");
  return local_dependence_bound(2.0 * k, to_double(sigma2), to_double(sums.a), to_double(sums.b));
}

/// lim_{n -> inf} sqrt(n) * wasserstein_bound(n, k).
inline double wasserstein_bound_scaled_limit(int k) {
  if (k < 1) throw invalid_input("stein: k must be >= 1");
  // sigma^2 ~ c n, a ~ alpha n, b ~ beta n.
  const double c = to_double(Rational(pow2(static_cast<unsigned>(k + 1)) - 2 * k + 3) *
                             inv_pow2(static_cast<unsigned>(2 * (k + 1))));
  const double alpha = to_double(detail::third_abs_moment_display(k + 1));
  const double beta = to_double(detail::fourth_moment_display(k + 1));
  const double d = 2.0 * k;
  return d * d * alpha / std::pow(c, 1.5) +
         std::sqrt(28.0) * std::pow(d, 1.5) / std::sqrt(std::numbers::pi) * std::sqrt(beta) / c;
}

/// d_K <= sqrt(2 C d_W) with C = 1/sqrt(2 pi), the maximum of the normal density.
inline double kolmogorov_from_wasserstein(double dw) {
  if (!(dw >= 0)) throw invalid_input("stein: Wasserstein distance must be nonnegative");
  return std::sqrt(2.0 * dw / std::sqrt(2.0 * std::numbers::pi));
}

struct SteinBoundReport {
  int n = 0;
  int k = 0;
  int neighborhood = 0;  // D = 2k
  double sigma = 0;
  Rational sigma2;
  Rational a_nk;
  Rational b_nk;
  double wasserstein = 0;
  double kolmogorov = 0;
  // Same bound with D set to the neighborhood size found by exact pair scan
  // (including the indicator itself), measured at n_probe.
  int measured_neighborhood = 0;
  int n_probe = 0;
  double wasserstein_measured = 0;
  double kolmogorov_measured = 0;
};

inline SteinBoundReport stein_bound(int n, int k) {
  SteinBoundReport r;
  r.n = n;
  r.k = k;
  const auto sums = shifted_moment_sums(n, k);
  r.sigma2 = variance_k_cycles(n, k);
  r.sigma = std::sqrt(to_double(r.sigma2));
  r.a_nk = sums.a;
  r.b_nk = sums.b;
  r.neighborhood = 2 * k;
  r.wasserstein = wasserstein_bound(n, k);
  r.kolmogorov = kolmogorov_from_wasserstein(r.wasserstein);

  // The neighborhood of a bulk indicator stops growing once n >= 6k + 6.
  r.n_probe = std::max(2 * k + 4, std::min(n, 6 * k + 6));
  r.measured_neighborhood = dependence_threshold(r.n_probe, k).max_neighborhood;
  r.wasserstein_measured = local_dependence_bound(r.measured_neighborhood, to_double(r.sigma2),
                                                  to_double(sums.a), to_double(sums.b));
  r.kolmogorov_measured = kolmogorov_from_wasserstein(r.wasserstein_measured);
  return r;
}

struct HistogramBin {
  double left = 0;
  double right = 0;
  long count = 0;
};

struct CltReport {
  int n = 0;
  int k = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  int shards = 1;
  double ks_stat = 0;
  double emp_mean = 0;
  double emp_var = 0;
  Rational mu;
  Rational sigma2;
  double dw_bound = 0;
  double dk_bound = 0;
  std::vector<HistogramBin> histogram;  // one bin per observed value of C_{n,k}
};

/// Draws C_{n,k} for `count` uniform b2-regular permutations: a uniform (n-1)-bit cut
/// word is a uniform composition, mapped to its permutation through the bijection.
inline std::vector<int> sample_k_cycle_counts(int n, int k, long count, std::uint64_t seed,
                                              std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<std::uint64_t> words(static_cast<std::size_t>(std::max(1, (n - 1 + 63) / 64)));
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long s = 0; s < count; ++s) {
    for (auto& w : words) w = rng();
    const auto perm = composition_to_perm(composition_from_cut_words(n, words));
    out.push_back(count_k_cycles(perm, k));
  }
  return out;
}

/// Empirical check of the normal limit for C_{n,k}. Shard s draws its share of the
/// samples from stream s of the master seed; results depend only on (seed, shards).
inline CltReport clt_empirical_test(int n, int k, long samples, std::uint64_t seed, int shards = 1) {
  if (k < 1 || n < k + 2) throw invalid_input("stein: CLT test needs n >= k + 2");
  if (samples < 1000) throw invalid_input("stein: CLT test needs at least 1000 samples");
  if (shards < 1) throw invalid_input("stein: shard count must be >= 1");

  std::vector<std::vector<int>> parts(static_cast<std::size_t>(shards));
  {
    std::vector<std::jthread> workers;
    for (int s = 0; s < shards; ++s) {
      const long share = samples / shards + (s < samples % shards ? 1 : 0);
      auto job = [&parts, n, k, share, seed, s] {
        parts[static_cast<std::size_t>(s)] = sample_k_cycle_counts(n, k, share, seed, static_cast<std::uint64_t>(s));
      };
      if (shards == 1) {
        job();
      } else {
        workers.emplace_back(job);
      }
    }
  }

  CltReport r;
  r.n = n;
  r.k = k;
  r.samples = samples;
  r.seed = seed;
  r.shards = shards;
  r.mu = mean_k_cycles(n, k);
  r.sigma2 = variance_k_cycles(n, k);
  const double mu = to_double(r.mu);
  const double sigma = std::sqrt(to_double(r.sigma2));

  std::map<int, long> freq;
  double sum = 0;
  for (const auto& part : parts)
    for (int c : part) {
      ++freq[c];
      sum += c;
    }
  const auto total = static_cast<double>(samples);
  r.emp_mean = sum / total;
  double ss = 0;
  for (auto [c, f] : freq) ss += static_cast<double>(f) * (c - r.emp_mean) * (c - r.emp_mean);
  r.emp_var = ss / (total - 1);

  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(samples));
  for (auto [c, f] : freq) {
    const double v = (c - mu) / sigma;
    z.insert(z.end(), static_cast<std::size_t>(f), v);
    r.histogram.push_back({(c - 0.5 - mu) / sigma, (c + 0.5 - mu) / sigma, f});
  }
  r.ks_stat = ks_statistic_normal(z);
  r.dw_bound = wasserstein_bound(n, k);
  r.dk_bound = kolmogorov_from_wasserstein(r.dw_bound);
  return r;
}

struct SeparationRow {
  int distance = 0;  // min |c - d| over elements; 0 when the cycles share an element
  long pairs = 0;
  long independent = 0;
};

struct SeparationProbeReport {
  int n = 0;
  int r = 0;
  BigInt permutations;
  std::size_t distinct_cycles = 0;
  std::vector<SeparationRow> rows;
  // Every pair at distance > r-1 is independent and every pair at distance <= r-1 is not.
  bool consistent = false;
};

/// Exhaustive look at pairwise independence of cycle indicators in S_b, grouped by the
/// element distance of the two cycles. Evidence only.
inline SeparationProbeReport separation_probe(const RestrictionVector& b, int r) {
  SeparationProbeReport rep;
  rep.n = static_cast<int>(b.size());
  rep.r = r;

  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> elements;
  std::vector<long> single;
  std::map<std::pair<int, int>, long> both;
  long total = 0;

  for_each_b_regular(b, [&](const Permutation& p) {
    ++total;
    std::vector<int> present;
    for (auto& cyc : p.cycles()) {
      auto [it, fresh] = ids.try_emplace(cyc, static_cast<int>(elements.size()));
      if (fresh) {
        auto sorted = cyc;
        std::sort(sorted.begin(), sorted.end());
        elements.push_back(std::move(sorted));
        single.push_back(0);
      }
      ++single[static_cast<std::size_t>(it->second)];
      present.push_back(it->second);
    }
    std::sort(present.begin(), present.end());
    for (std::size_t x = 0; x < present.size(); ++x)
      for (std::size_t y = x + 1; y < present.size(); ++y) ++both[{present[x], present[y]}];
    return true;
  });

  rep.permutations = total;
  rep.distinct_cycles = elements.size();
  std::map<int, SeparationRow> rows;
  const int m = static_cast<int>(elements.size());
  for (int x = 0; x < m; ++x)
    for (int y = x + 1; y < m; ++y) {
      int dist = rep.n;
      for (int ex : elements[static_cast<std::size_t>(x)])
        for (int ey : elements[static_cast<std::size_t>(y)]) dist = std::min(dist, std::abs(ex - ey));
      const auto it = both.find({x, y});
      const long joint = it == both.end() ? 0 : it->second;
      const bool indep = static_cast<__int128>(joint) * total ==
                         static_cast<__int128>(single[static_cast<std::size_t>(x)]) * single[static_cast<std::size_t>(y)];
      auto& row = rows[dist];
      row.distance = dist;
      ++row.pairs;
      row.independent += indep ? 1 : 0;
    }
  rep.consistent = true;
  for (auto& [d, row] : rows) {
    rep.rows.push_back(row);
    const bool separated = d > r - 1;
    if (separated && row.independent != row.pairs) rep.consistent = false;
    if (!separated && row.independent != 0) rep.consistent = false;
  }
  return rep;
}

}  // namespace rperm
