#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "core.hpp"

namespace rperm {

// Standard normal distribution function. std::erfc is accurate to a few ulp,
// far below the 1e-10 needed here.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Exact one-sample Kolmogorov-Smirnov statistic sup_t |F_N(t) - Phi(t)| for sorted data.
/// Ties are handled: both F_N(t-) and F_N(t) are compared at every jump.
inline double ks_statistic_normal(std::span<const double> sorted) {
  if (sorted.empty()) throw invalid_input("stats: KS statistic needs at least one sample");
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Upper tail P(X >= stat) for X ~ chi-square with `df` degrees of freedom.
inline double chi_square_p_value(double stat, double df) {
  if (df <= 0) throw invalid_input("stats: degrees of freedom must be positive");
  if (stat <= 0) return 1.0;
  return boost::math::gamma_q(df / 2.0, stat / 2.0);
}

/// Pearson statistic against equal expected counts.
inline double chi_square_uniform(std::span<const long> observed) {
  if (observed.empty()) throw invalid_input("stats: no categories");
  double total = 0;
  for (long o : observed) total += static_cast<double>(o);
  const double expected = total / static_cast<double>(observed.size());
  double stat = 0;
  for (long o : observed) {
    const double diff = static_cast<double>(o) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

}  // namespace rperm
