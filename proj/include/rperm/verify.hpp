#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bijection.hpp"
#include "bregular.hpp"
#include "core.hpp"
#include "cycindex.hpp"
#include "numeric.hpp"
#include "permanent.hpp"
#include "stein.hpp"

namespace rperm {

enum class VerifyLevel { quick, full };

struct VerifyReport {
  std::size_t assertions = 0;
  std::map<std::string, std::size_t> per_op;
  std::vector<std::string> uncovered;
  std::optional<std::string> first_failure;
  std::vector<std::string> notes;

  bool ok() const { return !first_failure && uncovered.empty(); }
};

// Every operation the suite must touch at least once.
inline const std::vector<std::string>& verify_checklist() {
  static const std::vector<std::string> ops = {
      "matrix_from_vector", "cycle_type",
      "permanent_ryser", "permanent_enumerate", "reduce_vector_on_fixed_point", "count_with_fixed_points",
      "count_b_regular", "enumerate_b_regular", "sample_b_regular", "fixed_point_mean",
      "fixed_point_variance", "count_k_cycles",
      "record_positions", "perm_to_composition", "composition_to_perm", "enumerate_compositions",
      "total_k_parts",
      "build_tracked_cycle_index", "extract_factorial_moment", "mean_k_cycles", "variance_k_cycles",
      "second_falling_moment",
      "indicator_probability", "joint_indicator_probability", "dependence_threshold",
      "shifted_moment_sums", "wasserstein_bound", "kolmogorov_from_wasserstein", "clt_empirical_test",
      "separation_probe",
  };
  return ops;
}

namespace detail {

class Checker {
 public:
  explicit Checker(VerifyReport& r) : r_(r) {}

  // Records one assertion; on the first failure stores `describe()` as the counterexample.
  template <typename Describe>
  void expect(bool cond, const std::string& op, Describe&& describe) {
    ++r_.assertions;
    ++r_.per_op[op];
    if (!cond && !r_.first_failure) r_.first_failure = op + ": " + describe();
  }

  void note(std::string s) { r_.notes.push_back(std::move(s)); }
  bool failed() const { return r_.first_failure.has_value(); }

 private:
  VerifyReport& r_;
};

// All valid restriction vectors of length n.
inline void for_each_restriction_vector(int n, const std::function<void(const RestrictionVector&)>& fn) {
  std::vector<int> b(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int i, int lo) {
    if (i > n) {
      fn(RestrictionVector(b));
      return;
    }
    for (int v = lo; v <= i; ++v) {
      b[static_cast<std::size_t>(i - 1)] = v;
      rec(i + 1, v);
    }
  };
  rec(1, 1);
}

inline std::string str(const RestrictionVector& b) {
  std::string s = "b=[";
  for (std::size_t i = 1; i <= b.size(); ++i) s += (i > 1 ? "," : "") + std::to_string(b(i));
  return s + "]";
}

inline std::string str(const Permutation& p) {
  std::string s = "pi=[";
  for (std::size_t i = 1; i <= p.size(); ++i) s += (i > 1 ? "," : "") + std::to_string(p(i));
  return s + "]";
}

// Mean and variance of the fixed-point count by exhaustive enumeration.
inline MomentPair enumerated_fixed_point_moments(const RestrictionVector& b) {
  BigInt count = 0, s1 = 0, s2 = 0;
  for_each_b_regular(b, [&](const Permutation& p) {
    const int c = count_k_cycles(p, 1);
    ++count;
    s1 += c;
    s2 += c * c;
    return true;
  });
  const Rational mean(s1, count);
  return {mean, Rational(s2, count) - mean * mean};
}

inline void check_core_and_permanent(Checker& ck, int max_n) {
  for (int n = 1; n <= max_n && !ck.failed(); ++n) {
    for_each_restriction_vector(n, [&](const RestrictionVector& b) {
      if (ck.failed()) return;
      const auto m = matrix_from_vector(b);
      std::size_t expected_ones = 0;
      for (std::size_t i = 1; i <= b.size(); ++i) expected_ones += b.size() - static_cast<std::size_t>(b(i)) + 1;
      ck.expect(m.total_allowed() == expected_ones, "matrix_from_vector", [&] { return str(b); });

      const BigInt formula = count_b_regular(b);
      const BigInt ryser = permanent_ryser(m);
      ck.expect(ryser == formula, "permanent_ryser", [&] { return str(b) + " ryser=" + ryser.str(); });
      ck.expect(permanent_enumerate(m) == ryser, "permanent_enumerate", [&] { return str(b); });

      const auto all = enumerate_b_regular(b);
      ck.expect(BigInt(all.size()) == formula, "enumerate_b_regular", [&] { return str(b); });
      ck.expect(formula >= 1, "count_b_regular", [&] { return str(b); });

      for (std::size_t i = 1; i <= b.size(); ++i) {
        long fixing = 0;
        for (const auto& p : all) fixing += p(i) == static_cast<int>(i) ? 1 : 0;
        const BigInt via_reduction = count_b_regular(reduce_vector_on_fixed_point(b, i));
        ck.expect(via_reduction == fixing, "reduce_vector_on_fixed_point",
                  [&] { return str(b) + " i=" + std::to_string(i); });
        ck.expect(count_with_fixed_points(b, {i}) == count_fixing_one_closed_form(b, i),
                  "count_with_fixed_points", [&] { return str(b) + " closed form, i=" + std::to_string(i); });
        for (std::size_t j = i + 1; j <= b.size(); ++j) {
          long both = 0;
          for (const auto& p : all) both += (p(i) == static_cast<int>(i) && p(j) == static_cast<int>(j)) ? 1 : 0;
          const BigInt ij = count_with_fixed_points(b, {i, j});
          const BigInt ji = count_with_fixed_points(b, {j, i});
          ck.expect(ij == both && ji == both && count_fixing_two_closed_form(b, i, j) == both,
                    "count_with_fixed_points",
                    [&] { return str(b) + " pair " + std::to_string(i) + "," + std::to_string(j); });
        }
      }
      for (const auto& p : all) {
        const auto ct = cycle_type(p);
        ck.expect(ct.degree() == n && Permutation::from_cycles(p.size(), p.cycles()) == p, "cycle_type",
                  [&] { return str(p); });
        if (ck.failed()) return;
      }
    });
  }
}

inline void check_fixed_point_moments(Checker& ck, int all_b_n, int family_n) {
  const auto check = [&](const RestrictionVector& b) {
    const auto oracle = enumerated_fixed_point_moments(b);
    const Rational mean = fixed_point_mean(b);
    const Rational var = fixed_point_variance(b);
    ck.expect(mean == oracle.mean, "fixed_point_mean", [&] { return str(b) + " mean=" + to_fraction_string(mean); });
    ck.expect(var == oracle.variance, "fixed_point_variance",
              [&] { return str(b) + " var=" + to_fraction_string(var); });
  };
  for (int n = 1; n <= all_b_n && !ck.failed(); ++n) for_each_restriction_vector(n, check);
  for (int n = 2; n <= family_n && !ck.failed(); ++n) {
    check(make_b2(n));
    check(make_b3(n));
    ck.expect(fixed_point_mean(make_b2(n)) == Rational(n + 2, 4), "fixed_point_mean",
              [&] { return "b2 mean (n+2)/4 at n=" + std::to_string(n); });
  }
}

inline void check_b2_structure(Checker& ck, int max_n) {
  for (int n = 1; n <= max_n && !ck.failed(); ++n) {
    std::set<Composition> images;
    for_each_b_regular(make_b2(n), [&](const Permutation& p) {
      // Every cycle is a block m-k+1..m with pi(m-k+1) = m and pi(t) = t-1 above it.
      for (const auto& cyc : p.cycles()) {
        const int lo = cyc.front();
        const int hi = lo + static_cast<int>(cyc.size()) - 1;
        bool shaped = p(static_cast<std::size_t>(lo)) == hi;
        for (int t = lo + 1; t <= hi; ++t) shaped = shaped && p(static_cast<std::size_t>(t)) == t - 1;
        ck.expect(shaped, "count_k_cycles", [&] { return "cycle shape " + str(p); });
      }
      const auto rec = record_positions(p);
      ck.expect(!rec.positions.empty() && rec.positions.front() == 1, "record_positions", [&] { return str(p); });
      const auto c = perm_to_composition(p);
      ck.expect(composition_to_perm(c) == p, "composition_to_perm", [&] { return str(p); });
      for (int k = 1; k <= n; ++k)
        ck.expect(count_k_cycles(p, k) == c.count_parts(k), "perm_to_composition",
                  [&] { return str(p) + " k=" + std::to_string(k); });
      images.insert(c);
      return !ck.failed();
    });
    const auto comps = enumerate_compositions(n);
    ck.expect(comps.size() == (std::size_t{1} << (n - 1)) &&
                  std::set<Composition>(comps.begin(), comps.end()) == images,
              "enumerate_compositions", [&] { return "image mismatch at n=" + std::to_string(n); });
    for (const auto& c : comps)
      ck.expect(perm_to_composition(composition_to_perm(c)) == c, "composition_to_perm",
                [&] { return "reverse round trip at n=" + std::to_string(n); });

    for (int k = 1; k <= n; ++k) {
      long parts = 0;
      for (const auto& c : comps) parts += c.count_parts(k);
      ck.expect(total_k_parts(n, k) == parts, "total_k_parts",
                [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k); });
      for (int m = 1; m <= 5; ++m)
        ck.expect(total_k_parts(n, k) == total_k_parts(n + m, k + m), "total_k_parts",
                  [&] { return "shift n=" + std::to_string(n) + " k=" + std::to_string(k); });
    }
  }
}

inline void check_sampler(Checker& ck, int max_n) {
  std::mt19937_64 rng(20261015);
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& b : {make_b2(n), make_b3(n), make_unrestricted_vector(n)}) {
      for (int s = 0; s < 50; ++s) {
        const auto p = sample_b_regular(b, rng);
        ck.expect(p.satisfies(b), "sample_b_regular", [&] { return str(b) + " gave " + str(p); });
      }
    }
    const auto p = sample_b_regular(make_identity_vector(n), rng);
    ck.expect(p == Permutation::identity(static_cast<std::size_t>(n)), "sample_b_regular",
              [&] { return "identity vector gave " + str(p); });
  }
}

inline void check_cycle_index(Checker& ck, int oracle_n, int closed_n) {
  for (int k = 1; k <= closed_n && !ck.failed(); ++k) {
    const auto g = build_tracked_cycle_index(static_cast<std::size_t>(closed_n), static_cast<std::size_t>(k), 3);
    for (int n = 1; n <= closed_n; ++n) {
      ck.expect(g.at(static_cast<std::size_t>(n), 0) == 1, "build_tracked_cycle_index",
                [&] { return "G(u,1) coefficient at n=" + std::to_string(n); });
      if (k > n) continue;
      const Rational mean = extract_factorial_moment(g, static_cast<std::size_t>(n), 1);
      const Rational ff = extract_factorial_moment(g, static_cast<std::size_t>(n), 2);
      const auto cf = closed_form_moments(n, k);
      ck.expect(cf.variance == cf.second_falling + cf.mean - cf.mean * cf.mean, "variance_k_cycles",
                [&] { return "identity at n=" + std::to_string(n) + " k=" + std::to_string(k); });
      // Closed forms hold for k <= n-1 (mean) and n >= 2k+1 (second falling moment).
      if (k <= n - 1)
        ck.expect(mean == cf.mean, "mean_k_cycles",
                  [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k); });
      if (n >= 2 * k + 1)
        ck.expect(ff == cf.second_falling, "second_falling_moment",
                  [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k); });
    }
  }
  for (int n = 1; n <= oracle_n && !ck.failed(); ++n) {
    const auto comps = enumerate_compositions(n);
    for (int k = 1; k <= n; ++k) {
      BigInt s1 = 0, s2 = 0;
      for (const auto& c : comps) {
        const int x = c.count_parts(k);
        s1 += x;
        s2 += x * (x - 1);
      }
      const auto total = composition_count(n);
      ck.expect(extract_factorial_moment(static_cast<std::size_t>(n), static_cast<std::size_t>(k), 1) ==
                        Rational(s1, total) &&
                    extract_factorial_moment(static_cast<std::size_t>(n), static_cast<std::size_t>(k), 2) ==
                        Rational(s2, total),
                "extract_factorial_moment", [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k); });
      if (k >= n - 1 && mean_k_cycles(n, k) != Rational(s1, total))
        ck.note("closed-form mean differs from enumeration at boundary n=" + std::to_string(n) +
                " k=" + std::to_string(k) + ": closed " + to_fraction_string(mean_k_cycles(n, k)) + " vs true " +
                to_fraction_string(Rational(s1, total)));
    }
  }
}

inline void check_indicators(Checker& ck, int oracle_n, int sum_n) {
  for (int n = 1; n <= oracle_n && !ck.failed(); ++n) {
    const auto comps = enumerate_compositions(n);
    for (int k = 1; k <= std::min(n, 5); ++k) {
      const int last = n - k + 1;
      // occ[i] = number of compositions with a k-part starting at position i.
      std::vector<long> occ(static_cast<std::size_t>(last) + 1, 0);
      std::map<std::pair<int, int>, long> both;
      for (const auto& c : comps) {
        std::vector<int> starts;
        int pos = 1;
        for (int part : c.parts()) {
          if (part == k) starts.push_back(pos);
          pos += part;
        }
        for (std::size_t a = 0; a < starts.size(); ++a) {
          ++occ[static_cast<std::size_t>(starts[a])];
          for (std::size_t b2 = a + 1; b2 < starts.size(); ++b2) ++both[{starts[a], starts[b2]}];
        }
      }
      const auto total = composition_count(n);
      for (int i = 1; i <= last; ++i) {
        ck.expect(indicator_probability(n, k, i) == Rational(occ[static_cast<std::size_t>(i)], total),
                  "indicator_probability",
                  [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k) + " i=" + std::to_string(i); });
        for (int j = i + 1; j <= last; ++j) {
          const auto it = both.find({i, j});
          const long cnt = it == both.end() ? 0 : it->second;
          ck.expect(joint_indicator_probability(n, k, i, j) == Rational(cnt, total), "joint_indicator_probability",
                    [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k) + " i=" + std::to_string(i) +
                                 " j=" + std::to_string(j); });
        }
      }
    }
  }
  for (int n = 3; n <= sum_n && !ck.failed(); ++n)
    for (int k = 1; k <= n - 2; ++k)
      ck.expect(indicator_law(n, k).total() == mean_k_cycles(n, k), "indicator_probability",
                [&] { return "sum law n=" + std::to_string(n) + " k=" + std::to_string(k); });
}

inline void check_stein(Checker& ck, int max_k) {
  for (int k = 1; k <= max_k && !ck.failed(); ++k) {
    const int n = 2 * k + 8;
    const auto dep = dependence_threshold(n, k);
    ck.expect(dep.threshold == k + 1 && dep.threshold_mid == k + 1, "dependence_threshold",
              [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k) + " threshold=" +
                           std::to_string(dep.threshold); });
    const auto s = shifted_moment_sums(n, k);
    ck.expect(s.endpoint_third == two_point_abs_moment(inv_pow2(static_cast<unsigned>(k)), 3) &&
                  s.mid_third == two_point_abs_moment(inv_pow2(static_cast<unsigned>(k + 1)), 3) &&
                  s.endpoint_fourth == two_point_abs_moment(inv_pow2(static_cast<unsigned>(k)), 4) &&
                  s.mid_fourth == two_point_abs_moment(inv_pow2(static_cast<unsigned>(k + 1)), 4),
              "shifted_moment_sums", [&] { return "k=" + std::to_string(k); });
    const double w1 = wasserstein_bound(1000, k);
    const double w2 = wasserstein_bound(4000, k);
    ck.expect(w1 > 0 && w2 > 0 && w2 < w1 / 1.9, "wasserstein_bound", [&] { return "decay k=" + std::to_string(k); });
    const double dk = kolmogorov_from_wasserstein(w2);
    ck.expect(std::abs(dk * dk - 2.0 * w2 / std::sqrt(2.0 * std::numbers::pi)) < 1e-12,
              "kolmogorov_from_wasserstein", [&] { return "k=" + std::to_string(k); });
  }
  ck.expect(shifted_moment_sums(10, 1).a == Rational(19, 16) && shifted_moment_sums(10, 1).b == Rational(25, 32),
            "shifted_moment_sums", [] { return "a_{10,1}, b_{10,1}"; });
}

}  // namespace detail

/// Cross-checks every module against enumeration oracles. `quick` keeps oracles at
/// n <= 8; `full` goes to n = 12..14 and adds one statistical CLT run.
inline VerifyReport run_verification(VerifyLevel level) {
  VerifyReport report;
  detail::Checker ck(report);
  const bool full = level == VerifyLevel::full;

  detail::check_core_and_permanent(ck, full ? 7 : 5);
  detail::check_fixed_point_moments(ck, full ? 7 : 5, full ? 12 : 8);
  detail::check_b2_structure(ck, full ? 14 : 8);
  detail::check_sampler(ck, full ? 12 : 8);
  detail::check_cycle_index(ck, full ? 14 : 8, 30);
  detail::check_indicators(ck, full ? 14 : 8, full ? 200 : 40);
  detail::check_stein(ck, 5);

  const int probe_n = full ? 9 : 6;
  for (int n = 3; n <= probe_n; ++n) {
    const auto probe = separation_probe(make_b3(n), 3);
    ck.expect(probe.permutations == count_b_regular(make_b3(n)), "separation_probe",
              [&] { return "b3 n=" + std::to_string(n); });
    if (n == probe_n)
      ck.note("b3 separation probe at n=" + std::to_string(n) + ": " +
              (probe.consistent ? "consistent with" : "does not match") + " the (r-1)-separation pattern");
  }

  if (full) {
    const auto clt = clt_empirical_test(2000, 1, 100000, 20261015);
    ck.expect(clt.ks_stat <= 0.02, "clt_empirical_test", [&] { return "KS=" + std::to_string(clt.ks_stat); });
  } else {
    const auto clt = clt_empirical_test(200, 1, 5000, 20261015);
    const double se = std::sqrt(to_double(clt.sigma2) / 5000.0);
    ck.expect(std::abs(clt.emp_mean - to_double(clt.mu)) <= 5 * se, "clt_empirical_test",
              [&] { return "mean=" + std::to_string(clt.emp_mean); });
  }

  for (const auto& op : verify_checklist())
    if (!report.per_op.contains(op)) report.uncovered.push_back(op);
  return report;
}

}  // namespace rperm
