// rperm: counting, sampling, bijection, moments and normal-approximation bounds for
// b-regular permutations.
//
//   rperm count b2:20
//   rperm moments --n 10 --k 1:4
//   rperm clt --n 2000 --k 1 --samples 100000 --seed 7
//   rperm verify quick
//
// Exit codes: 0 success, 1 usage error, 2 verification failure, 3 resource cap exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rperm/rperm.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitCap = 3;

struct RunConfig {
  std::string command;
  std::string target;  // b-spec, composition, permutation or verify level
  std::string direction;
  std::string k_range = "1";
  std::string method;
  int n = 0;
  int r = 3;
  long samples = 100000;
  std::uint64_t seed = 20261015;
  int shards = 1;
  std::string cap;
  std::string out;
  std::string format;  // empty: plain text for count, kv elsewhere
};

// Prints "# rperm <version> <command> <args...>" to stderr so every run can be replayed.
void print_invocation(int argc, char** argv) {
  std::cerr << "# rperm " << rperm::kVersion;
  for (int i = 1; i < argc; ++i) std::cerr << ' ' << argv[i];
  std::cerr << '\n';
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw rperm::invalid_input("cli: cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void put_meta(rperm::KvWriter& kv, const RunConfig& cfg) {
  kv.put("command", cfg.command).put("version", rperm::kVersion);
}

std::pair<int, int> parse_k_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int k = rperm::parse_int_list(text).at(0);
    return {k, k};
  }
  return {rperm::parse_int_list(text.substr(0, colon)).at(0), rperm::parse_int_list(text.substr(colon + 1)).at(0)};
}

int cmd_count(const RunConfig& cfg) {
  const auto b = rperm::parse_bspec(cfg.target);
  rperm::BigInt value;
  const std::string method = cfg.method.empty() ? "formula" : cfg.method;
  if (method == "formula") {
    value = rperm::count_b_regular(b);
  } else if (method == "ryser") {
    const std::size_t cap = cfg.cap.empty() ? rperm::kDefaultRyserCap : std::stoul(cfg.cap);
    value = rperm::permanent_ryser(rperm::matrix_from_vector(b), cap);
  } else if (method == "enumerate") {
    const std::size_t cap = cfg.cap.empty() ? rperm::kDefaultEnumerateCap : std::stoul(cfg.cap);
    value = rperm::permanent_enumerate(rperm::matrix_from_vector(b), cap);
  } else {
    throw rperm::invalid_input("cli: unknown count method '" + method + "'");
  }
  Output out(cfg.out);
  if (cfg.format == "kv") {
    rperm::KvWriter kv(out.stream());
    put_meta(kv, cfg);
    kv.put("b", rperm::join_ints(b.entries())).put("n", b.size()).put("method", method).put("count", value);
  } else {
    out.stream() << value << '\n';
  }
  return 0;
}

int cmd_fixed(const RunConfig& cfg) {
  const auto b = rperm::parse_bspec(cfg.target);
  const auto m = rperm::fixed_point_moments(b);
  Output out(cfg.out);
  if (cfg.format == "csv") {
    rperm::CsvWriter csv(out.stream(), {"n", "mean_num", "mean_den", "var_num", "var_den"});
    csv.row({std::to_string(b.size()), rperm::numerator_of(m.mean).str(), rperm::denominator_of(m.mean).str(),
             rperm::numerator_of(m.variance).str(), rperm::denominator_of(m.variance).str()});
  } else {
    rperm::KvWriter kv(out.stream());
    put_meta(kv, cfg);
    kv.put("b", rperm::join_ints(b.entries()))
        .put("n", b.size())
        .put("count", rperm::count_b_regular(b))
        .put("fixed_point_mean", rperm::to_fraction_string(m.mean))
        .put("fixed_point_variance", rperm::to_fraction_string(m.variance));
  }
  return 0;
}

int cmd_moments(const RunConfig& cfg) {
  if (cfg.n < 1) throw rperm::invalid_input("cli: --n must be >= 1");
  auto [k_lo, k_hi] = parse_k_range(cfg.k_range);
  if (k_lo < 1 || k_hi > cfg.n || k_lo > k_hi) throw rperm::invalid_input("cli: need 1 <= k <= n");
  const std::string method = cfg.method.empty() ? "closed" : cfg.method;
  if (method != "closed" && method != "series") throw rperm::invalid_input("cli: --method must be closed or series");
  Output out(cfg.out);
  rperm::CsvWriter csv(out.stream(), {"n", "k", "mean_num", "mean_den", "var_num", "var_den", "ff_num", "ff_den"});
  for (int k = k_lo; k <= k_hi; ++k) {
    const auto m = method == "closed" ? rperm::closed_form_moments(cfg.n, k) : rperm::series_moments(cfg.n, k);
    csv.row({std::to_string(cfg.n), std::to_string(k), rperm::numerator_of(m.mean).str(),
             rperm::denominator_of(m.mean).str(), rperm::numerator_of(m.variance).str(),
             rperm::denominator_of(m.variance).str(), rperm::numerator_of(m.second_falling).str(),
             rperm::denominator_of(m.second_falling).str()});
  }
  return 0;
}

int cmd_bound(const RunConfig& cfg) {
  const int k = parse_k_range(cfg.k_range).first;
  const auto r = rperm::stein_bound(cfg.n, k);
  Output out(cfg.out);
  rperm::KvWriter kv(out.stream());
  out.stream().precision(10);
  put_meta(kv, cfg);
  kv.put("n", r.n)
      .put("k", r.k)
      .put("D", r.neighborhood)
      .put("sigma2", rperm::to_fraction_string(r.sigma2))
      .put("sigma", r.sigma)
      .put("a_nk", rperm::to_fraction_string(r.a_nk))
      .put("b_nk", rperm::to_fraction_string(r.b_nk))
      .put("dw_bound", r.wasserstein)
      .put("dk_bound", r.kolmogorov)
      .put("measured_D", r.measured_neighborhood)
      .put("measured_D_n_probe", r.n_probe)
      .put("dw_bound_measured_D", r.wasserstein_measured)
      .put("dk_bound_measured_D", r.kolmogorov_measured);
  return 0;
}

int cmd_dependence(const RunConfig& cfg) {
  const int k = parse_k_range(cfg.k_range).first;
  const auto r = rperm::dependence_threshold(cfg.n, k);
  Output out(cfg.out);
  rperm::KvWriter kv(out.stream());
  put_meta(kv, cfg);
  kv.put("n", r.n)
      .put("k", r.k)
      .put("threshold", r.threshold)
      .put("threshold_mid_pairs", r.threshold_mid)
      .put("threshold_endpoint_pairs", r.threshold_endpoint)
      .put("witness_i", r.witness_i)
      .put("witness_j", r.witness_j)
      .put("max_neighborhood", r.max_neighborhood)
      .put("independent_iff_distance_ge_k_plus_1", r.matches_at_least_k_plus_1 ? "yes" : "no")
      .put("independent_iff_distance_gt_k_plus_1", r.matches_greater_than_k_plus_1 ? "yes" : "no");
  return 0;
}

int cmd_clt(const RunConfig& cfg) {
  const int k = parse_k_range(cfg.k_range).first;
  const auto r = rperm::clt_empirical_test(cfg.n, k, cfg.samples, cfg.seed, cfg.shards);
  Output out(cfg.out);
  if (cfg.format == "csv") {
    rperm::CsvWriter csv(out.stream(), {"bin_left", "bin_right", "count"});
    for (const auto& bin : r.histogram) {
      std::ostringstream l, h;
      l.precision(10);
      h.precision(10);
      l << bin.left;
      h << bin.right;
      csv.row({l.str(), h.str(), std::to_string(bin.count)});
    }
    return 0;
  }
  rperm::KvWriter kv(out.stream());
  out.stream().precision(10);
  put_meta(kv, cfg);
  kv.put("n", r.n)
      .put("k", r.k)
      .put("samples", r.samples)
      .put("seed", r.seed)
      .put("shards", r.shards)
      .put("ks_stat", r.ks_stat)
      .put("emp_mean", r.emp_mean)
      .put("emp_var", r.emp_var)
      .put("mu", rperm::to_fraction_string(r.mu))
      .put("sigma2", rperm::to_fraction_string(r.sigma2))
      .put("dw_bound", r.dw_bound)
      .put("dk_bound", r.dk_bound);
  return 0;
}

int cmd_sample(const RunConfig& cfg) {
  const auto b = rperm::parse_bspec(cfg.target);
  std::mt19937_64 rng(cfg.seed);
  Output out(cfg.out);
  rperm::CsvWriter csv(out.stream(), {"sample", "images"});
  for (long s = 0; s < cfg.samples; ++s)
    csv.row({std::to_string(s + 1), rperm::format_permutation(rperm::sample_b_regular(b, rng))});
  return 0;
}

int cmd_compose(const RunConfig& cfg) {
  Output out(cfg.out);
  if (cfg.direction == "to-comp") {
    out.stream() << rperm::format_composition(rperm::perm_to_composition(rperm::parse_permutation(cfg.target)))
                 << '\n';
  } else if (cfg.direction == "to-perm") {
    out.stream() << rperm::format_permutation(rperm::composition_to_perm(rperm::parse_composition(cfg.target)))
                 << '\n';
  } else {
    throw rperm::invalid_input("cli: compose direction must be to-comp or to-perm");
  }
  return 0;
}

int cmd_probe(const RunConfig& cfg) {
  const auto b = rperm::make_br(cfg.r, cfg.n);
  const auto rep = rperm::separation_probe(b, cfg.r);
  Output out(cfg.out);
  if (cfg.format == "csv") {
    rperm::CsvWriter csv(out.stream(), {"distance", "pairs", "independent"});
    for (const auto& row : rep.rows)
      csv.row({std::to_string(row.distance), std::to_string(row.pairs), std::to_string(row.independent)});
    return 0;
  }
  rperm::KvWriter kv(out.stream());
  put_meta(kv, cfg);
  kv.put("r", rep.r).put("n", rep.n).put("permutations", rep.permutations).put("distinct_cycles", rep.distinct_cycles);
  for (const auto& row : rep.rows)
    kv.put("distance_" + std::to_string(row.distance),
           std::to_string(row.independent) + "/" + std::to_string(row.pairs) + " independent");
  kv.put("consistent_with_r_minus_1_separation", rep.consistent ? "yes" : "no");
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  rperm::VerifyLevel level;
  if (cfg.target == "quick") {
    level = rperm::VerifyLevel::quick;
  } else if (cfg.target == "full") {
    level = rperm::VerifyLevel::full;
  } else {
    throw rperm::invalid_input("cli: verify level must be quick or full");
  }
  const auto rep = rperm::run_verification(level);
  Output out(cfg.out);
  auto& os = out.stream();
  os << "level=" << cfg.target << '\n' << "assertions=" << rep.assertions << '\n';
  for (const auto& [op, n] : rep.per_op) os << "op." << op << '=' << n << '\n';
  for (const auto& note : rep.notes) os << "note=" << note << '\n';
  for (const auto& op : rep.uncovered) os << "uncovered=" << op << '\n';
  if (rep.first_failure) os << "counterexample=" << *rep.first_failure << '\n';
  os << "result=" << (rep.ok() ? "pass" : "fail") << '\n';
  return rep.ok() ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact combinatorics for permutations with restricted positions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rperm::kVersion));
  RunConfig cfg;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Write output to this file instead of stdout");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "kv"}));
  };

  auto* count = app.add_subcommand("count", "Number of b-regular permutations");
  count->add_option("bspec", cfg.target, "1,1,2,4,4 | b2:n | b3:n | br:r,n")->required();
  count->add_option("--method", cfg.method, "formula | ryser | enumerate");
  count->add_option("--cap", cfg.cap, "Dimension cap for ryser/enumerate");
  add_common(count);

  auto* fixed = app.add_subcommand("fixed", "Exact mean and variance of the number of fixed points");
  fixed->add_option("bspec", cfg.target)->required();
  add_common(fixed);

  auto* moments = app.add_subcommand("moments", "k-cycle moments of b2-regular permutations (CSV)");
  moments->add_option("--n", cfg.n)->required();
  moments->add_option("--k", cfg.k_range, "k or k_lo:k_hi");
  moments->add_option("--method", cfg.method, "closed | series");
  add_common(moments);

  auto* bound = app.add_subcommand("bound", "Wasserstein and Kolmogorov bounds for C_{n,k}");
  bound->add_option("--n", cfg.n)->required();
  bound->add_option("--k", cfg.k_range)->required();
  add_common(bound);

  auto* dependence = app.add_subcommand("dependence", "Exact dependence scan of k-cycle indicators");
  dependence->add_option("--n", cfg.n)->required();
  dependence->add_option("--k", cfg.k_range)->required();
  add_common(dependence);

  auto* clt = app.add_subcommand("clt", "Empirical normal-approximation test (kv report, or csv histogram)");
  clt->add_option("--n", cfg.n)->required();
  clt->add_option("--k", cfg.k_range)->required();
  clt->add_option("--samples", cfg.samples);
  clt->add_option("--seed", cfg.seed);
  clt->add_option("--shards", cfg.shards);
  add_common(clt);

  auto* sample = app.add_subcommand("sample", "Uniform b-regular permutations (CSV)");
  sample->add_option("bspec", cfg.target)->required();
  sample->add_option("--samples", cfg.samples);
  sample->add_option("--seed", cfg.seed);
  add_common(sample);

  auto* compose = app.add_subcommand("compose", "b2-regular permutation <-> composition");
  compose->add_option("direction", cfg.direction, "to-comp | to-perm")->required();
  compose->add_option("input", cfg.target, "comma-separated images or parts")->required();
  add_common(compose);

  auto* probe = app.add_subcommand("probe", "Pairwise cycle-indicator independence in S_{b_r}");
  probe->add_option("--r", cfg.r);
  probe->add_option("--n", cfg.n)->required();
  add_common(probe);

  auto* verify = app.add_subcommand("verify", "Cross-verification suite");
  verify->add_option("level", cfg.target, "quick | full")->required();
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (cfg.format.empty()) cfg.format = cfg.command == "count" ? "text" : "kv";
  if (cfg.command == "sample" && chosen->count("--samples") == 0) cfg.samples = 10;
  print_invocation(argc, argv);

  try {
    if (cfg.command == "count") return cmd_count(cfg);
    if (cfg.command == "fixed") return cmd_fixed(cfg);
    if (cfg.command == "moments") return cmd_moments(cfg);
    if (cfg.command == "bound") return cmd_bound(cfg);
    if (cfg.command == "dependence") return cmd_dependence(cfg);
    if (cfg.command == "clt") return cmd_clt(cfg);
    if (cfg.command == "sample") return cmd_sample(cfg);
    if (cfg.command == "compose") return cmd_compose(cfg);
    if (cfg.command == "probe") return cmd_probe(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
  } catch (const rperm::cap_exceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const rperm::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
