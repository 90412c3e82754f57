// Command-line front end: build/verify/export balanced families, run
// approximate and exact path/cycle counts.
//
// Exit codes: 0 success, 1 usage/parse error, 2 verification failure,
// 3 construction failure, 4 budget exceeded.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bphf/bphf.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFail = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitBudget = 4;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  return os.str();
}

struct BuildArgs {
  int n = 0, k = 0;
  std::string delta_text;
  std::string method;
  std::optional<int> l;
  std::uint64_t seed = 0;
  std::string out;
  std::string provider = "derand-greedy";
};

struct CommonArgs {
  int threads = 0;
  std::uint64_t budget = 10'000'000;
};

bphf::VerifyOptions make_verify(const CommonArgs& c) {
  bphf::VerifyOptions v;
  v.subset_budget = c.budget;
  v.threads = c.threads;
  return v;
}

void print_build_line(int n, int k, std::uint64_t m, const bphf::BalanceCertificate& cert,
                      const std::string& method, bool exact) {
  std::cout << "n=" << n << " k=" << k << " M=" << m << " T=" << bphf::rat_to_string(cert.T)
            << " delta=" << bphf::rat_to_string(cert.delta) << " method=" << method
            << " verified=" << (exact ? "exact" : "analytic") << "\n";
}

int run_build(const BuildArgs& a, const CommonArgs& common) {
  using namespace bphf;
  Rat delta = parse_rational(a.delta_text);
  validate_delta(delta);
  VerifyOptions verify = make_verify(common);

  if (a.method == "random") {
    RandomBuildOptions opts;
    opts.verify = verify;
    RandomBuildResult res = [&] {
      if (!a.l || *a.l == a.k) return build_random_perfect(a.n, a.k, delta, a.seed, opts);
      if (a.k < *a.l) return build_random_splitter_high(a.n, a.k, *a.l, delta, a.seed, opts);
      if (*a.l == 2) return build_random_half_splitter(a.n, a.k, delta, a.seed, opts);
      throw parameter_error("--method random supports l == k, k < l, or l == 2; "
                            "use --method derand for other split patterns");
    }();
    write_family_file(a.out, res.certified.family, res.certified.certificate);
    print_build_line(a.n, a.k, res.certified.family.size(), res.certified.certificate, a.method,
                     true);
    return kExitOk;
  }
  if (a.method == "derand") {
    DerandResult res = (!a.l || *a.l == a.k)
                           ? build_derandomized(a.n, a.k, delta, verify)
                           : build_derandomized_splitter(a.n, a.k, *a.l, delta, verify);
    write_family_file(a.out, res.certified.family, res.certified.certificate);
    print_build_line(a.n, a.k, res.certified.family.size(), res.certified.certificate, a.method,
                     true);
    return kExitOk;
  }
  if (a.method == "code") {
    if (a.l) throw parameter_error("--method code derives its range; do not pass --l");
    auto plan = plan_code_splitter(a.n, a.k, delta);
    auto res = build_code_splitter(plan);
    bool exact = false;
    Int ops = binomial(static_cast<unsigned>(a.n), static_cast<unsigned>(a.k)) *
              Int(res.family.count_cost_hint());
    if (ops <= Int(verify.ops_budget) &&
        binomial(static_cast<unsigned>(a.n), static_cast<unsigned>(a.k)) <=
            Int(verify.subset_budget)) {
      auto rep = verify_balance(res.family, res.certificate.pattern, verify);
      if (!certificate_holds(res.certificate, rep))
        throw construction_error("code splitter failed exact verification");
      exact = true;
    }
    write_family_file(a.out, res.family, res.certificate);
    print_build_line(a.n, a.k, res.family.size(), res.certificate, a.method, exact);
    return kExitOk;
  }
  if (a.method == "lowsplit") {
    if (!a.l) throw parameter_error("--method lowsplit requires --l");
    LowSplitterOptions opts;
    opts.verify = verify;
    auto res = build_low_splitter(a.n, a.k, *a.l, delta, opts);
    write_family_file(a.out, res.certified.family, res.certified.certificate);
    print_build_line(a.n, a.k, res.certified.family.size(), res.certified.certificate, a.method,
                     res.exact_verified);
    return kExitOk;
  }
  if (a.method == "pipeline") {
    if (a.l) throw parameter_error("--method pipeline derives l; do not pass --l");
    SplitterProvider provider = a.provider == "eps-bias" ? SplitterProvider::eps_bias
                                                         : SplitterProvider::derand_greedy;
    PipelineOptions opts;
    opts.verify = verify;
    auto res = build_pipeline(plan_pipeline(a.n, a.k, delta, provider), opts);
    write_family_file(a.out, res.certified.family, res.certified.certificate);
    print_build_line(a.n, a.k, res.certified.family.size(), res.certified.certificate, a.method,
                     res.exact_verified);
    return kExitOk;
  }
  throw parameter_error("unknown method '" + a.method + "'");
}

int run_verify(const std::string& path, const CommonArgs& common) {
  using namespace bphf;
  auto loaded = read_family_file(path);
  auto rep = verify_balance(loaded.family, loaded.certificate.pattern, make_verify(common));
  bool pass = certificate_holds(loaded.certificate, rep);
  std::cout << "min=" << rep.min_count << " max=" << rep.max_count
            << " arg_min=" << join_ints(rep.arg_min) << " arg_max=" << join_ints(rep.arg_max)
            << " best_T=" << rep.best_T() << " best_delta=" << rep.best_delta() << "\n";
  std::cout << (pass ? "PASS" : "FAIL") << " T=" << rat_to_string(loaded.certificate.T)
            << " delta=" << rat_to_string(loaded.certificate.delta) << "\n";
  return pass ? kExitOk : kExitVerifyFail;
}

bphf::CertifiedFamily<bphf::FunctionFamily> obtain_family(
    const bphf::Graph& g, int k, const bphf::Rat& delta, const std::string& family_path,
    const std::string& graph_path, const CommonArgs& common) {
  using namespace bphf;
  VerifyOptions verify = make_verify(common);
  if (!family_path.empty()) {
    auto loaded = read_family_file(family_path);
    if (loaded.certificate.delta > delta)
      throw parameter_error("supplied family is certified only at delta=" +
                            rat_to_string(loaded.certificate.delta) +
                            ", weaker than the requested " + rat_to_string(delta));
    auto rep = verify_balance(loaded.family, loaded.certificate.pattern, verify);
    if (!certificate_holds(loaded.certificate, rep))
      throw construction_error("supplied family fails its own certificate");
    return loaded;
  }
  // default policy: greedy derandomized build, cached beside the graph
  std::string key = "n=" + std::to_string(g.num_vertices()) + "|k=" + std::to_string(k) +
                    "|delta=" + rat_to_string(delta) + "|method=derand|seed=0";
  std::ostringstream hex;
  hex << std::hex << fnv1a64(key);
  std::string cache = graph_path + "." + hex.str() + ".bphf";
  if (std::filesystem::exists(cache)) {
    try {
      auto loaded = read_family_file(cache);
      if (loaded.family.domain_size() == g.num_vertices() &&
          loaded.certificate.pattern.k == k && loaded.certificate.pattern.l == k) {
        auto rep = verify_balance(loaded.family, loaded.certificate.pattern, verify);
        if (certificate_holds(loaded.certificate, rep)) return loaded;
      }
    } catch (const std::exception&) {
      // stale or foreign cache entry: rebuild below
    }
  }
  auto res = build_derandomized(g.num_vertices(), k, delta, verify);
  write_family_file(cache, res.certified.family, res.certified.certificate);
  return std::move(res.certified);
}

int run_count(const std::string& what, const std::string& graph_path, int k,
              const std::string& delta_text, const std::string& family_path, bool with_exact,
              const CommonArgs& common) {
  using namespace bphf;
  Rat delta = parse_rational(delta_text);
  validate_delta(delta);
  Graph g = Graph::read_file(graph_path);
  auto fam = obtain_family(g, k, delta, family_path, graph_path, common);
  ApproxCount res = (what == "paths") ? approx_count_paths(g, k, fam, common.threads)
                                      : approx_count_cycles(g, k, fam, common.threads);
  std::cout << "raw=" << res.raw << " divisor=" << rat_to_string(res.divisor)
            << " value=" << rat_to_string(res.value)
            << " value_decimal=" << rat_to_decimal(res.value) << "\n";
  if (with_exact) {
    Int exact = (what == "paths") ? exact_count_paths(g, k) : exact_count_cycles(g, k);
    std::cout << "exact=" << exact;
    if (exact != 0)
      std::cout << " ratio=" << rat_to_decimal(res.value / Rat(exact));
    std::cout << "\n";
  }
  return kExitOk;
}

int run_exact(const std::string& what, const std::string& graph_path, int k) {
  using namespace bphf;
  Graph g = Graph::read_file(graph_path);
  Int v = (what == "paths") ? exact_count_paths(g, k) : exact_count_cycles(g, k);
  std::cout << v << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced perfect-hash families with exact certificates, and "
               "color-coding approximate subgraph counting"};
  app.require_subcommand(1);
  CommonArgs common;
  app.add_option("--threads", common.threads, "worker threads (0 = all cores)");

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "construct a family and write it to a file");
  build->add_option("--n", build_args.n, "domain size")->required();
  build->add_option("--k", build_args.k, "subset size")->required();
  build->add_option("--delta", build_args.delta_text, "balance factor in (1,2], exact rational or decimal")
      ->required();
  build->add_option("--method", build_args.method, "random|derand|code|lowsplit|pipeline")
      ->required();
  int l_value = 0;
  auto* l_opt = build->add_option("--l", l_value, "range size for splitter methods");
  build->add_option("--seed", build_args.seed, "seed for the random method");
  build->add_option("--out", build_args.out, "output family file")->required();
  build->add_option("--provider", build_args.provider, "pipeline splitter provider: derand-greedy|eps-bias");
  build->add_option("--budget", common.budget, "subset enumeration budget");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "exhaustively verify a family file");
  verify->add_option("--family", verify_path, "family file")->required();
  verify->add_option("--budget", common.budget, "subset enumeration budget");

  std::string count_what, count_graph, count_family, count_delta;
  int count_k = 0;
  bool count_exact = false;
  auto* count = app.add_subcommand("count", "approximate path/cycle counts via color-coding");
  count->add_option("what", count_what, "paths|cycles")->required()->check(CLI::IsMember({"paths", "cycles"}));
  count->add_option("--graph", count_graph, "graph file")->required();
  count->add_option("--k", count_k, "subgraph size")->required();
  count->add_option("--delta", count_delta, "approximation factor in (1,2]")->required();
  count->add_option("--family", count_family, "use this family file instead of building one");
  count->add_flag("--exact", count_exact, "also run the exact oracle and report the ratio");
  count->add_option("--budget", common.budget, "subset enumeration budget");

  std::string exact_what, exact_graph;
  int exact_k = 0;
  auto* exact = app.add_subcommand("exact", "exact path/cycle counts by enumeration");
  exact->add_option("what", exact_what, "paths|cycles")->required()->check(CLI::IsMember({"paths", "cycles"}));
  exact->add_option("--graph", exact_graph, "graph file")->required();
  exact->add_option("--k", exact_k, "subgraph size")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) {
      if (l_opt->count()) build_args.l = l_value;
      return run_build(build_args, common);
    }
    if (*verify) return run_verify(verify_path, common);
    if (*count) return run_count(count_what, count_graph, count_k, count_delta, count_family,
                                 count_exact, common);
    if (*exact) return run_exact(exact_what, exact_graph, exact_k);
  } catch (const bphf::budget_error& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const bphf::construction_error& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const bphf::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bphf::parameter_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
