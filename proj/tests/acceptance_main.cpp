// Acceptance suite: one pass/fail line per criterion, exact checks at the
// stated tolerances. Exits non-zero if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bphf/bphf.hpp"

using namespace bphf;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void()>& body) {
  auto t0 = Clock::now();
  std::string error;
  try {
    body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::ostringstream line;
  line << (error.empty() ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title
       << " (" << secs << " s)";
  if (!error.empty()) {
    line << "\n       " << error;
    ++failures;
  }
  std::cout << line.str() << std::endl;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error("check failed: " + what);
}

// ---- criterion bodies ------------------------------------------------------

void derandomized_constructions() {
  struct Case {
    int n, k;
    Rat delta;
  };
  for (const Case& c : {Case{10, 3, Rat(2)}, Case{12, 3, Rat(3, 2)}, Case{10, 4, Rat(2)}}) {
    Rat p = p_perfect(c.k);
    Int m = size_derandomized(c.n, c.k, p, c.delta);
    auto res = build_derandomized(c.n, c.k, c.delta);
    require(Int(res.certified.family.size()) == m, "family size equals the ceiling formula");
    BalanceCertificate cert{p * Rat(m), c.delta, SplitPattern::make(c.k, c.k)};
    auto rep = verify_balance(res.certified.family, cert.pattern);
    require(certificate_holds(cert, rep), "exact verification against (pM, delta)");
  }
}

void composition_soundness() {
  SeededRng rng(2024);
  auto random_certified = [&](int n, int k, int l) {
    auto pattern = SplitPattern::make(k, l);
    for (;;) {
      std::uint64_t m = 2 + rng.next_below(29);
      std::vector<color_t> flat(m * static_cast<std::uint64_t>(n));
      for (auto& v : flat) v = rng.next_below(static_cast<std::uint32_t>(l));
      FunctionFamily fam(n, l, std::move(flat));
      auto rep = verify_balance(fam, pattern);
      if (rep.min_count == 0) continue;
      return CertifiedFamily<FunctionFamily>{std::move(fam), certificate_from_report(rep, pattern)};
    }
  };
  for (int trial = 0; trial < 50; ++trial) {
    if (trial % 2 == 0) {
      int l = 3 + static_cast<int>(rng.next_below(2));
      int k = 2 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(l - 2)));
      int n = std::min(6, l + 1 + static_cast<int>(rng.next_below(2)));
      auto composed = compose_range(random_certified(n, k, l), random_certified(l, k, k));
      auto rep = verify_balance(composed.family, composed.certificate.pattern);
      require(certificate_holds(composed.certificate, rep), "range-composed certificate");
    } else {
      int l = 1 + static_cast<int>(rng.next_below(2));
      int k = l + static_cast<int>(rng.next_below(2));
      int n = std::min(6, std::max(3, k) + static_cast<int>(rng.next_below(3)));
      std::vector<CertifiedFamily<FunctionFamily>> parts;
      for (int kj : part_sizes(k, l)) parts.push_back(random_certified(n, kj, kj));
      auto composed = compose_parts(random_certified(n, k, l), std::move(parts));
      auto rep = verify_balance(composed.family, composed.certificate.pattern);
      require(certificate_holds(composed.certificate, rep), "parts-composed certificate");
    }
  }
}

void code_splitter_criterion() {
  auto plan = plan_code_splitter(100, 2, Rat(2));
  require(plan.q == 11 && plan.t == 2, "plan lands at q=11, t=2");
  auto res = build_code_splitter(plan);
  auto prof = pairwise_collision_profile(res.family);
  require(prof.max_collisions <= 1, "pairwise collision count <= 1 over all 4950 pairs");
  auto rep = verify_balance(res.family, res.certificate.pattern);
  require(rep.min_count >= 10, "min split >= 10");
}

void biased_space_criterion() {
  auto sp = build_biased_space(8, Rat(1, 4));
  require(sp.m == 5 && sp.size() == 1024, "space has m=5, 1024 samples");
  auto scan = max_parity_bias(sp);
  require(scan.max_bias <= Rat(1, 4), "all 255 parities biased at most 1/4");
  auto ind = check_almost_independence(sp, 3, Rat(1, 4));
  require(ind.ok, "every 3-position atom within 1/4 of 1/8");
}

void low_splitter_criterion() {
  auto res = build_low_splitter(8, 3, 2, Rat(2));
  require(res.space.size() <= (1u << 14), "space has at most 2^14 points");
  require(res.exact_verified, "exact verification ran");
  Rat t = res.certified.certificate.T;
  Rat band = (Rat(2) - 1) / 2;
  require(Rat(res.report->min_count) >= t * (1 - band), "split >= (1-(delta-1)/2) T for every S");
  require(Rat(res.report->max_count) <= t * (1 + band), "split <= (1+(delta-1)/2) T for every S");
}

void pipeline_criterion() {
  auto plan = plan_pipeline(30, 3, Rat(2), SplitterProvider::derand_greedy);
  auto res = build_pipeline(plan);
  require(res.exact_verified, "exact verification over all 4060 subsets ran");
  require(certificate_holds(res.certified.certificate, *res.report),
          "multiplied certificate holds exactly");
  require(res.certified.certificate.delta <= Rat(2), "composed delta within budget");
}

void counting_criterion() {
  const int n = 20, k = 4;
  Rat delta(3, 2);
  auto fam = build_derandomized(n, k, delta).certified;
  for (int i = 0; i < 10; ++i) {
    bool directed = i % 2 == 1;
    auto g = Graph::random_gnp(n, 3, 10, directed, 9000 + static_cast<std::uint64_t>(i));
    Rat exact_p(exact_count_paths(g, k));
    auto ap = approx_count_paths(g, k, fam);
    require(ap.value >= exact_p / delta && ap.value <= exact_p * delta,
            "paths sandwich on graph " + std::to_string(i));
    Rat exact_c(exact_count_cycles(g, k));
    auto ac = approx_count_cycles(g, k, fam);
    require(ac.value >= exact_c / delta && ac.value <= exact_c * delta,
            "cycles sandwich on graph " + std::to_string(i));
  }
  // exhaustive all-functions family: ratio exactly one
  for (int nv = 5; nv <= 6; ++nv) {
    auto g = Graph::random_gnp(nv, 1, 2, false, 77);
    for (int kk = 2; kk <= 3; ++kk) {
      std::uint64_t m = 1;
      for (int i = 0; i < nv; ++i) m *= static_cast<std::uint64_t>(kk);
      std::vector<color_t> flat;
      flat.reserve(m * static_cast<std::uint64_t>(nv));
      for (std::uint64_t f = 0; f < m; ++f) {
        std::uint64_t rest = f;
        for (int x = 0; x < nv; ++x) {
          flat.push_back(static_cast<color_t>(rest % static_cast<std::uint64_t>(kk)));
          rest /= static_cast<std::uint64_t>(kk);
        }
      }
      CertifiedFamily<FunctionFamily> all{
          FunctionFamily(nv, kk, std::move(flat)),
          BalanceCertificate{Rat(factorial(static_cast<unsigned>(kk)) *
                                 pow_int(Int(kk), static_cast<unsigned>(nv - kk))),
                             Rat(1), SplitPattern::make(kk, kk)}};
      require(approx_count_paths(g, kk, all).value == Rat(exact_count_paths(g, kk)),
              "exhaustive-family path count is exact");
      if (kk >= 3)
        require(approx_count_cycles(g, kk, all).value == Rat(exact_count_cycles(g, kk)),
                "exhaustive-family cycle count is exact");
    }
  }
}

void identity_checks() {
  for (int k = 1; k <= 3; ++k)
    for (int n = k; n <= 5; ++n) {
      std::uint64_t m = 1;
      for (int i = 0; i < n; ++i) m *= static_cast<std::uint64_t>(k);
      std::vector<color_t> flat;
      flat.reserve(m * static_cast<std::uint64_t>(n));
      for (std::uint64_t f = 0; f < m; ++f) {
        std::uint64_t rest = f;
        for (int x = 0; x < n; ++x) {
          flat.push_back(static_cast<color_t>(rest % static_cast<std::uint64_t>(k)));
          rest /= static_cast<std::uint64_t>(k);
        }
      }
      FunctionFamily fam(n, k, std::move(flat));
      auto rep = verify_balance(fam, SplitPattern::make(k, k));
      Int expect = factorial(static_cast<unsigned>(k)) *
                   pow_int(Int(k), static_cast<unsigned>(n - k));
      require(rep.min_count == expect && rep.max_count == expect,
              "inj(S) = k! k^(n-k) for every S");
    }
  for (int n = 1; n <= 20; ++n) {
    auto [lo, hi] = robbins_bounds(n);
    Rat f(factorial(static_cast<unsigned>(n)));
    require(lo < f && f < hi, "factorial brackets at n=" + std::to_string(n));
  }
}

}  // namespace

int main() {
  criterion(1, "derandomized (n,k)-families at (10,3,2), (12,3,1.5), (10,4,2)",
            derandomized_constructions);
  criterion(2, "composition soundness on 50 random certified inputs", composition_soundness);
  criterion(3, "code splitter n=100, k=2: q=11, t=2, collisions <= 1, min split >= 10",
            code_splitter_criterion);
  criterion(4, "biased space N=8, beta=1/4: parity and atom scans", biased_space_criterion);
  criterion(5, "low splitter n'=8, k=3, l=2: relative error within (delta-1)/2",
            low_splitter_criterion);
  criterion(6, "pipeline n=30, k=3, delta=2: exact verification of the composed family",
            pipeline_criterion);
  criterion(7, "counting sandwich on 10 random graphs plus exhaustive-family exactness",
            counting_criterion);
  criterion(8, "exhaustive-family identity and Robbins brackets", identity_checks);
  if (failures) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
