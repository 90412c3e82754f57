#pragma once

// The main composed construction of a delta-balanced (n,k)-family:
//
//   D''  code splitter       (n, k, q)        at delta'
//   H    (q, k, l)-splitter, l = ceil(log2 k) at delta'
//   B_j  (q, k_j)-families                    at delta''
//
//   family = D'' then (H composed with B_1..B_l),  delta' * delta' * delta''^l
//
// delta' and delta'' are exact rational stand-ins rounded DOWN from delta^(1/3)
// and delta^(1/(3l)), so the multiplied certificate provably stays <= delta.
// The splitter provider for H is switchable: the sample-space construction is
// the faithful route but its size is far beyond enumeration even for k = 3,
// so the greedy builder is the default; every emitted family carries an
// exactly checkable certificate either way.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bphf/code_splitter.hpp"
#include "bphf/compose.hpp"
#include "bphf/derand.hpp"
#include "bphf/eps_bias.hpp"
#include "bphf/numeric.hpp"
#include "bphf/params.hpp"

namespace bphf {

enum class SplitterProvider { derand_greedy, eps_bias };

inline const char* provider_name(SplitterProvider p) {
  return p == SplitterProvider::derand_greedy ? "derand-greedy" : "eps-bias";
}

struct PipelinePlan {
  int n = 0, k = 0;
  Rat delta;
  int l = 1;                   // ceil(log2 k)
  Rat delta_prime;             // rational <= delta^(1/3)
  Rat delta_prime2;            // rational <= delta^(1/(3l))
  CodeSplitterPlan code;       // D'' plan at delta_prime
  std::vector<int> kj;         // part sizes of k under l
  SplitterProvider provider = SplitterProvider::derand_greedy;

  Int splitter_size;           // |H|
  std::vector<Int> part_sizes_m;  // |B_j|
  Int predicted_size;          // |D''| * |H| * prod |B_j|
  Rat predicted_T;
  Rat predicted_delta;         // multiplied certificate, provably <= delta
};

inline Int predicted_size(const PipelinePlan& plan) { return plan.predicted_size; }

inline PipelinePlan plan_pipeline(int n, int k, const Rat& delta,
                                  SplitterProvider provider = SplitterProvider::derand_greedy) {
  if (k < 2 || k > n) throw parameter_error("pipeline requires 2 <= k <= n");
  validate_delta(delta);
  PipelinePlan plan;
  plan.n = n;
  plan.k = k;
  plan.delta = delta;
  plan.provider = provider;
  plan.l = 1;
  while ((1 << plan.l) < k) ++plan.l;
  plan.delta_prime = root_below(delta, 3);
  plan.delta_prime2 = root_below(delta, 3u * static_cast<unsigned>(plan.l));
  if (plan.delta_prime <= 1 || plan.delta_prime2 <= 1)
    throw construction_error("delta root extraction degenerated to 1");
  // sanity on the budget split used by the analysis
  if (plan.delta_prime2 - 1 < (delta - 1) / (6 * plan.l))
    throw construction_error("delta'' - 1 fell below (delta-1)/(6l)");
  plan.kj = part_sizes(k, plan.l);
  plan.code = plan_code_splitter(n, k, plan.delta_prime);

  int q = static_cast<int>(plan.code.q);
  if (plan.l == 1) {
    plan.splitter_size = 1;  // one-part splitter is a single constant function
  } else if (provider == SplitterProvider::derand_greedy) {
    plan.splitter_size = size_derandomized(q, k, p_pattern(k, plan.l), plan.delta_prime);
  } else {
    LowSplitterOptions lo;
    plan.splitter_size = plan_low_splitter(q, k, plan.l, plan.delta_prime, lo).space_size;
  }
  Int code_size = plan.code.t == 1 ? Int(1) : Int(plan.code.q);
  plan.predicted_size = code_size * plan.splitter_size;
  for (int K : plan.kj) {
    Int mj = (K == 1) ? Int(1) : size_derandomized(q, K, p_perfect(K), plan.delta_prime2);
    plan.part_sizes_m.push_back(mj);
    plan.predicted_size *= mj;
  }

  // certificate algebra, all exact
  Rat t = plan.code.t == 1 ? Rat(1) : Rat(Int(plan.code.q));
  Rat d = plan.code.t == 1 ? Rat(1) : plan.delta_prime;
  if (plan.l == 1) {
    t *= 1;  // trivial splitter: (T=1, delta=1)
  } else if (provider == SplitterProvider::derand_greedy) {
    t *= p_pattern(k, plan.l) * Rat(plan.splitter_size);
    d *= plan.delta_prime;
  } else {
    LowSplitterOptions lo;
    auto lp = plan_low_splitter(q, k, plan.l, plan.delta_prime, lo);
    t *= lp.T;
    d *= plan.delta_prime;
  }
  for (std::size_t j = 0; j < plan.kj.size(); ++j) {
    int K = plan.kj[j];
    if (K == 1) continue;  // (T=1, delta=1)
    t *= p_perfect(K) * Rat(plan.part_sizes_m[j]);
    d *= plan.delta_prime2;
  }
  plan.predicted_T = t;
  plan.predicted_delta = d;
  if (d > delta) throw construction_error("multiplied delta exceeds the requested budget");
  return plan;
}

using PipelineFamily =
    ComposedRangeFamily<FunctionFamily, ComposedPartsFamily<FunctionFamily, FunctionFamily>>;

struct PipelineResult {
  CertifiedFamily<PipelineFamily> certified;
  PipelinePlan plan;
  bool exact_verified = false;
  std::optional<BalanceReport> report;
};

struct PipelineOptions {
  VerifyOptions verify;
  LowSplitterOptions low_splitter;  // used only by the eps-bias provider
};

inline PipelineResult build_pipeline(const PipelinePlan& plan, const PipelineOptions& opts = {}) {
  int q = static_cast<int>(plan.code.q);

  CertifiedFamily<FunctionFamily> code_splitter = build_code_splitter(plan.code);

  CertifiedFamily<FunctionFamily> h;
  if (plan.l == 1) {
    h = trivial_one_part_splitter(q, plan.k);
  } else if (plan.provider == SplitterProvider::derand_greedy) {
    h = std::move(build_derandomized_splitter(q, plan.k, plan.l, plan.delta_prime, opts.verify)
                      .certified);
  } else {
    LowSplitterOptions lo = opts.low_splitter;
    lo.verify = opts.verify;
    try {
      h = std::move(build_low_splitter(q, plan.k, plan.l, plan.delta_prime, lo).certified);
    } catch (const budget_error& e) {
      throw budget_error(std::string(e.what()) +
                         " (provider=eps-bias; rerun with provider=derand-greedy)");
    }
  }

  std::vector<CertifiedFamily<FunctionFamily>> parts;
  for (int K : plan.kj) {
    if (K == 1) {
      BalanceCertificate cert{Rat(1), Rat(1), SplitPattern::make(1, 1)};
      parts.push_back({FunctionFamily::constant_zero(q, 1), std::move(cert)});
    } else {
      parts.push_back(
          std::move(build_derandomized(q, K, plan.delta_prime2, opts.verify).certified));
    }
  }

  auto inner = compose_parts(std::move(h), std::move(parts));
  auto composed = compose_range(std::move(code_splitter), std::move(inner));

  PipelineResult res{std::move(composed), plan, false, std::nullopt};
  if (Int(res.certified.family.size()) != plan.predicted_size)
    throw construction_error("composed size does not match the plan");
  if (res.certified.certificate.T != plan.predicted_T ||
      res.certified.certificate.delta != plan.predicted_delta)
    throw construction_error("composed certificate does not match the plan");
  if (res.certified.certificate.delta > plan.delta)
    throw construction_error("composed certificate exceeds the delta budget");

  Int subsets = binomial(static_cast<unsigned>(plan.n), static_cast<unsigned>(plan.k));
  Int ops = subsets * Int(res.certified.family.count_cost_hint());
  if (subsets <= Int(opts.verify.subset_budget) && ops <= Int(opts.verify.ops_budget)) {
    BalanceReport rep =
        verify_balance(res.certified.family, res.certified.certificate.pattern, opts.verify);
    if (!certificate_holds(res.certified.certificate, rep))
      throw construction_error("pipeline family failed exact verification");
    res.exact_verified = true;
    res.report = std::move(rep);
  }
  // else: every factor was verified (or analytically certified) on its own;
  // the multiplied certificate is returned as analytic.
  return res;
}

}  // namespace bphf
