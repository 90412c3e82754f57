#pragma once

// Monte Carlo builders: sample M i.i.d. uniform functions, verify the
// certificate (p*M, delta) exactly, and resample with seed+retry on failure.
// The exact verifier is the acceptance gate; the sampler only has to be a
// decent approximation of independence.

#include <cstdint>
#include <optional>
#include <string>

#include "bphf/family.hpp"
#include "bphf/params.hpp"
#include "bphf/prng.hpp"

namespace bphf {

struct RandomBuildOptions {
  int max_retries = 16;
  VerifyOptions verify;
};

struct RandomBuildResult {
  CertifiedFamily<FunctionFamily> certified;
  BalanceReport report;
  int retries = 0;  // 0 = first sample verified
};

namespace detail {

inline FunctionFamily sample_family(int n, int l, std::uint64_t m, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<color_t> flat(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (auto& v : flat) v = rng.next_below(static_cast<std::uint32_t>(l));
  return FunctionFamily(n, l, std::move(flat));
}

inline RandomBuildResult build_random_family(int n, int k, int l, const Rat& delta,
                                             std::uint64_t seed, const Rat& p,
                                             const RandomBuildOptions& opts) {
  SplitPattern pattern = SplitPattern::make(k, l);
  Int m = size_probabilistic(n, k, p, delta);
  if (m > (Int(1) << 40))
    throw budget_error("family size " + m.str() + " is beyond desk scale");
  std::uint64_t m64 = m.template convert_to<std::uint64_t>();
  BalanceCertificate cert{p * Rat(m), delta, pattern};

  std::optional<BalanceReport> best;
  for (int retry = 0; retry <= opts.max_retries; ++retry) {
    FunctionFamily fam = sample_family(n, l, m64, seed + static_cast<std::uint64_t>(retry));
    BalanceReport rep = verify_balance(fam, pattern, opts.verify);
    if (certificate_holds(cert, rep))
      return {{std::move(fam), cert}, std::move(rep), retry};
    if (!best || (rep.min_count > best->min_count))
      best = rep;
  }
  throw construction_error(
      "random build exhausted " + std::to_string(opts.max_retries + 1) +
      " samples without meeting (T=" + rat_to_string(cert.T) +
      ", delta=" + rat_to_string(delta) + "); best observed min=" + best->min_count.str() +
      " max=" + best->max_count.str());
}

}  // namespace detail

// delta-balanced (n,k)-family of perfect hash functions, p = k!/k^k.
inline RandomBuildResult build_random_perfect(int n, int k, const Rat& delta, std::uint64_t seed,
                                              const RandomBuildOptions& opts = {}) {
  if (k < 1 || k > n) throw parameter_error("require 1 <= k <= n");
  validate_delta(delta);
  return detail::build_random_family(n, k, k, delta, seed, p_perfect(k), opts);
}

// delta-balanced (n,k,l)-splitter for k < l (1-1 pattern), p = l!/((l-k)! l^k).
inline RandomBuildResult build_random_splitter_high(int n, int k, int l, const Rat& delta,
                                                    std::uint64_t seed,
                                                    const RandomBuildOptions& opts = {}) {
  if (k < 1 || k > n) throw parameter_error("require 1 <= k <= n");
  if (k >= l) throw parameter_error("high splitter requires k < l");
  validate_delta(delta);
  return detail::build_random_family(n, k, l, delta, seed, p_injective(k, l), opts);
}

// delta-balanced (n,k,2)-splitter for k >= 2, p from the exact split pattern.
inline RandomBuildResult build_random_half_splitter(int n, int k, const Rat& delta,
                                                    std::uint64_t seed,
                                                    const RandomBuildOptions& opts = {}) {
  if (k < 2 || k > n) throw parameter_error("half splitter requires 2 <= k <= n");
  validate_delta(delta);
  return detail::build_random_family(n, k, 2, delta, seed, p_pattern(k, 2), opts);
}

}  // namespace bphf
