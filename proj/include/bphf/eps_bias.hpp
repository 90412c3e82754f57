#pragma once

// Explicit small-bias sample spaces by the powering construction, and the
// k >= l splitter built from them.
//
// A sample point is a pair (x, y) of elements of GF(2^m); bit i of the point
// is the GF(2) inner product of the bit vectors of x^(i+1) and y. The parity
// over a non-empty position set T is <bits(p_T(x)), y> for the nonzero
// polynomial p_T(x) = sum over i in T of x^(i+1): it is exactly unbiased
// unless p_T(x) = 0, which happens for at most N of the 2^m field elements.
// Hence |E[(-1)^parity]| <= N/2^m <= beta once 2^m >= N/beta, and every
// k-position atom deviates from 2^-k by less than beta (Fourier inversion).
//
// Samples are regenerated from (m, poly) on demand and never stored.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bphf/combinatorics.hpp"
#include "bphf/family.hpp"
#include "bphf/gf2.hpp"
#include "bphf/params.hpp"

namespace bphf {

struct SampleSpace {
  int N = 0;            // number of supported bit positions
  int m = 1;            // field degree; size = 2^(2m)
  std::uint32_t poly = 0b10;
  Rat beta;             // certified bias bound (the construction parameter)

  std::uint64_t size() const { return 1ull << (2 * m); }

  // Exact construction guarantee on |Pr[parity = 1] - 1/2|.
  Rat certified_parity_bias() const { return Rat(Int(N), pow_int(Int(2), static_cast<unsigned>(m + 1))); }

  void extract_bits(std::uint64_t index, std::vector<std::uint8_t>& bits) const {
    GF2m field{m, poly};
    std::uint32_t mask = (m == 32) ? ~0u : ((1u << m) - 1);
    std::uint32_t x = static_cast<std::uint32_t>(index >> m);
    std::uint32_t y = static_cast<std::uint32_t>(index) & mask;
    bits.resize(static_cast<std::size_t>(N));
    std::uint32_t pw = x;  // x^(i+1)
    for (int i = 0; i < N; ++i) {
      bits[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(std::popcount(pw & y) & 1);
      pw = field.mul(pw, x);
    }
  }
};

struct SpaceBuildOptions {
  int m_cap = 24;  // space size capped at 2^48 index pairs
};

// Smallest field degree with 2^m >= N/beta; the parity bias is then at most
// N/2^(m+1) <= beta/2 and every atom deviation stays below beta.
inline SampleSpace build_biased_space(int n_bits, const Rat& beta,
                                      const SpaceBuildOptions& opts = {}) {
  if (n_bits < 1) throw parameter_error("sample space needs N >= 1");
  if (beta <= 0 || beta >= 1) throw parameter_error("bias bound must lie in (0, 1)");
  int m = 1;
  while (Rat(pow_int(Int(2), static_cast<unsigned>(m))) < Rat(n_bits) / beta) {
    ++m;
    if (m > opts.m_cap)
      throw budget_error("sample space needs field degree " + std::to_string(m) +
                         " > cap " + std::to_string(opts.m_cap));
  }
  return SampleSpace{n_bits, m, find_irreducible_poly(m), beta};
}

// Header-only serialization; samples are regenerated, never stored.
inline std::string space_to_string(const SampleSpace& s) {
  std::ostringstream os;
  os << "EBS 1\n"
     << "N=" << s.N << " m=" << s.m << " poly=" << std::hex << s.poly << std::dec
     << " beta=" << rat_to_string(s.beta) << '\n';
  return os.str();
}

inline SampleSpace space_from_string(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "EBS 1") throw parse_error(1, "bad magic, expected 'EBS 1'");
  if (!std::getline(is, line)) throw parse_error(2, "missing parameter line");
  int n_bits = 0, m = 0;
  std::uint32_t poly = 0;
  char beta_buf[128] = {0};
  if (std::sscanf(line.c_str(), "N=%d m=%d poly=%x beta=%127s", &n_bits, &m, &poly, beta_buf) != 4)
    throw parse_error(2, "expected N= m= poly= beta=");
  if (std::getline(is, line)) throw parse_error(3, "trailing garbage");
  SampleSpace s{n_bits, m, poly, parse_rational(beta_buf)};
  if (s.N < 1 || s.m < 1 || s.m > 32 || poly_degree(s.poly) != s.m)
    throw parse_error(2, "inconsistent sample space parameters");
  return s;
}

namespace detail {

// All samples as bit words, for the exhaustive scans. N <= 64 only.
inline std::vector<std::uint64_t> collect_sample_words(const SampleSpace& space,
                                                       std::uint64_t ops_budget) {
  if (space.N > 64) throw budget_error("exhaustive scans support at most 64 bit positions");
  Int ops = Int(space.size()) * space.N;
  if (ops > Int(ops_budget)) throw budget_error("sample enumeration exceeds ops budget");
  std::vector<std::uint64_t> words(space.size());
  std::vector<std::uint8_t> bits;
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    space.extract_bits(idx, bits);
    std::uint64_t w = 0;
    for (int i = 0; i < space.N; ++i)
      if (bits[static_cast<std::size_t>(i)]) w |= 1ull << i;
    words[idx] = w;
  }
  return words;
}

}  // namespace detail

struct ParityScanResult {
  Rat max_bias;                  // max over non-empty T of |Pr[parity=1] - 1/2|
  std::uint64_t worst_mask = 0;  // witness position set
};

// Exhaustive bias scan over all 2^N - 1 parities. Oracle for the certificate.
inline ParityScanResult max_parity_bias(const std::vector<std::uint64_t>& words, int n_bits,
                                        std::uint64_t ops_budget = 2'000'000'000ull) {
  if (n_bits > 24) throw budget_error("parity scan supports at most 24 positions");
  std::uint64_t masks = (1ull << n_bits) - 1;
  if (Int(masks) * Int(words.size()) > Int(ops_budget))
    throw budget_error("parity scan exceeds ops budget");
  ParityScanResult res{Rat(0), 0};
  std::uint64_t s = words.size();
  for (std::uint64_t t = 1; t <= masks; ++t) {
    std::uint64_t ones = 0;
    for (std::uint64_t w : words) ones += static_cast<std::uint64_t>(std::popcount(w & t) & 1);
    // |ones/s - 1/2| = |2 ones - s| / (2s)
    Int dev_num = Int(2) * ones - Int(s);
    if (dev_num < 0) dev_num = -dev_num;
    Rat dev(dev_num, Int(2) * Int(s));
    if (dev > res.max_bias) {
      res.max_bias = dev;
      res.worst_mask = t;
    }
  }
  return res;
}

inline ParityScanResult max_parity_bias(const SampleSpace& space,
                                        std::uint64_t ops_budget = 2'000'000'000ull) {
  return max_parity_bias(detail::collect_sample_words(space, ops_budget), space.N, ops_budget);
}

struct IndependenceReport {
  bool ok = false;
  Rat worst_deviation;
  std::vector<int> worst_positions;
  std::uint32_t worst_pattern = 0;
};

// Exhaustive check of |Pr[X_{i_1}=a_1,...,X_{i_k}=a_k] - 2^-k| < eps over all
// position k-subsets and all 2^k patterns.
inline IndependenceReport check_almost_independence(const std::vector<std::uint64_t>& words,
                                                    int n_bits, int k, const Rat& eps,
                                                    std::uint64_t ops_budget = 2'000'000'000ull) {
  if (k < 0) throw parameter_error("k must be non-negative");
  IndependenceReport rep;
  rep.worst_deviation = 0;
  if (k == 0) {  // vacuous
    rep.ok = true;
    return rep;
  }
  if (k > n_bits) throw parameter_error("k exceeds the number of positions");
  Int ops = binomial(static_cast<unsigned>(n_bits), static_cast<unsigned>(k)) * Int(words.size());
  if (ops > Int(ops_budget)) throw budget_error("independence check exceeds ops budget");
  std::uint64_t s = words.size();
  Int s2 = Int(2) * Int(s);
  Int two_k = pow_int(Int(2), static_cast<unsigned>(k));
  std::vector<std::uint64_t> counts(1ull << k);
  rep.ok = true;
  for_each_subset(n_bits, k, [&](const std::vector<int>& pos) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t w : words) {
      std::uint32_t pat = 0;
      for (int j = 0; j < k; ++j)
        pat |= static_cast<std::uint32_t>((w >> pos[static_cast<std::size_t>(j)]) & 1) << j;
      ++counts[pat];
    }
    for (std::uint32_t pat = 0; pat < (1u << k); ++pat) {
      // |cnt/s - 2^-k| = |2^k cnt - s| / (2^k s)
      Int dev_num = two_k * counts[pat] - Int(s);
      if (dev_num < 0) dev_num = -dev_num;
      Rat dev(dev_num, two_k * Int(s));
      if (dev > rep.worst_deviation) {
        rep.worst_deviation = dev;
        rep.worst_positions = pos;
        rep.worst_pattern = pat;
      }
    }
  });
  rep.ok = rep.worst_deviation < eps;
  return rep;
}

inline IndependenceReport check_almost_independence(const SampleSpace& space, int k,
                                                    const Rat& eps,
                                                    std::uint64_t ops_budget = 2'000'000'000ull) {
  return check_almost_independence(detail::collect_sample_words(space, ops_budget), space.N, k,
                                   eps, ops_budget);
}

// Plan for the k >= l splitter: attach w = ceil(log2 l) bits to each element,
// read them as a value v and color by v mod l. The ideal split probability P
// uses the induced (non-uniform for l not a power of two) color distribution.
struct LowSplitterPlan {
  int n = 0, k = 0, l = 0, w = 1;
  Rat delta;
  Rat epsilon;                  // 2^-(k w + 1) (delta - 1)
  Rat beta;                     // space bias actually requested
  std::vector<Rat> color_probs; // p_c = #{v in [0,2^w): v mod l = c} / 2^w
  Rat split_probability;        // P = k!/prod(s_j!) * prod p_j^(s_j)
  Int space_size;               // 2^(2m)
  int m = 1;
  Rat T;                        // space_size * P
};

struct LowSplitterOptions {
  std::optional<Rat> beta_override;  // relax the bias to shrink the space
  SpaceBuildOptions space;
  std::uint64_t materialize_cap = 100'000'000;  // max total family entries
  VerifyOptions verify;
};

inline LowSplitterPlan plan_low_splitter(int n, int k, int l, const Rat& delta,
                                         const LowSplitterOptions& opts = {}) {
  if (l < 2 || l > k) throw parameter_error("low splitter requires 2 <= l <= k");
  if (k > n) throw parameter_error("low splitter requires k <= n");
  validate_delta(delta);
  LowSplitterPlan plan;
  plan.n = n;
  plan.k = k;
  plan.l = l;
  plan.delta = delta;
  plan.w = 1;
  while ((1 << plan.w) < l) ++plan.w;
  unsigned kw = static_cast<unsigned>(k) * static_cast<unsigned>(plan.w);
  plan.epsilon = (delta - 1) / Rat(pow_int(Int(2), kw + 1));
  plan.beta = opts.beta_override.value_or(plan.epsilon);

  int two_w = 1 << plan.w;
  std::vector<int> cnt(static_cast<std::size_t>(l), 0);
  for (int v = 0; v < two_w; ++v) ++cnt[static_cast<std::size_t>(v % l)];
  plan.color_probs.reserve(static_cast<std::size_t>(l));
  for (int c = 0; c < l; ++c) plan.color_probs.emplace_back(cnt[static_cast<std::size_t>(c)], two_w);

  auto sizes = part_sizes(k, l);
  Rat p = Rat(factorial(static_cast<unsigned>(k)));
  for (int j = 0; j < l; ++j) {
    p /= Rat(factorial(static_cast<unsigned>(sizes[static_cast<std::size_t>(j)])));
    p *= pow_rat(plan.color_probs[static_cast<std::size_t>(j)],
                 static_cast<unsigned>(sizes[static_cast<std::size_t>(j)]));
  }
  plan.split_probability = p;

  int n_bits = n * plan.w;
  int m = 1;
  while (Rat(pow_int(Int(2), static_cast<unsigned>(m))) < Rat(n_bits) / plan.beta) ++m;
  plan.m = m;
  plan.space_size = pow_int(Int(2), static_cast<unsigned>(2 * m));
  plan.T = Rat(plan.space_size) * plan.split_probability;
  return plan;
}

struct LowSplitterResult {
  CertifiedFamily<FunctionFamily> certified;
  SampleSpace space;
  bool exact_verified = false;
  std::optional<BalanceReport> report;
};

// Materializes the splitter, one function per sample point. When the bias was
// relaxed past the analytic epsilon the certificate is only accepted if the
// exact verification passes.
inline LowSplitterResult build_low_splitter(int n, int k, int l, const Rat& delta,
                                            const LowSplitterOptions& opts = {}) {
  LowSplitterPlan plan = plan_low_splitter(n, k, l, delta, opts);
  if (plan.m > opts.space.m_cap)
    throw budget_error("low splitter space needs field degree " + std::to_string(plan.m) +
                       " > cap " + std::to_string(opts.space.m_cap) +
                       "; use the greedy splitter builder instead");
  Int entries = plan.space_size * plan.n;
  if (entries > Int(opts.materialize_cap))
    throw budget_error("low splitter family of " + entries.str() +
                       " entries exceeds the materialization cap; use the greedy splitter "
                       "builder instead");

  SampleSpace space = build_biased_space(n * plan.w, plan.beta, opts.space);
  std::uint64_t s = space.size();
  std::vector<color_t> flat(static_cast<std::size_t>(s) * static_cast<std::size_t>(n));
  std::vector<std::uint8_t> bits;
  for (std::uint64_t idx = 0; idx < s; ++idx) {
    space.extract_bits(idx, bits);
    for (int x = 0; x < n; ++x) {
      std::uint32_t v = 0;
      for (int b = 0; b < plan.w; ++b)
        v |= static_cast<std::uint32_t>(bits[static_cast<std::size_t>(x * plan.w + b)]) << b;
      flat[static_cast<std::size_t>(idx) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(x)] = v % static_cast<std::uint32_t>(l);
    }
  }
  FunctionFamily fam(n, l, std::move(flat));
  SplitPattern pattern = SplitPattern::make(k, l);
  BalanceCertificate cert{plan.T, delta, pattern};
  cert.validate();

  LowSplitterResult res{{std::move(fam), std::move(cert)}, std::move(space), false, std::nullopt};
  bool analytic = plan.beta <= plan.epsilon;
  Int verify_ops = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)) * Int(s);
  if (verify_ops <= Int(opts.verify.ops_budget)) {
    BalanceReport rep = verify_balance(res.certified.family, pattern, opts.verify);
    if (!certificate_holds(res.certified.certificate, rep))
      throw construction_error("low splitter failed exact verification of (T=" +
                               rat_to_string(plan.T) + ", delta=" + rat_to_string(delta) + ")");
    res.exact_verified = true;
    res.report = std::move(rep);
  } else if (!analytic) {
    throw budget_error("relaxed-bias low splitter cannot be exactly verified within budget");
  }
  return res;
}

}  // namespace bphf
