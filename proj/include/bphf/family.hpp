#pragma once

// Function families over [n] -> [l], split patterns, balance certificates and
// the exact brute-force balance verifier. Colors and domain elements are
// 0-based throughout.
//
// A "family" in this project is any type modeling FamilyLike below: the
// materialized FunctionFamily here, or the lazy composed views in
// compose.hpp. Lazy families enumerate their functions in a fixed index
// order, so a materialized copy and the lazy view yield identical sequences.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bphf/combinatorics.hpp"
#include "bphf/errors.hpp"
#include "bphf/parallel.hpp"
#include "bphf/rational.hpp"

namespace bphf {

using color_t = std::uint32_t;

// Sentinel for a not-yet-assigned position in a partial function.
inline constexpr color_t kUnassigned = static_cast<color_t>(-1);

// Required part sizes for a k-subset under a range of size l: the first
// (k mod l) parts take ceil(k/l), the rest floor(k/l).
inline std::vector<int> part_sizes(int k, int l) {
  if (k < 1 || l < 1) throw parameter_error("part_sizes requires k >= 1 and l >= 1");
  std::vector<int> s(static_cast<std::size_t>(l));
  int q = k / l, r = k % l;
  for (int j = 0; j < l; ++j) s[static_cast<std::size_t>(j)] = q + (j < r ? 1 : 0);
  return s;
}

// The pattern a family is measured against. For k <= l it means "1-1 on S"
// (any injective assignment counts); for k > l it prescribes the exact
// per-color part sizes from part_sizes(k, l).
struct SplitPattern {
  int k = 0;
  int l = 0;
  std::vector<int> sizes;  // l entries, summing to k

  static SplitPattern make(int k, int l) {
    SplitPattern p;
    p.k = k;
    p.l = l;
    p.sizes = part_sizes(k, l);
    return p;
  }

  bool injective() const { return k <= l; }

  bool operator==(const SplitPattern& o) const { return k == o.k && l == o.l && sizes == o.sizes; }
};

struct BalanceCertificate {
  Rat T;
  Rat delta;
  SplitPattern pattern;

  void validate() const {
    if (T <= 0) throw parameter_error("certificate T must be positive");
    if (delta < 1) throw parameter_error("certificate delta must be >= 1");
  }
};

// Explicit, materialized family: M functions from [n] to [l], stored flat.
class FunctionFamily {
public:
  FunctionFamily() = default;

  FunctionFamily(int n, int l, std::vector<color_t> flat_values)
      : n_(n), l_(l), values_(std::move(flat_values)) {
    if (n_ < 1 || l_ < 1) throw parameter_error("family requires n >= 1 and l >= 1");
    if (values_.empty() || values_.size() % static_cast<std::size_t>(n_) != 0)
      throw parameter_error("family storage must hold M >= 1 functions of n entries each");
    for (color_t v : values_)
      if (v >= static_cast<color_t>(l_))
        throw parameter_error("family value " + std::to_string(v) + " out of range [0," +
                              std::to_string(l_) + ")");
  }

  static FunctionFamily from_functions(int n, int l, const std::vector<std::vector<color_t>>& fns) {
    std::vector<color_t> flat;
    flat.reserve(fns.size() * static_cast<std::size_t>(n));
    for (const auto& f : fns) {
      if (static_cast<int>(f.size()) != n)
        throw parameter_error("every function must have exactly n entries");
      flat.insert(flat.end(), f.begin(), f.end());
    }
    return FunctionFamily(n, l, std::move(flat));
  }

  // Single function x -> x, domain embedded into a range of size l >= n.
  static FunctionFamily identity_injection(int n, int l) {
    if (l < n) throw parameter_error("identity injection needs l >= n");
    std::vector<color_t> flat(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) flat[static_cast<std::size_t>(x)] = static_cast<color_t>(x);
    return FunctionFamily(n, l, std::move(flat));
  }

  static FunctionFamily constant_zero(int n, int l = 1) {
    return FunctionFamily(n, l, std::vector<color_t>(static_cast<std::size_t>(n), 0));
  }

  int domain_size() const { return n_; }
  int range_size() const { return l_; }
  std::uint64_t size() const { return values_.size() / static_cast<std::size_t>(n_); }

  color_t value(std::uint64_t fn_index, int x) const {
    return values_[static_cast<std::size_t>(fn_index) * static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(x)];
  }

  void extract(std::uint64_t fn_index, std::vector<color_t>& out) const {
    out.assign(values_.begin() + static_cast<std::ptrdiff_t>(fn_index * static_cast<std::uint64_t>(n_)),
               values_.begin() + static_cast<std::ptrdiff_t>((fn_index + 1) * static_cast<std::uint64_t>(n_)));
  }

  // Number of quota/count operations one subset query costs (budget model).
  std::uint64_t count_cost_hint() const { return size(); }

  std::uint64_t count_on_subset(std::span<const int> subset, const SplitPattern& pattern) const;

  bool operator==(const FunctionFamily& o) const {
    return n_ == o.n_ && l_ == o.l_ && values_ == o.values_;
  }

private:
  int n_ = 0;
  int l_ = 1;
  std::vector<color_t> values_;
};

template <class F>
concept FamilyLike = requires(const F& f, std::uint64_t i, std::vector<color_t>& out, int x,
                              std::span<const int> s, const SplitPattern& p) {
  { f.domain_size() } -> std::convertible_to<int>;
  { f.range_size() } -> std::convertible_to<int>;
  { f.size() } -> std::convertible_to<std::uint64_t>;
  { f.value(i, x) } -> std::convertible_to<color_t>;
  { f.extract(i, out) };
  { f.count_on_subset(s, p) } -> std::convertible_to<std::uint64_t>;
  { f.count_cost_hint() } -> std::convertible_to<std::uint64_t>;
};

template <FamilyLike F>
struct CertifiedFamily {
  F family;
  BalanceCertificate certificate;
};

namespace detail {

// Does function fn_index of f achieve the pattern on the subset? O(k) with a
// scratch occupancy buffer of size l.
template <FamilyLike F>
bool achieves_pattern(const F& f, std::uint64_t fn_index, std::span<const int> subset,
                      const SplitPattern& pattern, std::vector<int>& occ_scratch) {
  if (pattern.injective()) {
    occ_scratch.assign(static_cast<std::size_t>(pattern.l), 0);
    for (int x : subset) {
      int c = static_cast<int>(f.value(fn_index, x));
      if (occ_scratch[static_cast<std::size_t>(c)]++ != 0) return false;
    }
    return true;
  }
  occ_scratch.assign(static_cast<std::size_t>(pattern.l), 0);
  for (int x : subset) {
    int c = static_cast<int>(f.value(fn_index, x));
    if (++occ_scratch[static_cast<std::size_t>(c)] > pattern.sizes[static_cast<std::size_t>(c)])
      return false;
  }
  return true;  // no part above quota and sizes sum to k => exact match
}

}  // namespace detail

inline std::uint64_t FunctionFamily::count_on_subset(std::span<const int> subset,
                                                     const SplitPattern& pattern) const {
  std::uint64_t cnt = 0;
  std::vector<int> occ;
  std::uint64_t m = size();
  for (std::uint64_t i = 0; i < m; ++i)
    if (detail::achieves_pattern(*this, i, subset, pattern, occ)) ++cnt;
  return cnt;
}

// inj(S) / split(S): number of family members achieving the pattern on S.
template <FamilyLike F>
Int count_for_subset(const F& family, std::span<const int> subset, const SplitPattern& pattern) {
  if (static_cast<int>(subset.size()) != pattern.k)
    throw parameter_error("subset size does not match pattern.k");
  if (family.range_size() != pattern.l)
    throw parameter_error("family range size does not match pattern.l");
  std::vector<int> seen(subset.begin(), subset.end());
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] < 0 || seen[i] >= family.domain_size())
      throw parameter_error("subset element out of domain");
    if (i > 0 && seen[i] == seen[i - 1]) throw parameter_error("subset elements must be distinct");
  }
  return Int(family.count_on_subset(subset, pattern));
}

struct BalanceReport {
  Int min_count;
  Int max_count;
  std::vector<int> arg_min;
  std::vector<int> arg_max;

  // sqrt(max/min); infinity when min_count == 0 (no finite delta works).
  double best_delta() const {
    if (min_count == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(rat_to_double(Rat(max_count, min_count)));
  }

  // sqrt(min*max), the T minimizing the needed delta.
  double best_T() const { return std::sqrt(rat_to_double(Rat(min_count * max_count, 1))); }
};

// Exact check: T/delta <= min_count and max_count <= delta*T.
inline bool certificate_holds(const BalanceCertificate& cert, const BalanceReport& report) {
  return cert.T <= cert.delta * Rat(report.min_count) &&
         Rat(report.max_count) <= cert.delta * cert.T;
}

// Tight exact certificate from a report: delta_up is a rational upper bound on
// sqrt(max/min) and T = min*delta_up, so both inequalities hold exactly.
inline BalanceCertificate certificate_from_report(const BalanceReport& report,
                                                  const SplitPattern& pattern) {
  if (report.min_count == 0)
    throw parameter_error("family with a zero-count subset admits no finite certificate");
  Rat delta_up = sqrt_rat_upper(Rat(report.max_count, report.min_count));
  if (delta_up < 1) delta_up = 1;
  BalanceCertificate cert{Rat(report.min_count) * delta_up, delta_up, pattern};
  cert.validate();
  return cert;
}

struct VerifyOptions {
  std::uint64_t subset_budget = 10'000'000;         // max C(n,k) subsets enumerated
  std::uint64_t ops_budget = 20'000'000'000ull;     // max subset-count work units
  int threads = 0;                                  // 0 = hardware concurrency
};

// Exhaustive min/max of count_on_subset over all C(n,k) subsets, enumerated in
// colex order (witnesses are the first extremal subsets in that order). The
// enumeration is partitioned across workers and merged deterministically.
template <FamilyLike F>
BalanceReport verify_balance(const F& family, const SplitPattern& pattern,
                             const VerifyOptions& opts = {}) {
  int n = family.domain_size(), k = pattern.k;
  if (family.range_size() != pattern.l)
    throw parameter_error("family range size does not match pattern.l");
  if (k < 1 || k > n) throw parameter_error("pattern.k must satisfy 1 <= k <= n");
  Int total = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k));
  if (total > Int(opts.subset_budget))
    throw budget_error("verify_balance: C(" + std::to_string(n) + "," + std::to_string(k) +
                       ") = " + total.str() + " exceeds subset budget " +
                       std::to_string(opts.subset_budget));
  Int ops = total * Int(family.count_cost_hint());
  if (ops > Int(opts.ops_budget))
    throw budget_error("verify_balance: estimated work " + ops.str() + " exceeds ops budget " +
                       std::to_string(opts.ops_budget));

  std::uint64_t total64 = total.template convert_to<std::uint64_t>();
  unsigned workers = resolve_threads(opts.threads);
  if (workers > total64) workers = static_cast<unsigned>(total64);

  struct Local {
    bool seen = false;
    std::uint64_t min_c = 0, max_c = 0;
    std::vector<int> arg_min, arg_max;
  };
  std::vector<Local> locals(workers);

  // materialize the subset list once; workers then share contiguous ranges
  std::vector<int> elems;
  elems.reserve(total64 * static_cast<std::uint64_t>(k));
  for_each_subset(n, k, [&](const std::vector<int>& s) {
    elems.insert(elems.end(), s.begin(), s.end());
  });

  parallel_chunks(total64, static_cast<int>(workers), [&](unsigned w, std::uint64_t b, std::uint64_t e) {
    Local& loc = locals[w];
    for (std::uint64_t r = b; r < e; ++r) {
      std::span<const int> s(elems.data() + r * static_cast<std::uint64_t>(k),
                             static_cast<std::size_t>(k));
      std::uint64_t c = family.count_on_subset(s, pattern);
      if (!loc.seen || c < loc.min_c) {
        loc.min_c = c;
        loc.arg_min.assign(s.begin(), s.end());
      }
      if (!loc.seen || c > loc.max_c) {
        loc.max_c = c;
        loc.arg_max.assign(s.begin(), s.end());
      }
      loc.seen = true;
    }
  });

  BalanceReport rep;
  bool first = true;
  for (const Local& loc : locals) {
    if (!loc.seen) continue;
    if (first || Int(loc.min_c) < rep.min_count) {
      rep.min_count = loc.min_c;
      rep.arg_min = loc.arg_min;
    }
    if (first || Int(loc.max_c) > rep.max_count) {
      rep.max_count = loc.max_c;
      rep.arg_max = loc.arg_max;
    }
    first = false;
  }
  return rep;
}

}  // namespace bphf
