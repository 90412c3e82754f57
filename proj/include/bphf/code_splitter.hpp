#pragma once

// Splitter from polynomial-evaluation codes: q functions [n] -> [q], q prime,
// where function alpha maps x to the evaluation at alpha of the degree-<t
// polynomial whose coefficients are the base-q digits of x. Two distinct
// elements agree on at most t-1 evaluation points, so for every k-subset at
// least q - C(k,2)(t-1) functions are 1-1 on it; q is chosen large enough
// that this one-sided loss stays within (delta-1)/2, giving the certificate
// (T=q, delta). With t = 1 the code is a plain injection and (T=1, delta=1).

#include <cstdint>
#include <vector>

#include "bphf/family.hpp"
#include "bphf/params.hpp"

namespace bphf {

inline bool is_prime_u64(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

inline std::uint64_t next_prime_at_least(std::uint64_t v) {
  while (!is_prime_u64(v)) ++v;
  return v;
}

struct CodeSplitterPlan {
  int n = 0;
  int k = 0;
  Rat delta;
  std::uint64_t q = 0;     // prime modulus = range size = family size
  int t = 0;               // message length, smallest t with q^t >= n
  Rat collision_bound;     // C(k,2)(t-1)/q <= (delta-1)/2

  void validate() const {
    if (!is_prime_u64(q)) throw parameter_error("code splitter modulus must be prime");
    if (pow_int(Int(q), static_cast<unsigned>(t)) < n)
      throw parameter_error("code splitter needs q^t >= n");
    if (collision_bound > (delta - 1) / 2)
      throw parameter_error("code splitter collision bound not within (delta-1)/2");
    if (q < static_cast<std::uint64_t>(k)) throw parameter_error("code splitter needs q >= k");
  }
};

namespace detail {

inline int message_length(std::uint64_t q, int n) {
  int t = 1;
  Int reach(q);
  while (reach < n) {
    reach *= q;
    ++t;
  }
  return t;
}

}  // namespace detail

// Smallest prime q >= max(k, ceil(2k^2/(delta-1))) whose collision bound
// C(k,2)(t-1)/q fits in (delta-1)/2; t shrinks as q grows, so the search is a
// fixpoint iteration that always terminates (t = 1 once q >= n).
inline CodeSplitterPlan plan_code_splitter(int n, int k, const Rat& delta) {
  if (n < 1 || k < 2 || k > n) throw parameter_error("code splitter requires 2 <= k <= n");
  validate_delta(delta);
  Int q_min = ceil_rat(Rat(2 * Int(k) * k) / (delta - 1));
  if (q_min < k) q_min = k;
  std::uint64_t q = next_prime_at_least(q_min.template convert_to<std::uint64_t>());
  Rat pairs = Rat(binomial(static_cast<unsigned>(k), 2));
  Rat half_slack = (delta - 1) / 2;
  for (;;) {
    int t = detail::message_length(q, n);
    Rat bound = pairs * Rat(t - 1) / Rat(Int(q));
    if (bound <= half_slack) {
      CodeSplitterPlan plan{n, k, delta, q, t, bound};
      plan.validate();
      return plan;
    }
    q = next_prime_at_least(q + 1);
  }
}

// Materializes the plan. Size q (or 1 when t = 1); certificate one-sided:
// split(S) ranges in [q(1 - bound), q] inside [q/delta, delta q].
inline CertifiedFamily<FunctionFamily> build_code_splitter(const CodeSplitterPlan& plan) {
  plan.validate();
  SplitPattern pattern = SplitPattern::make(plan.k, static_cast<int>(plan.q));
  if (plan.t == 1) {
    BalanceCertificate cert{Rat(1), Rat(1), pattern};
    return {FunctionFamily::identity_injection(plan.n, static_cast<int>(plan.q)),
            std::move(cert)};
  }
  std::uint64_t q = plan.q;
  std::vector<color_t> flat(static_cast<std::size_t>(q) * static_cast<std::size_t>(plan.n));
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(plan.t));
  for (int x = 0; x < plan.n; ++x) {
    std::uint64_t rest = static_cast<std::uint64_t>(x);
    for (int d = 0; d < plan.t; ++d) {
      digits[static_cast<std::size_t>(d)] = rest % q;
      rest /= q;
    }
    for (std::uint64_t alpha = 0; alpha < q; ++alpha) {
      std::uint64_t acc = 0;  // Horner, highest digit first
      for (int d = plan.t - 1; d >= 0; --d)
        acc = (acc * alpha + digits[static_cast<std::size_t>(d)]) % q;
      flat[static_cast<std::size_t>(alpha) * static_cast<std::size_t>(plan.n) +
           static_cast<std::size_t>(x)] = static_cast<color_t>(acc);
    }
  }
  BalanceCertificate cert{Rat(Int(q)), plan.delta, pattern};
  cert.validate();
  return {FunctionFamily(plan.n, static_cast<int>(q), std::move(flat)), std::move(cert)};
}

struct CollisionProfile {
  std::uint64_t max_collisions = 0;
  int arg_x = -1, arg_y = -1;
};

// Exhaustive max over pairs x != y of the number of functions with
// h(x) == h(y). Oracle for the code distance claim.
template <FamilyLike F>
CollisionProfile pairwise_collision_profile(const F& family,
                                            std::uint64_t ops_budget = 20'000'000'000ull) {
  int n = family.domain_size();
  std::uint64_t m = family.size();
  Int ops = Int(n) * Int(n - 1) / 2 * Int(m);
  if (ops > Int(ops_budget))
    throw budget_error("collision profile work " + ops.str() + " exceeds budget");
  CollisionProfile prof;
  for (int y = 1; y < n; ++y)
    for (int x = 0; x < y; ++x) {
      std::uint64_t c = 0;
      for (std::uint64_t i = 0; i < m; ++i)
        if (family.value(i, x) == family.value(i, y)) ++c;
      if (prof.arg_x < 0 || c > prof.max_collisions) {
        prof.max_collisions = c;
        prof.arg_x = x;
        prof.arg_y = y;
      }
    }
  return prof;
}

}  // namespace bphf
