#pragma once

// Greedy derandomized construction by the method of conditional
// probabilities. The potential over all k-subsets S,
//
//   Phi = sum_S e^(lambda(X_S - pM)) + e^(lambda(pM - X_S)),
//
// is tracked through its conditional expectation: with X_S hits from finished
// functions, success probability q_S for the in-progress function and M-j
// fully random functions remaining,
//
//   E[term_S] = e^(apos + lambda X_S) (1 + q_S em1)
//             + e^(aneg - lambda X_S) (1 + q_S em2),
//
//   apos = -lambda pM + (M-j) ln(p e^lambda  + 1-p),   em1 = e^lambda  - 1
//   aneg = +lambda pM + (M-j) ln(p e^-lambda + 1-p),   em2 = e^-lambda - 1.
//
// Only the c-dependent part matters for the choice at a position i: the
// argmin over colors c of  sum over S containing i of  q_S(c) W(X_S)  with
// W(x) = e^(apos + lambda x) em1 + e^(aneg - lambda x) em2. W is tabulated
// once per phase; subsets not containing i cannot change the comparison.
// A full recomputation of the conditional expectation is kept as a reference
// mode for tests. The binding acceptance gate is the exact verifier, so the
// floating-point type only steers the search; on overflow or verification
// failure the build reruns with a twice-as-wide mantissa.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "bphf/combinatorics.hpp"
#include "bphf/compose.hpp"
#include "bphf/family.hpp"
#include "bphf/params.hpp"

namespace bphf {

// Probability, under uniform independent completion of the unassigned
// positions of S, that the function achieves the pattern on S. Exact.
inline Rat cond_pattern_prob(std::span<const color_t> partial, std::span<const int> subset,
                             const SplitPattern& pattern) {
  int k = pattern.k, l = pattern.l;
  if (static_cast<int>(subset.size()) != k)
    throw parameter_error("subset size does not match pattern.k");
  if (pattern.injective()) {
    std::vector<char> used(static_cast<std::size_t>(l), 0);
    int assigned = 0;
    for (int x : subset) {
      color_t c = partial[static_cast<std::size_t>(x)];
      if (c == kUnassigned) continue;
      if (used[c]) return Rat(0);
      used[c] = 1;
      ++assigned;
    }
    int r = k - assigned;
    Int num(1);
    for (int t = 0; t < r; ++t) num *= l - assigned - t;
    return Rat(num, pow_int(Int(l), static_cast<unsigned>(r)));
  }
  std::vector<int> deficit(pattern.sizes.begin(), pattern.sizes.end());
  int r = k;
  for (int x : subset) {
    color_t c = partial[static_cast<std::size_t>(x)];
    if (c == kUnassigned) continue;
    if (--deficit[static_cast<std::size_t>(c)] < 0) return Rat(0);
    --r;
  }
  Int num = factorial(static_cast<unsigned>(r));
  for (int d : deficit) num /= factorial(static_cast<unsigned>(d));  // multinomial, divisions exact
  return Rat(num, pow_int(Int(l), static_cast<unsigned>(r)));
}

// Signals a non-finite intermediate in the working float type; the caller
// escalates precision and reruns.
struct greedy_overflow {};

template <class Float>
class GreedyBuilder {
public:
  GreedyBuilder(ConstructionParams params, SplitPattern pattern)
      : params_(std::move(params)), pattern_(std::move(pattern)) {
    params_.validate();
    if (pattern_.k != params_.k || pattern_.l != params_.l)
      throw parameter_error("pattern does not match construction parameters");
    n_ = params_.n;
    k_ = params_.k;
    l_ = params_.l;
    if (params_.M > (Int(1) << 40))
      throw budget_error("family size " + params_.M.str() + " is beyond desk scale");
    m_ = params_.M.template convert_to<std::uint64_t>();
    num_subsets_ = binomial_u64(static_cast<unsigned>(n_), static_cast<unsigned>(k_));

    elems_.reserve(num_subsets_ * static_cast<std::uint64_t>(k_));
    member_ranks_.assign(static_cast<std::size_t>(n_), {});
    std::uint64_t rank = 0;
    for_each_subset(n_, k_, [&](const std::vector<int>& s) {
      elems_.insert(elems_.end(), s.begin(), s.end());
      for (int x : s) member_ranks_[static_cast<std::size_t>(x)].push_back(rank);
      ++rank;
    });

    hits_.assign(num_subsets_, 0);
    occ_.assign(num_subsets_ * static_cast<std::uint64_t>(l_), 0);
    assigned_.assign(num_subsets_, 0);
    dead_.assign(num_subsets_, 0);
    current_.assign(static_cast<std::size_t>(n_), kUnassigned);

    lambda_ = to_float(params_.lambda());
    Float p = to_float(params_.p);
    Float el = fexp(lambda_), eml = fexp(-lambda_);
    em1_ = el - 1;
    em2_ = eml - 1;
    ln_cplus_ = flog(p * el + (1 - p));
    ln_cminus_ = flog(p * eml + (1 - p));
    pm_ = to_float(params_.p * Rat(params_.M));

    if (pattern_.injective()) {
      inj_q_.resize(static_cast<std::size_t>(k_));
      for (int a = 0; a < k_; ++a) {
        // q after placing an unused color: remaining k-a-1 values stay distinct
        Float q = 1;
        for (int t = a + 1; t < k_; ++t) q *= Float(l_ - t) / Float(l_);
        inj_q_[static_cast<std::size_t>(a)] = q;
      }
    } else {
      fact_.resize(static_cast<std::size_t>(k_) + 1);
      fact_[0] = 1;
      for (int t = 1; t <= k_; ++t) fact_[static_cast<std::size_t>(t)] = fact_[static_cast<std::size_t>(t) - 1] * t;
      inv_l_pow_.resize(static_cast<std::size_t>(k_) + 1);
      inv_l_pow_[0] = 1;
      for (int t = 1; t <= k_; ++t) inv_l_pow_[static_cast<std::size_t>(t)] = inv_l_pow_[static_cast<std::size_t>(t) - 1] / Float(l_);
    }
    begin_phase();
  }

  bool done() const { return phase_ > m_; }
  std::uint64_t phase() const { return phase_; }  // 1-based
  int step() const { return step_; }              // 0-based position
  std::uint64_t subset_count() const { return num_subsets_; }
  const std::vector<std::uint32_t>& hit_counts() const { return hits_; }
  std::span<const color_t> partial() const { return current_; }
  std::span<const int> subset_at(std::uint64_t rank) const {
    return {elems_.data() + rank * static_cast<std::uint64_t>(k_), static_cast<std::size_t>(k_)};
  }

  // E[Phi] with no choices made, by the closed formula.
  Float initial_expected_phi() const {
    Float m = Float(static_cast<double>(m_));
    Float pos = fexp(-lambda_ * pm_ + m * ln_cplus_);
    Float neg = fexp(lambda_ * pm_ + m * ln_cminus_);
    return Float(static_cast<double>(num_subsets_)) * (pos + neg);
  }

  // Reference mode: full conditional expectation of Phi if the current
  // position were assigned candidate color c. O(C(n,k) k), exact state.
  Float conditional_phi(color_t candidate) const {
    require_active();
    std::vector<color_t> trial(current_.begin(), current_.end());
    trial[static_cast<std::size_t>(step_)] = candidate;
    Float apos = -lambda_ * pm_ + Float(static_cast<double>(m_ - phase_)) * ln_cplus_;
    Float aneg = lambda_ * pm_ + Float(static_cast<double>(m_ - phase_)) * ln_cminus_;
    Float phi = 0;
    for (std::uint64_t r = 0; r < num_subsets_; ++r) {
      Float q = to_float(cond_pattern_prob(trial, subset_at(r), pattern_));
      Float x = Float(hits_[r]);
      phi += fexp(apos + lambda_ * x) * (1 + q * em1_) + fexp(aneg - lambda_ * x) * (1 + q * em2_);
    }
    return phi;
  }

  // Reference mode: conditional expectation before assigning the current
  // position (all remaining positions uniform).
  Float phi_before_step() const {
    require_active();
    Float apos = -lambda_ * pm_ + Float(static_cast<double>(m_ - phase_)) * ln_cplus_;
    Float aneg = lambda_ * pm_ + Float(static_cast<double>(m_ - phase_)) * ln_cminus_;
    Float phi = 0;
    for (std::uint64_t r = 0; r < num_subsets_; ++r) {
      Float q = to_float(cond_pattern_prob(current_, subset_at(r), pattern_));
      Float x = Float(hits_[r]);
      phi += fexp(apos + lambda_ * x) * (1 + q * em1_) + fexp(aneg - lambda_ * x) * (1 + q * em2_);
    }
    return phi;
  }

  // Phi of the finished family (no randomness left).
  Float final_phi() const {
    Float phi = 0;
    for (std::uint64_t r = 0; r < num_subsets_; ++r) {
      Float x = Float(hits_[r]);
      phi += fexp(lambda_ * (x - pm_)) + fexp(lambda_ * (pm_ - x));
    }
    return phi;
  }

  // Evaluates all candidate colors at the current position, commits the
  // minimizer (ties to the smallest color), and advances.
  color_t single_step() {
    require_active();
    int i = step_;
    scores_.assign(static_cast<std::size_t>(l_), Float(0));
    const bool inj = pattern_.injective();
    for (std::uint64_t r : member_ranks_[static_cast<std::size_t>(i)]) {
      if (dead_[r]) continue;
      Float w = wtab_[hits_[r] - wbase_];
      const std::uint8_t* occ = occ_.data() + r * static_cast<std::uint64_t>(l_);
      int a = assigned_[r];
      if (inj) {
        Float wq = w * inj_q_[static_cast<std::size_t>(a)];
        for (int c = 0; c < l_; ++c)
          if (occ[c] == 0) scores_[static_cast<std::size_t>(c)] += wq;
      } else {
        int rem = k_ - a;  // unassigned in S, including position i
        Float denom = 1;
        for (int c = 0; c < l_; ++c)
          denom *= fact_[static_cast<std::size_t>(pattern_.sizes[static_cast<std::size_t>(c)] - occ[c])];
        Float base = w * fact_[static_cast<std::size_t>(rem - 1)] * inv_l_pow_[static_cast<std::size_t>(rem - 1)] / denom;
        for (int c = 0; c < l_; ++c) {
          int dc = pattern_.sizes[static_cast<std::size_t>(c)] - occ[c];
          if (dc > 0) scores_[static_cast<std::size_t>(c)] += base * Float(dc);
        }
      }
    }
    color_t best = 0;
    for (int c = 1; c < l_; ++c)
      if (scores_[static_cast<std::size_t>(c)] < scores_[static_cast<std::size_t>(best)])
        best = static_cast<color_t>(c);
    if (!is_finite(scores_[static_cast<std::size_t>(best)])) throw greedy_overflow{};

#ifdef BPHF_GREEDY_PARANOID
    // full-recompute monotonicity check; orders of magnitude slower
    {
      Float before = phi_before_step();
      Float after = conditional_phi(best);
      if (!(after <= before * Float(1 + 1e-7)))
        throw construction_error("greedy step increased the conditional potential");
    }
#endif

    current_[static_cast<std::size_t>(i)] = best;
    for (std::uint64_t r : member_ranks_[static_cast<std::size_t>(i)]) {
      if (dead_[r]) continue;
      std::uint8_t* occ = occ_.data() + r * static_cast<std::uint64_t>(l_);
      int cap = inj ? 1 : pattern_.sizes[static_cast<std::size_t>(best)];
      if (occ[best] >= cap) {
        dead_[r] = 1;
      } else {
        ++occ[best];
        ++assigned_[r];
      }
    }

    if (++step_ == n_) finish_phase();
    return best;
  }

  // Runs to completion and returns the family.
  FunctionFamily run() {
    while (!done()) single_step();
    return FunctionFamily(n_, l_, std::move(finished_));
  }

private:
  static Float to_float(const Rat& r) { return r.template convert_to<Float>(); }
  static Float fexp(const Float& x) {
    using std::exp;
    return exp(x);
  }
  static Float flog(const Float& x) {
    using std::log;
    return log(x);
  }
  static bool is_finite(const Float& x) {
    using std::isfinite;
    return isfinite(x);
  }

  void require_active() const {
    if (done()) throw parameter_error("greedy builder already finished");
  }

  void begin_phase() {
    // X values are frozen during a phase; tabulate W over their range.
    std::uint32_t lo = hits_.empty() ? 0 : hits_[0], hi = lo;
    for (std::uint32_t x : hits_) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    wbase_ = lo;
    Float apos = -lambda_ * pm_ + Float(static_cast<double>(m_ - phase_)) * ln_cplus_;
    Float aneg = lambda_ * pm_ + Float(static_cast<double>(m_ - phase_)) * ln_cminus_;
    wtab_.resize(hi - lo + 1);
    for (std::uint32_t x = lo; x <= hi; ++x) {
      Float fx(x);
      wtab_[x - lo] = fexp(apos + lambda_ * fx) * em1_ + fexp(aneg - lambda_ * fx) * em2_;
      if (!is_finite(wtab_[x - lo])) throw greedy_overflow{};
    }
  }

  void finish_phase() {
    finished_.insert(finished_.end(), current_.begin(), current_.end());
    for (std::uint64_t r = 0; r < num_subsets_; ++r) {
      if (!dead_[r]) ++hits_[r];  // survived every quota check => pattern met
      dead_[r] = 0;
      assigned_[r] = 0;
    }
    std::fill(occ_.begin(), occ_.end(), 0);
    std::fill(current_.begin(), current_.end(), kUnassigned);
    step_ = 0;
    ++phase_;
    if (phase_ <= m_) begin_phase();
  }

  ConstructionParams params_;
  SplitPattern pattern_;
  int n_ = 0, k_ = 0, l_ = 0;
  std::uint64_t m_ = 0;
  std::uint64_t num_subsets_ = 0;

  std::vector<int> elems_;
  std::vector<std::vector<std::uint64_t>> member_ranks_;
  std::vector<std::uint32_t> hits_;
  std::vector<std::uint8_t> occ_;
  std::vector<std::uint8_t> assigned_;
  std::vector<std::uint8_t> dead_;
  std::vector<color_t> current_;
  std::vector<color_t> finished_;

  Float lambda_{}, em1_{}, em2_{}, ln_cplus_{}, ln_cminus_{}, pm_{};
  std::vector<Float> inj_q_, fact_, inv_l_pow_, wtab_, scores_;
  std::uint32_t wbase_ = 0;
  std::uint64_t phase_ = 1;
  int step_ = 0;
};

// Twice the double mantissa, for the escalation rerun.
using WideFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<32>>;
using GreedyBuilderEscalated = GreedyBuilder<WideFloat>;

struct DerandResult {
  CertifiedFamily<FunctionFamily> certified;
  BalanceReport report;
  bool escalated = false;  // true if the wide-float rerun produced the family
};

namespace detail {

inline DerandResult run_greedy_verified(const ConstructionParams& params,
                                        const SplitPattern& pattern,
                                        const VerifyOptions& verify) {
  BalanceCertificate cert{params.p * Rat(params.M), params.delta, pattern};
  auto attempt = [&](auto tag) -> std::optional<DerandResult> {
    using F = decltype(tag);
    try {
      FunctionFamily fam = GreedyBuilder<F>(params, pattern).run();
      BalanceReport rep = verify_balance(fam, pattern, verify);
      if (certificate_holds(cert, rep))
        return DerandResult{{std::move(fam), cert}, std::move(rep),
                            !std::is_same_v<F, double>};
    } catch (const greedy_overflow&) {
      // fall through to the wider float
    }
    return std::nullopt;
  };
  if (auto r = attempt(double{})) return std::move(*r);
  if (auto r = attempt(WideFloat{})) return std::move(*r);
  throw construction_error("greedy derandomization failed exact verification of (T=" +
                           rat_to_string(cert.T) + ", delta=" + rat_to_string(cert.delta) +
                           ") even after precision escalation");
}

}  // namespace detail

// delta-balanced (n,k)-family of perfect hash functions of size
// ceil(16(k ln n + 1)/(p (delta-1)^2)), p = k!/k^k, verified exactly.
inline DerandResult build_derandomized(int n, int k, const Rat& delta,
                                       const VerifyOptions& verify = {}) {
  if (k < 1 || k > n) throw parameter_error("require 1 <= k <= n");
  validate_delta(delta);
  Rat p = p_perfect(k);
  ConstructionParams params{n, k, k, delta, p, size_derandomized(n, k, p, delta)};
  return detail::run_greedy_verified(params, SplitPattern::make(k, k), verify);
}

// Pattern-generalized greedy: a delta-balanced (n,k,l)-splitter by the same
// potential-function method with the split probability in place of k!/k^k.
// This generalization goes beyond the k = l statement the potential argument
// was designed for; the exact verifier remains the acceptance gate.
inline DerandResult build_derandomized_splitter(int n, int k, int l, const Rat& delta,
                                                const VerifyOptions& verify = {}) {
  if (k < 1 || k > n) throw parameter_error("require 1 <= k <= n");
  if (l < 1) throw parameter_error("require l >= 1");
  validate_delta(delta);
  if (l == 1) {
    auto triv = trivial_one_part_splitter(n, k);
    BalanceReport rep;
    rep.min_count = rep.max_count = 1;
    for_each_subset(n, k, [&](const std::vector<int>& s) {
      if (rep.arg_min.empty()) rep.arg_min = rep.arg_max = s;
      return false;
    });
    return {std::move(triv), std::move(rep), false};
  }
  Rat p = p_pattern(k, l);
  ConstructionParams params{n, k, l, delta, p, size_derandomized(n, k, p, delta)};
  return detail::run_greedy_verified(params, SplitPattern::make(k, l), verify);
}

}  // namespace bphf
