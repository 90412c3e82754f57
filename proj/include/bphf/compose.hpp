#pragma once

// The two composition operations on certified families, as lazy views.
//
// Both views enumerate their function tuples in a fixed lexicographic index
// order (outer family outermost, last inner family fastest), so they satisfy
// the same enumeration contract as a materialized family. Their subset counts
// are computed by the factorized identities below, which are exact integer
// rearrangements of the brute-force count over all tuples:
//
//   range composition   inj(S) = sum over h 1-1 on S of inj_G(h(S))
//   parts composition   inj(S) = sum over h of prod_j inj_{G_j}(S cut h^-1(j))
//
// (any tuple term with an oversized part contributes a zero factor, so the
// parts sum automatically restricts to the h that split S correctly).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "bphf/family.hpp"

namespace bphf {

namespace detail {

inline std::uint64_t checked_size_product(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / 2 / a)
    throw budget_error("composed family size exceeds the representable range");
  return a * b;
}

// Exact count of functions of f that are 1-1 on small subsets, with a pair
// table for the dominant |X| = 2 case and a memo for rarer larger queries.
template <FamilyLike F>
class InjectiveCountCache {
public:
  explicit InjectiveCountCache(const F& f, int pair_table_max_n = 2048) : f_(f) {
    int n = f_.domain_size();
    m_ = f_.size();
    if (f_.range_size() >= 2 && n >= 2 && n <= pair_table_max_n) {
      pairs_.assign(static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) - 1) / 2, 0);
      std::vector<color_t> vals;
      for (std::uint64_t i = 0; i < m_; ++i) {
        f_.extract(i, vals);
        for (int y = 1; y < n; ++y)
          for (int x = 0; x < y; ++x)
            if (vals[static_cast<std::size_t>(x)] != vals[static_cast<std::size_t>(y)])
              ++pairs_[pair_rank(x, y)];
      }
      have_pairs_ = true;
    }
  }

  std::uint64_t count(std::span<const int> x) const {
    if (static_cast<int>(x.size()) > f_.range_size()) return 0;
    if (x.size() <= 1) return m_;
    if (x.size() == 2 && have_pairs_) {
      int a = x[0], b = x[1];
      if (a > b) std::swap(a, b);
      return pairs_[pair_rank(a, b)];
    }
    std::vector<int> key(x.begin(), x.end());
    std::sort(key.begin(), key.end());
    {
      std::lock_guard<std::mutex> lock(memo_mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    std::uint64_t c =
        f_.count_on_subset(key, SplitPattern::make(static_cast<int>(x.size()), f_.range_size()));
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.emplace(std::move(key), c);
    return c;
  }

private:
  std::size_t pair_rank(int x, int y) const {
    return static_cast<std::size_t>(y) * (static_cast<std::size_t>(y) - 1) / 2 +
           static_cast<std::size_t>(x);
  }

  const F& f_;
  std::uint64_t m_ = 0;
  bool have_pairs_ = false;
  std::vector<std::uint64_t> pairs_;
  mutable std::mutex memo_mutex_;
  mutable std::map<std::vector<int>, std::uint64_t> memo_;
};

}  // namespace detail

// g after h: function (h,g) maps x to g(h(x)). Index = ih * |G| + ig.
template <FamilyLike H, FamilyLike G>
class ComposedRangeFamily {
public:
  ComposedRangeFamily(H h, G g) : h_(std::move(h)), g_(std::move(g)) {
    if (g_.domain_size() != h_.range_size())
      throw parameter_error("range composition needs G domain == H range");
    size_ = detail::checked_size_product(h_.size(), g_.size());
  }

  int domain_size() const { return h_.domain_size(); }
  int range_size() const { return g_.range_size(); }
  std::uint64_t size() const { return size_; }

  color_t value(std::uint64_t i, int x) const {
    std::uint64_t ih = i / g_.size(), ig = i % g_.size();
    return g_.value(ig, static_cast<int>(h_.value(ih, x)));
  }

  void extract(std::uint64_t i, std::vector<color_t>& out) const {
    int n = domain_size();
    out.resize(static_cast<std::size_t>(n));
    std::uint64_t ih = i / g_.size(), ig = i % g_.size();
    for (int x = 0; x < n; ++x)
      out[static_cast<std::size_t>(x)] = g_.value(ig, static_cast<int>(h_.value(ih, x)));
  }

  std::uint64_t count_cost_hint() const { return h_.size() * (1 + g_.count_cost_hint()); }

  // Exact inj(S) without touching the product. Non-injective patterns are not
  // produced by this composition and fall back to plain enumeration.
  std::uint64_t count_on_subset(std::span<const int> subset, const SplitPattern& pattern) const {
    if (!pattern.injective()) {
      std::uint64_t cnt = 0;
      std::vector<int> occ;
      for (std::uint64_t i = 0; i < size_; ++i)
        if (detail::achieves_pattern(*this, i, subset, pattern, occ)) ++cnt;
      return cnt;
    }
    int k = static_cast<int>(subset.size());
    SplitPattern inner = SplitPattern::make(k, g_.range_size());
    std::uint64_t total = 0;
    std::vector<int> image(static_cast<std::size_t>(k));
    std::vector<bool> seen(static_cast<std::size_t>(h_.range_size()));
    std::uint64_t hm = h_.size();
    for (std::uint64_t ih = 0; ih < hm; ++ih) {
      bool one_to_one = true;
      std::fill(seen.begin(), seen.end(), false);
      for (int t = 0; t < k; ++t) {
        int y = static_cast<int>(h_.value(ih, subset[static_cast<std::size_t>(t)]));
        if (seen[static_cast<std::size_t>(y)]) {
          one_to_one = false;
          break;
        }
        seen[static_cast<std::size_t>(y)] = true;
        image[static_cast<std::size_t>(t)] = y;
      }
      if (one_to_one) total += g_.count_on_subset(image, inner);
    }
    return total;
  }

  const H& outer() const { return h_; }
  const G& inner_family() const { return g_; }

private:
  H h_;
  G g_;
  std::uint64_t size_ = 0;
};

// Interval composition: the range [k] is split into consecutive intervals of
// sizes k_j; tuple (h, g_1..g_l) maps x to offset(I_{h(x)}) + g_{h(x)}(x).
// Index order: h outermost, then g_1, ..., g_l with g_l fastest.
template <FamilyLike H, FamilyLike G>
class ComposedPartsFamily {
public:
  ComposedPartsFamily(H h, std::vector<G> parts) : h_(std::move(h)), parts_(std::move(parts)) {
    if (parts_.empty()) throw parameter_error("parts composition needs at least one part family");
    if (static_cast<int>(parts_.size()) != h_.range_size())
      throw parameter_error("parts composition needs one part family per color of H");
    offsets_.resize(parts_.size() + 1, 0);
    suffix_.resize(parts_.size() + 1, 1);
    for (std::size_t j = 0; j < parts_.size(); ++j)
      if (parts_[j].domain_size() != h_.domain_size())
        throw parameter_error("part family domain must match H domain");
    for (std::size_t j = parts_.size(); j-- > 0;)
      suffix_[j] = detail::checked_size_product(suffix_[j + 1], parts_[j].size());
    for (std::size_t j = 0; j < parts_.size(); ++j)
      offsets_[j + 1] = offsets_[j] + parts_[j].range_size();
    size_ = detail::checked_size_product(h_.size(), suffix_[0]);
    caches_.reserve(parts_.size());
    for (const G& p : parts_)
      caches_.push_back(std::make_unique<detail::InjectiveCountCache<G>>(p));
  }

  // parts_ element addresses are stable under vector move, so the caches'
  // references survive; copying would re-point at the source, hence deleted.
  ComposedPartsFamily(ComposedPartsFamily&&) noexcept = default;
  ComposedPartsFamily& operator=(ComposedPartsFamily&&) noexcept = default;
  ComposedPartsFamily(const ComposedPartsFamily&) = delete;
  ComposedPartsFamily& operator=(const ComposedPartsFamily&) = delete;

  int domain_size() const { return h_.domain_size(); }
  int range_size() const { return offsets_.back(); }
  std::uint64_t size() const { return size_; }

  color_t value(std::uint64_t i, int x) const {
    std::uint64_t ih = i / suffix_[0];
    std::uint64_t rest = i % suffix_[0];
    std::size_t j = static_cast<std::size_t>(h_.value(ih, x));
    std::uint64_t ij = (rest / suffix_[j + 1]) % parts_[j].size();
    return static_cast<color_t>(offsets_[j]) + parts_[j].value(ij, x);
  }

  void extract(std::uint64_t i, std::vector<color_t>& out) const {
    int n = domain_size();
    out.resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) out[static_cast<std::size_t>(x)] = value(i, x);
  }

  std::uint64_t count_cost_hint() const { return h_.size() + 1; }

  std::uint64_t count_on_subset(std::span<const int> subset, const SplitPattern& pattern) const {
    if (!pattern.injective()) {
      std::uint64_t cnt = 0;
      std::vector<int> occ;
      for (std::uint64_t i = 0; i < size_; ++i)
        if (detail::achieves_pattern(*this, i, subset, pattern, occ)) ++cnt;
      return cnt;
    }
    int k = static_cast<int>(subset.size()), l = h_.range_size();
    std::uint64_t total = 0;
    std::vector<std::vector<int>> groups(static_cast<std::size_t>(l));
    std::uint64_t hm = h_.size();
    for (std::uint64_t ih = 0; ih < hm; ++ih) {
      for (auto& g : groups) g.clear();
      for (int t = 0; t < k; ++t) {
        int x = subset[static_cast<std::size_t>(t)];
        groups[static_cast<std::size_t>(h_.value(ih, x))].push_back(x);
      }
      std::uint64_t prod = 1;
      for (std::size_t j = 0; j < groups.size() && prod != 0; ++j)
        prod *= caches_[j]->count(groups[j]);
      total += prod;
    }
    return total;
  }

  const H& splitter() const { return h_; }
  const std::vector<G>& parts() const { return parts_; }

private:
  H h_;
  std::vector<G> parts_;
  std::vector<int> offsets_;
  std::vector<std::uint64_t> suffix_;  // suffix_[j] = prod of |G_t| for t >= j
  std::uint64_t size_ = 0;
  std::vector<std::unique_ptr<detail::InjectiveCountCache<G>>> caches_;
};

// delta-balanced (n,k,l)-splitter composed with a gamma-balanced (l,k)-family:
// a (delta*gamma)-balanced (n,k)-family of size N*M.
template <FamilyLike H, FamilyLike G>
CertifiedFamily<ComposedRangeFamily<H, G>> compose_range(CertifiedFamily<H> splitter,
                                                         CertifiedFamily<G> range_family) {
  const auto& hp = splitter.certificate.pattern;
  const auto& gp = range_family.certificate.pattern;
  if (!hp.injective() || hp.k >= hp.l)
    throw parameter_error("range composition needs a 1-1 splitter with k < l");
  if (hp.l != splitter.family.range_size())
    throw parameter_error("splitter certificate range mismatch");
  if (gp.k != hp.k || gp.l != gp.k)
    throw parameter_error("range composition needs a perfect (l,k)-family with matching k");
  if (range_family.family.domain_size() != splitter.family.range_size() ||
      range_family.family.range_size() != gp.k)
    throw parameter_error("range composition domain/range mismatch");
  BalanceCertificate cert{splitter.certificate.T * range_family.certificate.T,
                          splitter.certificate.delta * range_family.certificate.delta,
                          SplitPattern::make(gp.k, gp.k)};
  cert.validate();
  return {ComposedRangeFamily<H, G>(std::move(splitter.family), std::move(range_family.family)),
          std::move(cert)};
}

// delta-balanced (n,k,l)-splitter composed with per-part gamma_j-balanced
// (n,k_j)-families: a (delta*prod gamma_j)-balanced (n,k)-family.
template <FamilyLike H, FamilyLike G>
CertifiedFamily<ComposedPartsFamily<H, G>> compose_parts(CertifiedFamily<H> splitter,
                                                         std::vector<CertifiedFamily<G>> parts) {
  const auto& hp = splitter.certificate.pattern;
  if (hp.k < hp.l)
    throw parameter_error("parts composition needs k >= l (every part size positive)");
  if (hp.l != splitter.family.range_size())
    throw parameter_error("splitter certificate range mismatch");
  if (static_cast<int>(parts.size()) != hp.l)
    throw parameter_error("parts composition needs exactly l part families");
  std::vector<int> expected = part_sizes(hp.k, hp.l);
  Rat t = splitter.certificate.T;
  Rat delta = splitter.certificate.delta;
  std::vector<G> inner;
  inner.reserve(parts.size());
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto& pj = parts[j].certificate.pattern;
    int kj = expected[j];
    if (pj.k != kj || pj.l != kj || parts[j].family.range_size() != kj)
      throw parameter_error("part family " + std::to_string(j + 1) + " must be a perfect (n," +
                            std::to_string(kj) + ")-family");
    if (parts[j].family.domain_size() != splitter.family.domain_size())
      throw parameter_error("part family domain must match the splitter domain");
    t *= parts[j].certificate.T;
    delta *= parts[j].certificate.delta;
    inner.push_back(std::move(parts[j].family));
  }
  BalanceCertificate cert{std::move(t), std::move(delta), SplitPattern::make(hp.k, hp.k)};
  cert.validate();
  return {ComposedPartsFamily<H, G>(std::move(splitter.family), std::move(inner)),
          std::move(cert)};
}

// Materializes any family view; guarded because composed sizes can exceed
// memory by design.
template <FamilyLike F>
FunctionFamily materialize(const F& family, std::uint64_t max_entries = 100'000'000) {
  std::uint64_t entries =
      detail::checked_size_product(family.size(), static_cast<std::uint64_t>(family.domain_size()));
  if (entries > max_entries)
    throw budget_error("materialization of " + std::to_string(entries) + " entries exceeds cap " +
                       std::to_string(max_entries));
  std::vector<color_t> flat;
  flat.reserve(static_cast<std::size_t>(entries));
  std::vector<color_t> tmp;
  for (std::uint64_t i = 0; i < family.size(); ++i) {
    family.extract(i, tmp);
    flat.insert(flat.end(), tmp.begin(), tmp.end());
  }
  return FunctionFamily(family.domain_size(), family.range_size(), std::move(flat));
}

// Single-function one-part splitter: every function achieves the one-part
// split, so the constant family certifies (T=1, delta=1).
inline CertifiedFamily<FunctionFamily> trivial_one_part_splitter(int n, int k) {
  BalanceCertificate cert{Rat(1), Rat(1), SplitPattern::make(k, 1)};
  return {FunctionFamily::constant_zero(n, 1), std::move(cert)};
}

}  // namespace bphf
