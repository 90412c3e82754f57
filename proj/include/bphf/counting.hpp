#pragma once

// Color-coding approximate counting of simple paths and cycles.
//
// Per coloring, the colorful-path dynamic program runs k phases over
// (vertex, color-subset) pairs; one phase-k table gives the number of
// colorful paths with k vertices ending at each vertex, counted once per
// traversal direction. Aggregating over a certified (|V|,k)-family and
// dividing by T (paths) or kT (cycles), and by 2 for undirected graphs,
// sandwiches the true count within [exact/delta, delta*exact].
//
// Counts use unbounded-precision integers; divisors and results are exact
// rationals. Exact brute-force oracles live at the bottom.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "bphf/family.hpp"
#include "bphf/graph.hpp"
#include "bphf/parallel.hpp"
#include "bphf/rational.hpp"

namespace bphf {

namespace detail {

inline void check_coloring_args(const Graph& g, std::span<const color_t> coloring, int k) {
  if (k < 1 || k > 30) throw parameter_error("colorful DP supports 1 <= k <= 30");
  if ((static_cast<std::uint64_t>(g.num_vertices()) << k) > (1ull << 28))
    throw budget_error("colorful DP table of |V| * 2^k entries is too large");
  if (static_cast<int>(coloring.size()) != g.num_vertices())
    throw parameter_error("coloring must assign a color to every vertex");
  for (color_t c : coloring)
    if (c >= static_cast<color_t>(k)) throw parameter_error("coloring uses a color >= k");
}

// Shared DP core. seed < 0 starts paths at every vertex; otherwise only at
// the seed vertex. Returns the phase-k layer: count[v * 2^k + full_mask].
inline std::vector<Int> colorful_dp(const Graph& g, std::span<const color_t> coloring, int k,
                                    int seed) {
  int n = g.num_vertices();
  std::size_t width = std::size_t{1} << k;
  std::vector<Int> prev(static_cast<std::size_t>(n) * width), cur(prev.size());
  for (int v = 0; v < n; ++v) {
    if (seed >= 0 && v != seed) continue;
    prev[static_cast<std::size_t>(v) * width + (std::size_t{1} << coloring[static_cast<std::size_t>(v)])] = 1;
  }
  for (int phase = 2; phase <= k; ++phase) {
    for (auto& c : cur) c = 0;
    for (std::uint32_t mask = 0; mask < width; ++mask) {
      if (std::popcount(mask) != phase) continue;
      for (int v = 0; v < n; ++v) {
        std::uint32_t cv = static_cast<std::uint32_t>(1) << coloring[static_cast<std::size_t>(v)];
        if (!(mask & cv)) continue;
        Int acc = 0;
        for (int u : g.in_neighbors(v))
          acc += prev[static_cast<std::size_t>(u) * width + (mask ^ cv)];
        if (acc != 0) cur[static_cast<std::size_t>(v) * width + mask] = std::move(acc);
      }
    }
    std::swap(prev, cur);
  }
  return prev;
}

}  // namespace detail

struct ColorfulPathCounts {
  std::vector<Int> per_end_vertex;  // colorful paths with k vertices ending at v
  Int total;
};

// Exact number of colorful paths with k vertices (length k-1) under one
// coloring; undirected paths are counted once per direction.
inline ColorfulPathCounts colorful_path_total(const Graph& g, std::span<const color_t> coloring,
                                              int k) {
  detail::check_coloring_args(g, coloring, k);
  int n = g.num_vertices();
  std::size_t width = std::size_t{1} << k;
  std::uint32_t full = static_cast<std::uint32_t>(width) - 1;
  auto layer = detail::colorful_dp(g, coloring, k, -1);
  ColorfulPathCounts res;
  res.per_end_vertex.resize(static_cast<std::size_t>(n));
  res.total = 0;
  for (int v = 0; v < n; ++v) {
    res.per_end_vertex[static_cast<std::size_t>(v)] =
        layer[static_cast<std::size_t>(v) * width + full];
    res.total += res.per_end_vertex[static_cast<std::size_t>(v)];
  }
  return res;
}

// Colorful k-vertex closed walks: paths seeded at s whose end vertex closes an
// edge back to s, summed over all seeds. Each colorful cycle contributes k
// (directed) or 2k (undirected) to this sum.
inline Int colorful_cycle_total(const Graph& g, std::span<const color_t> coloring, int k) {
  detail::check_coloring_args(g, coloring, k);
  int n = g.num_vertices();
  std::size_t width = std::size_t{1} << k;
  std::uint32_t full = static_cast<std::uint32_t>(width) - 1;
  Int total = 0;
  for (int s = 0; s < n; ++s) {
    auto layer = detail::colorful_dp(g, coloring, k, s);
    for (int v : g.in_neighbors(s)) {  // edge (v, s) closes the cycle
      if (v == s) continue;
      total += layer[static_cast<std::size_t>(v) * width + full];
    }
  }
  return total;
}

struct ApproxCount {
  Int raw;           // aggregate over the whole family
  Rat divisor;       // T * k-factor * direction factor, exact
  Rat value;         // raw / divisor
  BalanceCertificate certificate;  // the certificate the guarantee rests on
};

namespace detail {

template <FamilyLike F>
void check_counting_family(const Graph& g, int k, const CertifiedFamily<F>& fam) {
  const auto& p = fam.certificate.pattern;
  if (!(p.k == k && p.l == k && fam.family.range_size() == k))
    throw parameter_error("counting needs a (|V|,k) perfect-hash certificate");
  if (fam.family.domain_size() != g.num_vertices())
    throw parameter_error("family domain must equal the vertex count");
}

// Sum of per-coloring totals over the family, enumerated lazily and in
// parallel over index ranges with deterministic merging.
template <FamilyLike F, class PerColoring>
Int aggregate_over_family(const F& family, int threads, PerColoring&& per_coloring) {
  unsigned workers = resolve_threads(threads);
  std::vector<Int> partial(workers, Int(0));
  parallel_chunks(family.size(), static_cast<int>(workers),
                  [&](unsigned w, std::uint64_t b, std::uint64_t e) {
                    std::vector<color_t> coloring;
                    Int acc = 0;
                    for (std::uint64_t i = b; i < e; ++i) {
                      family.extract(i, coloring);
                      acc += per_coloring(coloring);
                    }
                    partial[w] = std::move(acc);
                  });
  Int total = 0;
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace detail

// Approximate number of simple paths with k vertices:
// sum over the family of colorful totals, divided by T (and 2 if undirected).
template <FamilyLike F>
ApproxCount approx_count_paths(const Graph& g, int k, const CertifiedFamily<F>& fam,
                               int threads = 0) {
  detail::check_counting_family(g, k, fam);
  Int raw = detail::aggregate_over_family(fam.family, threads, [&](const std::vector<color_t>& col) {
    return colorful_path_total(g, col, k).total;
  });
  // a single-vertex path has only one traversal, so no direction halving
  Rat dir = (!g.directed() && k >= 2) ? Rat(2) : Rat(1);
  Rat divisor = fam.certificate.T * dir;
  return {raw, divisor, Rat(raw) / divisor, fam.certificate};
}

// Approximate number of simple cycles of size k: closed-walk aggregate
// divided by k*T (and 2 if undirected).
template <FamilyLike F>
ApproxCount approx_count_cycles(const Graph& g, int k, const CertifiedFamily<F>& fam,
                                int threads = 0) {
  if (g.directed() ? k < 2 : k < 3)
    throw parameter_error(g.directed() ? "directed cycles need k >= 2"
                                       : "undirected cycles need k >= 3");
  detail::check_counting_family(g, k, fam);
  Int raw = detail::aggregate_over_family(fam.family, threads, [&](const std::vector<color_t>& col) {
    return colorful_cycle_total(g, col, k);
  });
  Rat dir = g.directed() ? Rat(1) : Rat(2);
  Rat divisor = fam.certificate.T * Rat(k) * dir;
  return {raw, divisor, Rat(raw) / divisor, fam.certificate};
}

struct OracleBudget {
  int max_vertices = 40;
  int max_k = 6;
};

namespace detail {

// min_vertex < 0 visits every sequence; otherwise vertices below it are
// pruned (canonical minimum-start cycle enumeration).
template <class Visit>
void dfs_paths(const Graph& g, int k, std::vector<int>& stack, std::vector<char>& used,
               int min_vertex, Visit&& visit) {
  if (static_cast<int>(stack.size()) == k) {
    visit(stack);
    return;
  }
  for (int next : g.out_neighbors(stack.back())) {
    if (used[static_cast<std::size_t>(next)] || next < min_vertex) continue;
    used[static_cast<std::size_t>(next)] = 1;
    stack.push_back(next);
    dfs_paths(g, k, stack, used, min_vertex, visit);
    stack.pop_back();
    used[static_cast<std::size_t>(next)] = 0;
  }
}

inline void check_oracle_budget(const Graph& g, int k, const OracleBudget& budget) {
  if (g.num_vertices() > budget.max_vertices || k > budget.max_k)
    throw budget_error("exact enumeration limited to |V| <= " +
                       std::to_string(budget.max_vertices) + " and k <= " +
                       std::to_string(budget.max_k));
  if (k < 1) throw parameter_error("k must be >= 1");
}

}  // namespace detail

// Exact number of simple paths with k vertices, by DFS enumeration of vertex
// sequences (undirected sequences come in direction pairs; halved).
inline Int exact_count_paths(const Graph& g, int k, const OracleBudget& budget = {}) {
  detail::check_oracle_budget(g, k, budget);
  Int sequences = 0;
  std::vector<int> stack;
  std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
  for (int s = 0; s < g.num_vertices(); ++s) {
    stack.assign(1, s);
    std::fill(used.begin(), used.end(), 0);
    used[static_cast<std::size_t>(s)] = 1;
    detail::dfs_paths(g, k, stack, used, -1, [&](const std::vector<int>&) { ++sequences; });
  }
  if (!g.directed() && k >= 2) {
    // every path was traversed from both ends
    return sequences / 2;
  }
  return sequences;
}

// Exact number of simple cycles of size k. Canonical form: the sequence
// starts at the cycle's minimum vertex; undirected cycles (k >= 3) are seen
// once per orientation and halved. Directed 2-cycles are antiparallel pairs.
inline Int exact_count_cycles(const Graph& g, int k, const OracleBudget& budget = {}) {
  detail::check_oracle_budget(g, k, budget);
  if (g.directed() ? k < 2 : k < 3)
    throw parameter_error(g.directed() ? "directed cycles need k >= 2"
                                       : "undirected cycles need k >= 3");
  Int closed = 0;
  std::vector<int> stack;
  std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
  for (int s = 0; s < g.num_vertices(); ++s) {
    stack.assign(1, s);
    std::fill(used.begin(), used.end(), 0);
    used[static_cast<std::size_t>(s)] = 1;
    detail::dfs_paths(g, k, stack, used, s, [&](const std::vector<int>& seq) {
      if (g.has_edge(seq.back(), s)) ++closed;
    });
  }
  if (!g.directed()) return closed / 2;
  return closed;
}

}  // namespace bphf
