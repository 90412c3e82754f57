#pragma once

// Simple directed/undirected graphs as vertex count + edge list, with the
// line-oriented file format:
//   line 1:  directed <n> <m>   |   undirected <n> <m>
//   then m lines "u v" (0-based). Self-loops and duplicates are rejected
//   with line numbers.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bphf/errors.hpp"
#include "bphf/prng.hpp"
#include "bphf/rational.hpp"

namespace bphf {

class Graph {
public:
  static Graph make(bool directed, int n, std::vector<std::pair<int, int>> edges) {
    Graph g;
    g.directed_ = directed;
    g.n_ = n;
    if (n < 0) throw parameter_error("vertex count must be non-negative");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw parameter_error("edge endpoint out of range");
      if (u == v) throw parameter_error("self-loops are not allowed");
      auto key = directed ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
      if (!seen.insert(key).second) throw parameter_error("duplicate edge");
    }
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
  }

  bool directed() const { return directed_; }
  int num_vertices() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  // For undirected graphs both lists coincide with the neighbor list.
  const std::vector<int>& out_neighbors(int v) const { return out_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& in_neighbors(int v) const { return in_[static_cast<std::size_t>(v)]; }

  bool has_edge(int u, int v) const {
    const auto& row = out_[static_cast<std::size_t>(u)];
    return std::find(row.begin(), row.end(), v) != row.end();
  }

  Graph reversed() const {
    std::vector<std::pair<int, int>> rev;
    rev.reserve(edges_.size());
    for (auto [u, v] : edges_) rev.emplace_back(v, u);
    return make(directed_, n_, std::move(rev));
  }

  // Seeded Erdos-Renyi graph; each candidate edge appears with probability
  // num/den, drawn from the deterministic generator in a fixed pair order.
  static Graph random_gnp(int n, std::uint64_t prob_num, std::uint64_t prob_den, bool directed,
                          std::uint64_t seed) {
    if (prob_den == 0 || prob_num > prob_den || prob_den > UINT32_MAX)
      throw parameter_error("edge probability must be num/den with den in [1, 2^32)");
    SeededRng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = directed ? 0 : u + 1; v < n; ++v) {
        if (u == v) continue;
        if (rng.next_bernoulli(prob_num, prob_den)) edges.emplace_back(u, v);
      }
    return make(directed, n, std::move(edges));
  }

  static Graph parse(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error(1, "missing header");
    std::istringstream hs(line);
    std::string kind;
    long long n = -1, m = -1;
    std::string extra;
    if (!(hs >> kind >> n >> m) || (hs >> extra) || (kind != "directed" && kind != "undirected"))
      throw parse_error(1, "expected 'directed <n> <m>' or 'undirected <n> <m>'");
    if (n < 0 || m < 0) throw parse_error(1, "negative vertex or edge count");
    bool directed = kind == "directed";
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    for (long long i = 0; i < m; ++i) {
      std::size_t lineno = static_cast<std::size_t>(i) + 2;
      if (!std::getline(is, line)) throw parse_error(lineno, "missing edge line");
      std::istringstream es(line);
      long long u = -1, v = -1;
      std::string extra;
      if (!(es >> u >> v) || (es >> extra)) throw parse_error(lineno, "expected 'u v'");
      if (u < 0 || u >= n || v < 0 || v >= n) throw parse_error(lineno, "endpoint out of range");
      if (u == v) throw parse_error(lineno, "self-loop");
      auto key = directed ? std::pair{static_cast<int>(u), static_cast<int>(v)}
                          : std::pair{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
      if (!seen.insert(key).second) throw parse_error(lineno, "duplicate edge");
      edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    if (std::getline(is, line)) throw parse_error(static_cast<std::size_t>(m) + 2, "trailing garbage");
    return make(directed, static_cast<int>(n), std::move(edges));
  }

  void write(std::ostream& os) const {
    os << (directed_ ? "directed " : "undirected ") << n_ << ' ' << edges_.size() << '\n';
    for (auto [u, v] : edges_) os << u << ' ' << v << '\n';
  }

  static Graph read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw parameter_error("cannot open '" + path + "' for reading");
    return parse(is);
  }

private:
  void build_adjacency() {
    out_.assign(static_cast<std::size_t>(n_), {});
    in_.assign(static_cast<std::size_t>(n_), {});
    for (auto [u, v] : edges_) {
      out_[static_cast<std::size_t>(u)].push_back(v);
      in_[static_cast<std::size_t>(v)].push_back(u);
      if (!directed_) {
        out_[static_cast<std::size_t>(v)].push_back(u);
        in_[static_cast<std::size_t>(u)].push_back(v);
      }
    }
  }

  bool directed_ = false;
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> out_, in_;
};

}  // namespace bphf
