#pragma once

// Undirected 0/1 graphs with optional self-loops, Erdos-Renyi sampling and
// exact subset edge counts.
//
// Conventions used throughout the library:
//  * vertices are 0-based in the API and 1-based in edge-list files;
//  * A[j][j] = 1 for a self-loop and it adds exactly 1 to the degree of j, so
//    the Laplacian L = D - A always satisfies L * 1 = 0;
//  * edge_count(C, C2) is the ordered-pair sum  sum_{j in C, k in C2} A[j][k]
//    (the quadratic form v_C^T A v_C2). For C == C2 an internal edge is
//    counted twice and a self-loop once.

#include "synccert/detail/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace synccert {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Immutable symmetric graph stored as sorted neighbour lists (CSR).
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from unordered edges. Each pair may appear once, in
  /// either orientation; duplicates and out-of-range endpoints throw.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges, bool self_loops_allowed = true) {
    if (n == 0) throw std::invalid_argument("graph must have at least one vertex");
    if (n > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("graph too large");
    std::vector<Edge> norm;
    norm.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n)
        throw std::out_of_range("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                ") out of range for n = " + std::to_string(n));
      if (e.u == e.v && !self_loops_allowed) throw std::invalid_argument("self-loop in a loop-free graph");
      norm.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
    }
    std::sort(norm.begin(), norm.end());
    if (auto dup = std::adjacent_find(norm.begin(), norm.end()); dup != norm.end())
      throw std::invalid_argument("duplicate edge (" + std::to_string(dup->u) + ", " + std::to_string(dup->v) + ")");
    return from_sorted_unique(n, norm, self_loops_allowed);
  }

  std::size_t size() const { return n_; }
  bool self_loops_allowed() const { return self_loops_allowed_; }

  std::span<const Vertex> neighbors(std::size_t j) const {
    return {nbrs_.data() + offsets_[j], nbrs_.data() + offsets_[j + 1]};
  }

  /// Row sum of A; a self-loop contributes 1.
  std::size_t degree(std::size_t j) const { return offsets_[j + 1] - offsets_[j]; }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n_; ++j) d = std::max(d, degree(j));
    return d;
  }

  bool has_edge(std::size_t j, std::size_t k) const {
    auto row = neighbors(j);
    return std::binary_search(row.begin(), row.end(), static_cast<Vertex>(k));
  }

  /// Number of unordered edges, self-loops included.
  std::uint64_t edge_count() const { return (nbrs_.size() + loops_) / 2; }
  std::uint64_t self_loop_count() const { return loops_; }

  /// sum_{j,k} A[j][k].
  std::uint64_t adjacency_sum() const { return nbrs_.size(); }

  /// (sum_{j,k} A[j][k]) / n^2, the natural reference probability for an explicit graph.
  double density() const {
    return static_cast<double>(adjacency_sum()) / (static_cast<double>(n_) * static_cast<double>(n_));
  }

  /// Edges as (u <= v) pairs in row-major order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex j = 0; j < n_; ++j)
      for (Vertex k : neighbors(j))
        if (j <= k) out.push_back({j, k});
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.nbrs_ == b.nbrs_;
  }

 private:
  static Graph from_sorted_unique(std::size_t n, std::span<const Edge> edges, bool loops_allowed) {
    Graph g;
    g.n_ = n;
    g.self_loops_allowed_ = loops_allowed;
    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges) {
      ++deg[e.u];
      if (e.u != e.v) ++deg[e.v];
      else ++g.loops_;
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) g.offsets_[j + 1] = g.offsets_[j] + deg[j];
    g.nbrs_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : edges) {
      g.nbrs_[fill[e.u]++] = e.v;
      if (e.u != e.v) g.nbrs_[fill[e.v]++] = e.u;
    }
    for (std::size_t j = 0; j < n; ++j)
      std::sort(g.nbrs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[j]),
                g.nbrs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[j + 1]));
    return g;
  }

  friend Graph sample_er(std::size_t, double, std::uint64_t, bool);

  std::size_t n_ = 0;
  bool self_loops_allowed_ = true;
  std::uint64_t loops_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> nbrs_;
};

/// Sorted, duplicate-free subset of {0, ..., n-1}.
class VertexSet {
 public:
  VertexSet() = default;

  VertexSet(std::size_t universe, std::vector<Vertex> members) : universe_(universe), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw std::invalid_argument("vertex set has duplicate members");
    if (!members_.empty() && members_.back() >= universe_)
      throw std::out_of_range("vertex " + std::to_string(members_.back()) + " out of range for n = " +
                              std::to_string(universe_));
  }

  static VertexSet all(std::size_t universe) {
    std::vector<Vertex> m(universe);
    for (std::size_t i = 0; i < universe; ++i) m[i] = static_cast<Vertex>(i);
    return {universe, std::move(m)};
  }

  /// Members are the set bits of `mask`; requires universe <= 64.
  static VertexSet from_mask(std::size_t universe, std::uint64_t mask) {
    if (universe > 64) throw std::invalid_argument("bitmask vertex sets need n <= 64");
    std::vector<Vertex> m;
    for (std::size_t i = 0; i < universe; ++i)
      if ((mask >> i) & 1U) m.push_back(static_cast<Vertex>(i));
    return {universe, std::move(m)};
  }

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::span<const Vertex> members() const { return members_; }
  bool contains(Vertex v) const { return std::binary_search(members_.begin(), members_.end(), v); }

  VertexSet complement() const {
    std::vector<Vertex> m;
    m.reserve(universe_ - members_.size());
    auto it = members_.begin();
    for (Vertex v = 0; v < universe_; ++v) {
      if (it != members_.end() && *it == v) ++it;
      else m.push_back(v);
    }
    return {universe_, std::move(m)};
  }

  VertexSet unite(const VertexSet& other) const {
    std::vector<Vertex> m;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                   std::back_inserter(m));
    return {std::max(universe_, other.universe_), std::move(m)};
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<Vertex> members_;
};

/// Erdos-Renyi sample: every unordered pair {j, k}, j < k, and (if
/// `self_loops`) every loop (j, j) is present independently with probability p.
///
/// Pairs are visited in row-major order over j <= k and selected by geometric
/// skipping driven by std::mt19937_64(seed): each skip consumes one 64-bit
/// draw u, converted to U = (u >> 11) * 2^-53, and advances
/// floor(log(1 - U) / log(1 - p)) pairs. The sequence is therefore identical
/// on every platform, and sampling costs O(n + edges).
inline Graph sample_er(std::size_t n, double p, std::uint64_t seed, bool self_loops = true) {
  if (n == 0) throw std::invalid_argument("sample_er: n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_er: p must lie in [0, 1]");
  std::vector<Edge> edges;
  const auto visit = [&](std::uint64_t idx, std::uint64_t& row, std::uint64_t& row_start) {
    // Row j holds n - j pairs (j, j..n-1) when loops are included, n - j - 1 otherwise.
    for (;;) {
      std::uint64_t len = self_loops ? n - row : n - row - 1;
      if (idx < row_start + len) break;
      row_start += len;
      ++row;
    }
    std::uint64_t first = self_loops ? row : row + 1;
    edges.push_back({static_cast<Vertex>(row), static_cast<Vertex>(first + (idx - row_start))});
  };
  const std::uint64_t pairs = self_loops ? std::uint64_t(n) * (n + 1) / 2 : std::uint64_t(n) * (n - 1) / 2;
  std::uint64_t row = 0, row_start = 0;
  if (p >= 1.0) {
    edges.reserve(pairs);
    for (std::uint64_t idx = 0; idx < pairs; ++idx) visit(idx, row, row_start);
  } else if (p > 0.0) {
    std::mt19937_64 rng(seed);
    const double log_q = std::log1p(-p);
    edges.reserve(static_cast<std::size_t>(static_cast<double>(pairs) * p * 1.05) + 16);
    double idx = -1.0;
    for (;;) {
      double u = detail::unit_uniform(rng);
      idx += 1.0 + std::floor(std::log1p(-u) / log_q);
      if (idx >= static_cast<double>(pairs)) break;
      visit(static_cast<std::uint64_t>(idx), row, row_start);
    }
  }
  // Row-major visiting already yields sorted, unique pairs.
  return Graph::from_sorted_unique(n, edges, self_loops);
}

inline Graph complete_graph(std::size_t n, bool self_loops) {
  std::vector<Edge> e;
  for (Vertex j = 0; j < n; ++j)
    for (Vertex k = self_loops ? j : j + 1; k < n; ++k) e.push_back({j, k});
  return Graph::from_edges(n, e, self_loops);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<Edge> e;
  for (Vertex j = 0; j < n; ++j) e.push_back({j, static_cast<Vertex>((j + 1) % n)});
  return Graph::from_edges(n, e, false);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex j = 0; j + 1 < n; ++j) e.push_back({j, j + 1});
  return Graph::from_edges(n, e, false);
}

/// sum_{j in c, k in c2} A[j][k]  (ordered pairs; see the header comment).
inline std::uint64_t edge_count(const Graph& g, const VertexSet& c, const VertexSet& c2) {
  if (c.universe() != g.size() || c2.universe() != g.size())
    throw std::out_of_range("edge_count: vertex set universe does not match graph size");
  if (c.empty() || c2.empty()) return 0;
  std::vector<char> in_c2(g.size(), 0);
  for (Vertex v : c2.members()) in_c2[v] = 1;
  std::uint64_t total = 0;
  for (Vertex j : c.members())
    for (Vertex k : g.neighbors(j)) total += static_cast<std::uint64_t>(in_c2[k]);
  return total;
}

inline std::vector<std::size_t> degree_vector(const Graph& g) {
  std::vector<std::size_t> d(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) d[j] = g.degree(j);
  return d;
}

inline bool is_connected(const Graph& g) {
  std::vector<char> seen(g.size(), 0);
  std::queue<Vertex> q;
  q.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    Vertex j = q.front();
    q.pop();
    for (Vertex k : g.neighbors(j))
      if (!seen[k]) {
        seen[k] = 1;
        ++reached;
        q.push(k);
      }
  }
  return reached == g.size();
}

// ---------------------------------------------------------------------------
// Edge-list text format: first data line "n", then one "j k" line per edge
// (1-based, j <= k, "j j" for a self-loop). Lines starting with '#' and blank
// lines are ignored.

inline Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (!have_n) {
      long long value = 0;
      std::string rest;
      if (!(ls >> value) || (ls >> rest) || value <= 0) throw ParseError(lineno, "expected a positive vertex count");
      n = static_cast<std::size_t>(value);
      have_n = true;
      continue;
    }
    long long j = 0, k = 0;
    std::string rest;
    if (!(ls >> j >> k) || (ls >> rest)) throw ParseError(lineno, "expected \"j k\"");
    if (j < 1 || k < 1 || static_cast<std::size_t>(j) > n || static_cast<std::size_t>(k) > n)
      throw ParseError(lineno, "vertex index out of range 1.." + std::to_string(n));
    if (j > k) throw ParseError(lineno, "edge must be written with j <= k");
    edges.push_back({static_cast<Vertex>(j - 1), static_cast<Vertex>(k - 1)});
    edge_lines.push_back(lineno);
  }
  if (!have_n) throw ParseError(lineno, "missing vertex count");
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (edges[order[i]] == edges[order[i - 1]]) throw ParseError(edge_lines[order[i]], "duplicate edge");
  return Graph::from_edges(n, edges, true);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.size() << '\n';
  for (const auto& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

inline Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path.string());
  return read_edge_list(in);
}

inline void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write graph file " + path.string());
  write_edge_list(g, out);
}

}  // namespace synccert
