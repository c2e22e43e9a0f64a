#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

// Compact undirected graph. Offset array + flat neighbor array, neighbor
// lists sorted ascending. Instances are immutable once built: every
// constructor/builder establishes symmetry, no self loops, no duplicates.

namespace bisectlab {

class Graph {
 public:
  using node = std::int32_t;
  using edge = std::pair<node, node>;

  Graph() : offsets_(1, 0) {}

  explicit Graph(node num_nodes) : offsets_(static_cast<std::size_t>(num_nodes) + 1, 0) {
    if (num_nodes < 0) throw std::invalid_argument("negative node count");
  }

  static Graph from_edges(node num_nodes, const std::vector<edge>& edges) {
    if (num_nodes < 0) throw std::invalid_argument("negative node count");
    Graph g;
    g.offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
    for (const auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes)
        throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self loop");
      ++g.offsets_[static_cast<std::size_t>(u) + 1];
      ++g.offsets_[static_cast<std::size_t>(v) + 1];
    }
    for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.adj_.resize(static_cast<std::size_t>(g.offsets_.back()));
    std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
      g.adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)]++)] = v;
      g.adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = u;
    }
    for (node v = 0; v < num_nodes; ++v) {
      auto list = g.mutable_neighbors(v);
      std::sort(list.begin(), list.end());
      if (std::adjacent_find(list.begin(), list.end()) != list.end())
        throw std::invalid_argument("duplicate edge");
    }
    return g;
  }

  node num_nodes() const { return static_cast<node>(offsets_.size() - 1); }

  std::int64_t num_edges() const { return static_cast<std::int64_t>(adj_.size()) / 2; }

  std::span<const node> neighbors(node v) const {
    auto lo = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    auto hi = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
    return {adj_.data() + lo, hi - lo};
  }

  std::int64_t degree(node v) const {
    return offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)];
  }

  bool has_edge(node u, node v) const {
    auto list = neighbors(u);
    return std::binary_search(list.begin(), list.end(), v);
  }

  // canonical edge stream: (u, v) with u < v, lexicographic
  template <class F>
  void for_each_edge(F&& f) const {
    for (node u = 0; u < num_nodes(); ++u)
      for (node v : neighbors(u))
        if (v > u) f(u, v);
  }

 private:
  std::span<node> mutable_neighbors(node v) {
    auto lo = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    auto hi = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
    return {adj_.data() + lo, hi - lo};
  }

  std::vector<std::int64_t> offsets_;
  std::vector<node> adj_;
};

inline Graph complement(const Graph& g) {
  const Graph::node n = g.num_nodes();
  std::vector<Graph::edge> edges;
  for (Graph::node u = 0; u < n; ++u) {
    auto adj = g.neighbors(u);
    std::size_t i = 0;
    for (Graph::node v = u + 1; v < n; ++v) {
      while (i < adj.size() && adj[i] < v) ++i;
      if (i < adj.size() && adj[i] == v) continue;
      edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(n, edges);
}

struct SubgraphResult {
  Graph graph;
  std::vector<Graph::node> to_old;  // new id -> old id, ascending
  std::vector<Graph::node> to_new;  // old id -> new id, -1 if dropped
};

// Induced subgraph on `keep`, relabelled contiguously in ascending old-id
// order. Duplicate entries in keep are ignored.
inline SubgraphResult induced_subgraph(const Graph& g, const std::vector<Graph::node>& keep) {
  const Graph::node n = g.num_nodes();
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (Graph::node v : keep) {
    if (v < 0 || v >= n) throw std::invalid_argument("keep contains out-of-range node");
    in[static_cast<std::size_t>(v)] = 1;
  }
  SubgraphResult r;
  r.to_new.assign(static_cast<std::size_t>(n), -1);
  for (Graph::node v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)]) {
      r.to_new[static_cast<std::size_t>(v)] = static_cast<Graph::node>(r.to_old.size());
      r.to_old.push_back(v);
    }
  std::vector<Graph::edge> edges;
  for (Graph::node u : r.to_old)
    for (Graph::node v : g.neighbors(u))
      if (v > u && in[static_cast<std::size_t>(v)])
        edges.emplace_back(r.to_new[static_cast<std::size_t>(u)],
                           r.to_new[static_cast<std::size_t>(v)]);
  r.graph = Graph::from_edges(static_cast<Graph::node>(r.to_old.size()), edges);
  return r;
}

}  // namespace bisectlab
