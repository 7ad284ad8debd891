#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cgraph/types.hpp"

namespace cgraph {

using Edge = std::pair<VertexId, VertexId>;

// Immutable compressed-sparse-row graph. Neighbor lists are sorted
// ascending with self-loops and duplicate edges removed at build time.
// Directed graphs carry their transpose so algorithms can scan in-edges;
// a graph without a transpose is symmetric and serves as its own reverse.
struct Graph {
  VertexId n = 0;
  EdgeIndex m = 0;
  std::vector<EdgeIndex> offsets;    // length n + 1; offsets[n] == m
  std::vector<VertexId> targets;     // length m
  std::unique_ptr<Graph> transpose;  // null for symmetric graphs

  std::span<const VertexId> out_neighbors(VertexId v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }

  std::span<const VertexId> in_neighbors(VertexId v) const {
    return reverse().out_neighbors(v);
  }

  EdgeIndex out_degree(VertexId v) const { return offsets[v + 1] - offsets[v]; }

  EdgeIndex in_degree(VertexId v) const { return reverse().out_degree(v); }

  // The graph holding this graph's reversed adjacency.
  const Graph& reverse() const { return transpose ? *transpose : *this; }

  bool symmetric() const { return transpose == nullptr; }

  // Structural equality: shape only, transpose ignored.
  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n == b.n && a.m == b.m && a.offsets == b.offsets && a.targets == b.targets;
  }
};

// Builds a canonical CSR graph from an edge list: validates endpoints,
// drops self-loops, sorts and deduplicates. With with_transpose the result
// carries reversed adjacency (the transpose itself has none).
Graph build_graph(VertexId n, std::vector<Edge> edges, bool with_transpose = true);

// Undirected closure: every edge present in both directions, no transpose.
Graph symmetrize(const Graph& g);

// Deep copy (including the transpose, if any).
Graph clone(const Graph& g);

}  // namespace cgraph
