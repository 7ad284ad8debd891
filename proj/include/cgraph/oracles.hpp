#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgraph/graph.hpp"
#include "cgraph/lelists.hpp"
#include "cgraph/types.hpp"

namespace cgraph {

// Sequential reference implementations. Single-threaded and written for
// auditability, not speed; every parallel algorithm in the library is
// validated against these, and these in turn are validated against
// definitional brute forces on tiny graphs.

struct SeqScc {
  std::vector<VertexId> label;  // canonical: smallest vertex id in the SCC
  std::uint64_t num_sccs = 0;
  std::uint64_t largest = 0;
};

struct SeqCc {
  std::vector<VertexId> label;  // canonical: smallest vertex id in the component
  std::uint64_t num_components = 0;
};

struct SeqBcc {
  // Vertex set per biconnected component, each sorted ascending, the list
  // sorted lexicographically. A bridge forms a two-vertex component.
  std::vector<std::vector<VertexId>> components;
  std::vector<VertexId> articulation;  // sorted ascending
  std::vector<Edge> bridges;           // (min, max) endpoints, sorted
};

// Exact strongly connected components via an iterative depth-first search
// with an explicit frame stack, so deep graphs cannot overflow the call
// stack.
SeqScc tarjan_scc(const Graph& g);

// Exact biconnected components, articulation points, and bridges of a
// symmetric graph via iterative depth-first search with an edge stack.
SeqBcc hopcroft_tarjan_bcc(const Graph& g);

// Exact elimination lists of a symmetric graph: one pruned breadth-first
// search per vertex in ascending priority order.
std::vector<std::vector<LeListEntry>> cohen_lelists(const Graph& g,
                                                    std::span<const VertexId> priority);

// Textbook breadth-first reachability over out-edges; 1 marks reached.
std::vector<std::uint8_t> seq_bfs_reach(const Graph& g, VertexId src);

// Connected components of a symmetric graph by repeated breadth-first
// search in ascending vertex order.
SeqCc seq_components(const Graph& g);

// Definitional brute forces used to double-check the oracles themselves.
// Exponential or cubic; keep n tiny (<= 12 for SCC/BCC, <= 64 for lists).
SeqScc brute_scc(const Graph& g);
SeqBcc brute_bcc(const Graph& g);
std::vector<std::vector<LeListEntry>> brute_lelists(const Graph& g,
                                                    std::span<const VertexId> priority);

}  // namespace cgraph
