#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cgraph/graph.hpp"
#include "cgraph/types.hpp"

namespace cgraph {

// Synthetic lattice digraphs on a rows x cols grid (torus when wrap is
// set). Every adjacency slot — each cell paired with its right and down
// neighbor — receives one independent draw:
//   kOriented: edge u->v with probability p_forward, else v->u.
//   kSampled:  u->v with p_forward, v->u with p_backward, otherwise none.
// Duplicate directed edges (possible on degenerate wrapped dimensions of
// size <= 2) collapse; self-pairs are skipped.
enum class LatticeScheme { kOriented, kSampled };

struct LatticeSpec {
  VertexId rows = 0;
  VertexId cols = 0;
  bool wrap = true;
  LatticeScheme scheme = LatticeScheme::kOriented;
  // Negative values select the scheme defaults: 0.5/0.5 for kOriented,
  // 0.3/0.3 for kSampled.
  double p_forward = -1.0;
  double p_backward = -1.0;
  std::uint64_t seed = 1;
};

Graph gen_lattice(const LatticeSpec& spec);

// Uniform digraph with exactly m distinct non-loop directed edges.
Graph gen_random_digraph(VertexId n, EdgeIndex m, std::uint64_t seed);

// Text adjacency format:
//   AdjacencyGraph
//   <n>
//   <m>
//   <n list begins: one per vertex>
//   <m targets: one per edge>
// One integer per line; offsets are the start index of each vertex's
// neighbor list within the target array.
Graph load_adjacency_text(std::istream& in);
void write_adjacency_text(const Graph& g, std::ostream& out);

// Binary format: little-endian header {magic "CGR1", flags u32, n u64,
// m u64} followed by n+1 offsets (u64) and m targets (u32, or u64 when the
// wide-id flag is set). Flag bit 0 marks a symmetric graph (no transpose
// rebuilt on load), bit 1 marks 64-bit target words.
Graph load_binary(std::istream& in);
void write_binary(const Graph& g, std::ostream& out);

// File-level wrappers. Loading sniffs the binary magic and falls back to
// the text parser; writing picks the format from the extension (.bin and
// .cgr are binary, anything else text).
Graph load_graph(const std::string& path);
void write_graph(const Graph& g, const std::string& path);

}  // namespace cgraph
