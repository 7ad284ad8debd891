#pragma once

#include <cstdint>
#include <vector>

#include "cgraph/connectivity.hpp"
#include "cgraph/graph.hpp"

namespace cgraph {

struct EulerTour {
  /// Vertex visit sequence of every tree, trees concatenated in ascending
  /// root order; a tree with k vertices contributes 2k-1 visits.
  std::vector<VertexId> order;
  /// Position of each vertex's first/last appearance in order. The
  /// intervals [first[v], last[v]] form a laminar family that mirrors
  /// subtree containment.
  std::vector<std::uint64_t> first;
  std::vector<std::uint64_t> last;
};

/// Euler tour of every tree in the forest, computed round-by-round: the
/// doubled tree edges are chained into one circuit per tree by the
/// next-neighbor rule, cut at the root, and flattened by pointer-jumping
/// list ranking.
EulerTour euler_tour(const SpanningForest& forest);

struct LowHigh {
  /// One-hop extremes: w1[v]/w2[v] fold first[v] with the first positions
  /// of v's non-tree neighbors (min and max respectively).
  std::vector<std::uint64_t> w1;
  std::vector<std::uint64_t> w2;
  /// Subtree extremes: range min of w1 / range max of w2 over the
  /// vertex's tour interval.
  std::vector<std::uint64_t> low;
  std::vector<std::uint64_t> high;
};

/// Per-vertex low/high values via sparse-table range queries over the tour.
LowHigh compute_low_high(const Graph& g, const SpanningForest& forest, const EulerTour& tour);

enum class EdgeKind : std::uint8_t { kTree, kBack, kCross };

struct EdgeClassification {
  /// Kind of every CSR entry of g; the two entries of an undirected edge
  /// always agree.
  std::vector<EdgeKind> kind;
  /// For tree entries: 1 iff the child side's subtree has no non-tree edge
  /// leaving the parent's subtree. Mirrored entries agree; 0 for non-tree
  /// entries.
  std::vector<std::uint8_t> critical;
};

EdgeClassification classify_edges(const Graph& g, const SpanningForest& forest,
                                  const EulerTour& tour, const LowHigh& lh);

struct BcLabeling {
  /// Biconnected-component label per vertex. Tree roots carry kNoVertex:
  /// a root participates in its components only as their head.
  std::vector<VertexId> label;
  /// Head vertex of each label (indexed by label id; kNoVertex elsewhere).
  /// A label's member set plus its head is one biconnected component.
  std::vector<VertexId> head;
};

struct BccPhaseTimes {
  double forest_s = 0;
  double tour_s = 0;
  double low_high_s = 0;
  double final_cc_s = 0;
};

struct BccStats {
  std::uint64_t num_bccs = 0;
  /// Undirected edge counts by class.
  std::uint64_t tree_edges = 0;
  std::uint64_t back_edges = 0;
  std::uint64_t cross_edges = 0;
  std::uint64_t critical_edges = 0;
  BccPhaseTimes phases;
};

struct BccResult {
  BcLabeling labeling;
  SpanningForest forest;
  BccStats stats;
};

/// Biconnected components of a symmetric graph by vertex labeling:
/// spanning forest, Euler tour, low/high, then one more connectivity pass
/// that skips back edges and critical tree edges. The resulting component
/// labels plus per-label heads encode every BCC.
BccResult run_bcc(const Graph& g, const LddParams& params = {});

/// Articulation points recovered from the labeling: a non-root vertex that
/// heads any label, or a root that heads at least two. Ascending order.
std::vector<VertexId> articulation_points(const BcLabeling& labeling);

/// Bridges recovered from the labeling: each single-member label forms a
/// two-vertex component, and its head-member tree edge is a bridge.
/// Returned as (smaller id, larger id), sorted.
std::vector<Edge> bridges(const BcLabeling& labeling, const SpanningForest& forest);

}  // namespace cgraph
