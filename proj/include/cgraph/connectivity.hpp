#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cgraph/graph.hpp"
#include "cgraph/reach.hpp"

namespace cgraph {

/// Concurrent union-find over vertex ids. Links always point from the
/// lower-priority root to the higher-priority one (priority = hashed id,
/// ties by id), so concurrent unites cannot form cycles. Find applies
/// path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  VertexId find(VertexId v);

  /// Merges the sets of a and b. Returns true iff this call performed the
  /// merge (exactly one caller wins per pair of sets).
  bool unite(VertexId a, VertexId b);

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<VertexId> parent_;
};

struct LddParams {
  VgcParams vgc;
  /// Batch growth factor for the cluster-center schedule.
  double growth = 1.2;
  std::uint64_t seed = 1;
};

struct LddResult {
  /// Cluster id per vertex (the center whose expansion captured it).
  std::vector<VertexId> cluster;
  /// Per-vertex claimer: the neighbor whose traversal first reached the
  /// vertex (centers point to themselves). The claim edges form a spanning
  /// tree of each cluster.
  std::vector<VertexId> parent;
  std::uint64_t rounds = 0;
};

/// Low-diameter decomposition of a symmetric graph: centers wake up in
/// geometrically growing batches and capture unclaimed vertices frontier by
/// frontier, using the same bag / local-search / dense-round machinery as
/// the reachability engine. `keep` (optional) restricts the expansion to
/// edges it accepts and must answer consistently for the two directions of
/// a symmetric edge; vertices whose every edge is rejected end up as their
/// own cluster.
LddResult ldd(const Graph& g, const LddParams& params,
              const std::function<bool(VertexId, EdgeIndex)>& keep = nullptr);

struct CcStats {
  std::uint64_t num_components = 0;
  std::uint64_t ldd_rounds = 0;
  /// Inter-cluster edges that actually merged two sets.
  std::uint64_t merge_edges = 0;
  double ldd_s = 0;
  double union_s = 0;
  double finish_s = 0;
};

struct CcResult {
  /// Component label per vertex; the label is the smallest vertex id in
  /// the component, so label[rep] == rep.
  std::vector<VertexId> label;
  CcStats stats;
};

/// Connected components of a symmetric graph: low-diameter clusters first,
/// then union-find across the remaining inter-cluster edges.
CcResult run_cc(const Graph& g, const LddParams& params = {});

/// Same as run_cc but only edges accepted by `keep` connect; `keep` is
/// called as keep(u, j) for the CSR entry j of u's adjacency list and must
/// answer consistently for the two directions of a symmetric edge.
CcResult run_cc_filtered(const Graph& g, const LddParams& params,
                         const std::function<bool(VertexId, EdgeIndex)>& keep);

struct SpanningForest {
  /// Parent per vertex; roots (one per component, the smallest id in it)
  /// point to themselves.
  std::vector<VertexId> parent;
  /// Tree edges as (child, parent) pairs; one per non-root vertex.
  std::vector<Edge> edges;
  /// Component label per vertex, equal to the root's id.
  std::vector<VertexId> root;
  std::uint64_t num_components = 0;
};

/// Spanning forest of a symmetric graph, re-rooted at the smallest vertex
/// id of each component. Tree edges are the edges whose traversal first
/// reached each vertex during connectivity.
SpanningForest spanning_forest(const Graph& g, const LddParams& params = {});

}  // namespace cgraph
