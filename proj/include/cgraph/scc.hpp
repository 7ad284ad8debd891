#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgraph/graph.hpp"
#include "cgraph/reach.hpp"
#include "cgraph/types.hpp"

namespace cgraph {

enum class PivotRule { kMaxDegree, kRandom };

struct SccParams {
  VgcParams vgc;
  double beta = 1.5;  // batch growth factor (1.5 or 2.0 are the usual picks)
  PivotRule pivot = PivotRule::kMaxDegree;
  std::uint64_t seed = 1;
};

// Label value of vertices whose component is still unknown. All vertices
// start with this one shared value so that first-round searches may cross
// any edge; once a component is finished its members take the component
// representative's vertex id as their label.
inline constexpr std::uint64_t kUnsettledLabel = ~std::uint64_t{0};

struct SccLabels {
  std::vector<std::uint64_t> label;
  std::vector<std::uint8_t> done;
};

struct SccPhaseTimes {
  double trim_s = 0;
  double first_scc_s = 0;
  double multi_search_s = 0;
  double table_resize_s = 0;  // includes searches rerun after an overflow
  double labeling_s = 0;
};

struct SccStats {
  std::uint64_t num_sccs = 0;
  std::uint64_t largest_scc = 0;
  std::uint64_t trimmed = 0;
  std::uint64_t first_scc_size = 0;
  std::uint32_t batches = 0;          // batches that actually ran a search
  std::uint32_t resize_retries = 0;
  std::uint32_t first_fwd_rounds = 0;
  std::uint32_t first_bwd_rounds = 0;
  std::uint64_t multi_rounds = 0;     // summed over batches and directions
  SccPhaseTimes phases;
};

struct SccResult {
  SccLabels labels;
  SccStats stats;
};

// Marks every vertex with zero in-degree or zero out-degree (degrees taken
// on the full graph, single pass) as its own singleton component. Returns
// the number of vertices settled.
std::uint64_t trim_trivial(const Graph& g, SccLabels& labels);

// Picks the start vertex for the first component search among unsettled
// vertices: the largest in-degree x out-degree product (ties to the
// smallest id), or a seeded random unsettled vertex.
VertexId pick_pivot(const Graph& g, const SccLabels& labels, PivotRule rule, std::uint64_t seed);

// Label refresh for vertices reached in only one direction of a search
// round: folds the source sets into the old label. Empty sets leave the
// label unchanged; the fold is commutative so source order never matters.
// in_sources are sources that reach the vertex, out_sources are sources the
// vertex reaches.
std::uint64_t signature_hash(std::uint64_t old_label, std::span<const VertexId> in_sources,
                             std::span<const VertexId> out_sources);

// Accumulator form of signature_hash: per-source terms are summed into
// direction accumulators and combined once.
std::uint64_t signature_in_term(VertexId s);
std::uint64_t signature_out_term(VertexId s);
std::uint64_t signature_combine(std::uint64_t old_label, std::uint64_t in_acc,
                                std::uint64_t out_acc);

// Finds the component of a single pivot by intersecting forward and
// backward reachability, settles it, and signature-updates the one-sided
// remainder. Returns the component size (0 when nothing is unsettled).
std::uint64_t first_scc(const Graph& g, SccLabels& labels, const SccParams& params,
                        SccStats* stats = nullptr);

// Full decomposition: trim, first component, then batched multi-source
// rounds over a seeded permutation until every vertex is settled. The
// result labels partition vertices exactly by strongly connected component,
// each labeled by its representative's vertex id.
SccResult run_scc(const Graph& g, const SccParams& params = {});

}  // namespace cgraph
