#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgraph/graph.hpp"
#include "cgraph/hash_bag.hpp"
#include "cgraph/reach.hpp"
#include "cgraph/types.hpp"

namespace cgraph {

// One list element: `source` settled `distance` hops away, and no vertex
// earlier in the priority order is strictly closer (ties go to the earlier
// vertex).
struct LeListEntry {
  VertexId source = kNoVertex;
  std::uint32_t distance = 0;

  friend bool operator==(const LeListEntry&, const LeListEntry&) = default;
};

struct LeListsParams {
  // Batch growth factor for the source schedule; the first batch holds a
  // single source and each later batch is beta times larger.
  double beta = 1.5;
  HashBagParams bag;
};

struct LeListsStats {
  std::uint64_t batches = 0;
  std::uint64_t rounds = 0;
  std::uint64_t candidates = 0;       // triples recorded before filtering
  std::uint64_t resize_retries = 0;   // batches rerun after pair-table overflow
  double search_s = 0.0;
  double filter_s = 0.0;
  double table_resize_s = 0.0;        // time burned in abandoned attempts
};

// List-of-elimination lists in slab form: the list of vertex v occupies
// entries[offsets[v] .. offsets[v + 1]) in ascending priority order, which
// is equivalently strictly decreasing distance; the final element is always
// (v, 0).
struct LeLists {
  std::vector<std::uint64_t> offsets;
  std::vector<LeListEntry> entries;
  LeListsStats stats;

  std::span<const LeListEntry> list(VertexId v) const {
    return std::span<const LeListEntry>(entries).subspan(offsets[v],
                                                         offsets[v + 1] - offsets[v]);
  }
};

// Builds the elimination lists of a symmetric graph for the given priority
// order (a permutation of the vertices; earlier position = higher priority).
// Runs batched multi-source searches over hash-bag frontiers, deduplicating
// (target, source) pairs in a shared table, and prunes each batch against
// the tentative distances settled by the previous batches; a final sort and
// sweep reduces the recorded candidates to the exact lists.
LeLists run_lelists(const Graph& g, std::span<const VertexId> priority,
                    const LeListsParams& params = {});

// Records that source's search reached target. True exactly once per
// (target, source) pair; the shared table arbitrates concurrent duplicates.
inline bool lelist_pair_dedup(ReachPairTable& table, VertexId source, VertexId target) {
  return table.insert(target, source);
}

// Reduces one vertex's candidate set to its final list: an entry survives
// when it is strictly closer than every earlier-priority candidate. rank
// maps a vertex to its position in the priority order. Candidates may
// arrive in any order and must contain at most one entry per source; the
// result is sorted by ascending rank.
std::vector<LeListEntry> filter_candidates(std::vector<LeListEntry> candidates,
                                           std::span<const std::uint32_t> rank);

}  // namespace cgraph
