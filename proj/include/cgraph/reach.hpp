#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgraph/graph.hpp"
#include "cgraph/hash_bag.hpp"
#include "cgraph/types.hpp"

namespace cgraph {

// Directed view for searches: fwd holds the adjacency being traversed, rev
// its reversal (used by pull-style dense rounds). For symmetric graphs both
// point at the same Graph.
struct SearchView {
  const Graph* fwd;
  const Graph* rev;
};

inline SearchView forward_view(const Graph& g) { return {&g, &g.reverse()}; }
inline SearchView backward_view(const Graph& g) { return {&g.reverse(), &g}; }

enum class DensifyMode { kAuto, kForceDense, kForceSparse };

// Knobs for the search engine. tau is the per-vertex traversal budget of
// the local search: a frontier vertex with out-degree below tau walks up to
// tau edges sequentially inside its task and only spills unfinished work
// back to the shared frontier, which collapses long sparse stretches into
// one round. tau = 1 (or enabled = false) degenerates to plain BFS.
struct VgcParams {
  std::uint32_t tau = 512;
  bool enabled = true;
  DensifyMode densify = DensifyMode::kAuto;
  // Dense threshold: a round goes dense when the frontier's total
  // out-degree exceeds m / theta.
  std::uint32_t theta = 20;
  HashBagParams bag;
};

struct RoundStat {
  std::uint64_t frontier = 0;
  bool dense = false;
};

// Round-shape helpers shared by every frontier engine in the library.
// decide_dense picks pull (dense) vs push (sparse) for a round from the
// frontier's total out-degree; pack_flags converts a dense flag array back
// to an ascending vertex list (deterministic for any worker count).
bool decide_dense(const VgcParams& params, std::uint64_t frontier_work, std::uint64_t m);
std::vector<VertexId> pack_flags(const std::vector<std::uint8_t>& flags);

struct SearchStats {
  std::uint32_t rounds = 0;
  std::uint64_t visited = 0;  // bits set in the visit array when done
  std::vector<RoundStat> per_round;
};

// Marks every vertex reachable from source in visit (1 = reached). Bits
// already set on entry act as walls: the search will not pass through or
// re-mark them. Returns round structure for diagnostics.
SearchStats single_reach(SearchView view, VertexId source, std::vector<std::uint8_t>& visit,
                         const VgcParams& params = {});
SearchStats single_reach(const Graph& g, VertexId source, std::vector<std::uint8_t>& visit,
                         const VgcParams& params = {});

// Thrown by multi_reach when its pair table fills; callers retry with a
// larger capacity.
class PairTableOverflow : public std::runtime_error {
 public:
  explicit PairTableOverflow(std::uint64_t capacity)
      : std::runtime_error("reach pair table overflow at capacity " + std::to_string(capacity)) {}
};

// Concurrent open-addressing set of (vertex, source) pairs, hashed by
// vertex only so that all pairs of one vertex sit in a single probe run and
// can be enumerated in one scan. Inserts and lookups may run concurrently;
// an enumeration concurrent with inserts may miss the newest pairs, which
// the search engine tolerates by re-exploring the vertex that got them.
class ReachPairTable {
 public:
  explicit ReachPairTable(std::uint64_t expected_pairs);

  // True iff the pair was absent and is now present. False for duplicates
  // and on overflow (latched in overflowed()). On success, slot_out (when
  // given) receives the slot index, which stays valid until reset; callers
  // use it to attach per-pair payload in side arrays.
  bool insert(VertexId v, VertexId s, std::uint64_t* slot_out = nullptr);
  bool contains(VertexId v, VertexId s) const;

  // Appends all sources currently recorded for v, optionally with their
  // slot indices.
  void append_sources(VertexId v, std::vector<VertexId>& out) const;
  void append_source_slots(VertexId v,
                           std::vector<std::pair<VertexId, std::uint64_t>>& out) const;

  // Raw slot access for parallel aggregation passes.
  std::uint64_t slot_count() const { return slots_.size(); }
  bool read_slot(std::uint64_t i, VertexId& v, VertexId& s) const;

  std::uint64_t size() const { return count_.load(std::memory_order_relaxed); }
  std::uint64_t capacity() const { return limit_; }
  bool overflowed() const { return overflowed_.load(std::memory_order_relaxed); }

  // Discards contents and reallocates for a new expected pair count.
  void reset(std::uint64_t expected_pairs);

 private:
  std::vector<std::atomic<std::uint64_t>> slots_;
  std::atomic<std::uint64_t> count_{0};
  std::atomic<bool> overflowed_{false};
  std::uint64_t mask_ = 0;
  std::uint64_t limit_ = 0;  // max pairs before overflow (half the slots)
};

struct MultiReachStats {
  std::uint32_t rounds = 0;
  std::uint64_t pair_inserts = 0;
  std::vector<RoundStat> per_round;
};

// Simultaneous reachability from a set of sources: records (v, s) in table
// for every v reachable from source s along paths whose vertices all carry
// the same label and are not done. Each source s is seeded with (s, s).
// Sources must be distinct, alive (done[s] == 0), and label-compatible with
// themselves trivially. Throws PairTableOverflow if table fills; the table
// content is then partial and the caller should reset and rerun.
MultiReachStats multi_reach(SearchView view, std::span<const VertexId> sources,
                            std::span<const std::uint64_t> labels,
                            std::span<const std::uint8_t> done, ReachPairTable& table,
                            const VgcParams& params = {});

}  // namespace cgraph
