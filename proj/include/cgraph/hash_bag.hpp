#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "cgraph/types.hpp"

namespace cgraph {

struct HashBagParams {
  std::uint32_t lambda = 1u << 10;  // size of the first chunk
  std::uint32_t sigma = 50;         // sample count that triggers chunk growth
  double alpha = 0.5;               // target load factor of a chunk at growth
  std::uint32_t kappa = 128;        // failed linear probes before forced growth
};

// Concurrent unordered bag for frontier collection. The slot array is
// preallocated at capacity ~ upper_bound / alpha and split into chunks of
// geometrically growing size (lambda, 2*lambda, 4*lambda, ...). Inserts CAS
// values into random slots of the active chunk and advance to the next
// chunk when a sampled estimate says the active one is reaching its target
// load, so the occupied region stays proportional to the element count and
// extraction never scans the whole array.
//
// insert/for_each may run concurrently from many threads; extract_all
// requires exclusive access (phase boundary). Callers must not insert a
// value that is already present — deduplication stays on their side.
class HashBag {
 public:
  explicit HashBag(std::uint64_t upper_bound, const HashBagParams& params = {});

  // Places v into a free slot. Returns false iff the bag ran out of chunks,
  // which means the caller broke the upper_bound contract; the failure is
  // also latched in exhausted().
  bool insert(VertexId v);

  // Drains the bag: returns all values in slot order, resets every touched
  // slot and the chunk cursor. Not thread-safe against concurrent inserts.
  std::vector<VertexId> extract_all();

  // Visits current contents without draining. Safe alongside inserts;
  // concurrent insertions may or may not be seen.
  template <class F>
  void for_each(F&& f) const {
    const std::uint64_t limit = scan_range();
    for (std::uint64_t i = 0; i < limit; ++i) {
      const VertexId v = slots_[i].load(std::memory_order_acquire);
      if (v != kNoVertex) f(v);
    }
  }

  bool exhausted() const { return exhausted_.load(std::memory_order_relaxed); }

  // Introspection (used by the stress and occupancy tests).
  std::uint64_t capacity() const { return tails_.back(); }
  std::uint32_t chunk_count() const { return static_cast<std::uint32_t>(tails_.size()); }
  std::uint32_t current_chunk() const { return cursor_.load(std::memory_order_acquire); }
  std::uint64_t chunk_begin(std::uint32_t c) const { return c == 0 ? 0 : tails_[c - 1]; }
  std::uint64_t chunk_end(std::uint32_t c) const { return tails_[c]; }
  // Extent of the slot region extraction would scan right now.
  std::uint64_t scan_range() const;
  std::uint64_t occupied_in(std::uint64_t begin, std::uint64_t end) const;

 private:
  bool try_grow(std::uint32_t seen_cursor);

  std::vector<std::atomic<VertexId>> slots_;
  std::vector<std::uint64_t> tails_;                    // chunk end indices
  std::vector<std::uint32_t> sample_thresholds_;        // per chunk, 32-bit scale
  std::vector<std::atomic<std::uint32_t>> sample_counts_;
  std::atomic<std::uint32_t> cursor_{0};                // active chunk index
  std::atomic<bool> exhausted_{false};
  std::uint32_t sigma_;
  std::uint32_t kappa_;
};

}  // namespace cgraph
