#include "cgraph/reach.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "cgraph/parallel.hpp"
#include "cgraph/rng.hpp"

namespace cgraph {

namespace {

// --- shared helpers ---------------------------------------------------------

bool try_mark(std::uint8_t* flags, VertexId v) {
  std::atomic_ref<std::uint8_t> ref(flags[v]);
  std::uint8_t expected = 0;
  return ref.compare_exchange_strong(expected, 1, std::memory_order_acq_rel,
                                     std::memory_order_relaxed);
}

// One successful claim per (vertex, round): gates duplicate frontier
// insertions when several tasks discover the same vertex concurrently.
bool claim_round(std::uint32_t* stamps, VertexId v, std::uint32_t round) {
  std::atomic_ref<std::uint32_t> ref(stamps[v]);
  std::uint32_t current = ref.load(std::memory_order_relaxed);
  while (current < round) {
    if (ref.compare_exchange_weak(current, round, std::memory_order_acq_rel,
                                  std::memory_order_relaxed)) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool decide_dense(const VgcParams& params, std::uint64_t frontier_work, std::uint64_t m) {
  switch (params.densify) {
    case DensifyMode::kForceDense:
      return true;
    case DensifyMode::kForceSparse:
      return false;
    case DensifyMode::kAuto:
      break;
  }
  const std::uint32_t theta = params.theta == 0 ? 1 : params.theta;
  return frontier_work > m / theta;
}

// Block-wise two-pass packing keeps the output order independent of the
// worker count.
std::vector<VertexId> pack_flags(const std::vector<std::uint8_t>& flags) {
  const std::size_t n = flags.size();
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> counts(blocks + 1, 0);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    std::uint64_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) c += flags[i] ? 1 : 0;
    counts[b + 1] = c;
  });
  for (std::size_t b = 0; b < blocks; ++b) counts[b + 1] += counts[b];
  std::vector<VertexId> out(counts[blocks]);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    std::uint64_t at = counts[b];
    for (std::size_t i = lo; i < hi; ++i) {
      if (flags[i]) out[at++] = static_cast<VertexId>(i);
    }
  });
  return out;
}

namespace {

// Per-thread scratch, reused across tasks. Tasks are tied (they never
// migrate between threads mid-execution), so thread-local reuse is safe.
thread_local std::vector<VertexId> t_ring;
thread_local std::vector<VertexId> t_sources;

// --- single-source local search ---------------------------------------------

// Budgeted sequential walk from seed: follows successful visits through a
// private FIFO until tau edges have been examined. Fully scanned vertices
// die here; an interrupted head and any queued leftovers spill into the
// bag so the next round resumes them.
void local_search_mark(const Graph& g, VertexId seed, std::uint8_t* visit, HashBag& bag,
                       std::uint32_t tau) {
  auto& ring = t_ring;
  const std::uint32_t cap = tau + 1;
  if (ring.size() < cap) ring.resize(cap);
  std::uint32_t head = 0;
  std::uint32_t queued = 1;
  std::uint32_t budget = 0;
  ring[0] = seed;
  bool stopped = false;

  while (queued > 0 && !stopped) {
    const VertexId x = ring[head];
    head = head + 1 == cap ? 0 : head + 1;
    --queued;
    const auto neighbors = g.out_neighbors(x);
    std::size_t scanned = 0;
    for (; scanned < neighbors.size(); ++scanned) {
      if (budget == tau) break;
      ++budget;
      const VertexId u = neighbors[scanned];
      if (try_mark(visit, u)) {
        std::uint32_t slot = head + queued;
        if (slot >= cap) slot -= cap;
        ring[slot] = u;
        ++queued;
      }
    }
    if (scanned < neighbors.size()) {
      bag.insert(x);
      stopped = true;
    }
  }
  while (queued > 0) {
    bag.insert(ring[head]);
    head = head + 1 == cap ? 0 : head + 1;
    --queued;
  }
}

}  // namespace

SearchStats single_reach(SearchView view, VertexId source, std::vector<std::uint8_t>& visit,
                         const VgcParams& params) {
  const Graph& g = *view.fwd;
  const Graph& rev = *view.rev;
  if (source >= g.n) {
    throw std::invalid_argument("single_reach: source " + std::to_string(source) +
                                " out of range for n=" + std::to_string(g.n));
  }
  if (visit.size() != g.n) {
    throw std::invalid_argument("single_reach: visit array size must equal vertex count");
  }
  const std::uint32_t tau = params.enabled ? std::max<std::uint32_t>(params.tau, 1) : 1;

  SearchStats stats;
  HashBag bag(g.n, params.bag);
  std::vector<VertexId> frontier;
  if (try_mark(visit.data(), source)) frontier.push_back(source);

  bool dense = false;
  std::vector<std::uint8_t> cur_flags;
  std::vector<std::uint8_t> next_flags;
  std::uint64_t frontier_size = frontier.size();

  while (frontier_size > 0) {
    std::uint64_t work = 0;
    if (dense) {
      work = parallel_sum(0, g.n,
                          [&](std::size_t v) { return cur_flags[v] ? g.out_degree(v) : 0; });
    } else {
      work = parallel_sum(0, frontier.size(),
                          [&](std::size_t i) { return g.out_degree(frontier[i]); });
    }
    const bool want_dense = decide_dense(params, work, g.m);
    if (want_dense && !dense) {
      cur_flags.assign(g.n, 0);
      const std::vector<VertexId>& f = frontier;
      parallel_for(0, f.size(), [&](std::size_t i) { cur_flags[f[i]] = 1; });
      frontier.clear();
      dense = true;
    } else if (!want_dense && dense) {
      frontier = pack_flags(cur_flags);
      dense = false;
    }
    stats.per_round.push_back({frontier_size, dense});
    ++stats.rounds;

    if (dense) {
      // Pull round: every unvisited vertex looks for any in-neighbor on the
      // frontier and stops at the first hit.
      if (next_flags.size() != visit.size()) {
        next_flags.assign(g.n, 0);
      } else {
        parallel_for(0, g.n, [&](std::size_t v) { next_flags[v] = 0; });
      }
      parallel_for(0, g.n, [&](std::size_t vi) {
        const VertexId v = static_cast<VertexId>(vi);
        if (visit[v]) return;
        for (VertexId u : rev.out_neighbors(v)) {
          if (cur_flags[u]) {
            visit[v] = 1;  // v's task is the only writer this round
            next_flags[v] = 1;
            break;
          }
        }
      });
      std::swap(cur_flags, next_flags);
      frontier_size = parallel_sum(0, g.n, [&](std::size_t v) { return cur_flags[v] ? 1u : 0u; });
    } else {
      const std::vector<VertexId>& f = frontier;
      parallel_for(0, f.size(), [&](std::size_t i) {
        const VertexId v = f[i];
        const auto neighbors = g.out_neighbors(v);
        if (neighbors.size() >= tau) {
          // Wide vertex: scan its adjacency in parallel instead of walking.
          parallel_for(
              0, neighbors.size(),
              [&](std::size_t j) {
                const VertexId u = neighbors[j];
                if (try_mark(visit.data(), u)) bag.insert(u);
              },
              2048);
        } else {
          local_search_mark(g, v, visit.data(), bag, tau);
        }
      });
      if (bag.exhausted()) {
        throw std::runtime_error("single_reach: frontier bag exhausted (bound violated)");
      }
      frontier = bag.extract_all();
      frontier_size = frontier.size();
    }
  }
  stats.visited = parallel_sum(0, g.n, [&](std::size_t v) { return visit[v] ? 1u : 0u; });
  return stats;
}

SearchStats single_reach(const Graph& g, VertexId source, std::vector<std::uint8_t>& visit,
                         const VgcParams& params) {
  return single_reach(forward_view(g), source, visit, params);
}

// --- pair table ---------------------------------------------------------------

namespace {

constexpr std::uint64_t kEmptySlot = ~std::uint64_t{0};

std::uint64_t pack_pair(VertexId v, VertexId s) {
  if constexpr (sizeof(VertexId) == 8) {
    if (v >= (std::uint64_t{1} << 32) || s >= (std::uint64_t{1} << 32)) {
      throw std::invalid_argument("ReachPairTable: vertex ids must fit 32 bits");
    }
  }
  return (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint64_t>(s);
}

}  // namespace

ReachPairTable::ReachPairTable(std::uint64_t expected_pairs) { reset(expected_pairs); }

void ReachPairTable::reset(std::uint64_t expected_pairs) {
  std::uint64_t cap = 32;
  while (cap < expected_pairs * 2) cap <<= 1;
  if (slots_.size() != cap) {
    slots_ = std::vector<std::atomic<std::uint64_t>>(cap);
  }
  parallel_for(0, cap, [&](std::size_t i) { slots_[i].store(kEmptySlot, std::memory_order_relaxed); });
  mask_ = cap - 1;
  limit_ = cap / 2;
  count_.store(0, std::memory_order_relaxed);
  overflowed_.store(false, std::memory_order_relaxed);
}

bool ReachPairTable::insert(VertexId v, VertexId s, std::uint64_t* slot_out) {
  if (overflowed_.load(std::memory_order_relaxed)) return false;
  const std::uint64_t pair = pack_pair(v, s);
  std::uint64_t idx = mix64(v) & mask_;
  while (true) {
    std::uint64_t cur = slots_[idx].load(std::memory_order_acquire);
    if (cur == pair) return false;
    if (cur == kEmptySlot) {
      // Claim occupancy budget before claiming the slot so the load factor
      // never exceeds 1/2 and probes always terminate.
      if (count_.fetch_add(1, std::memory_order_relaxed) >= limit_) {
        count_.fetch_sub(1, std::memory_order_relaxed);
        overflowed_.store(true, std::memory_order_relaxed);
        return false;
      }
      if (slots_[idx].compare_exchange_strong(cur, pair, std::memory_order_acq_rel,
                                              std::memory_order_acquire)) {
        if (slot_out != nullptr) *slot_out = idx;
        return true;
      }
      count_.fetch_sub(1, std::memory_order_relaxed);
      if (cur == pair) return false;  // racer inserted the same pair
    }
    idx = (idx + 1) & mask_;
  }
}

bool ReachPairTable::contains(VertexId v, VertexId s) const {
  const std::uint64_t pair = pack_pair(v, s);
  std::uint64_t idx = mix64(v) & mask_;
  while (true) {
    const std::uint64_t cur = slots_[idx].load(std::memory_order_acquire);
    if (cur == kEmptySlot) return false;
    if (cur == pair) return true;
    idx = (idx + 1) & mask_;
  }
}

void ReachPairTable::append_sources(VertexId v, std::vector<VertexId>& out) const {
  std::uint64_t idx = mix64(v) & mask_;
  while (true) {
    const std::uint64_t cur = slots_[idx].load(std::memory_order_acquire);
    if (cur == kEmptySlot) return;
    if ((cur >> 32) == static_cast<std::uint64_t>(v)) {
      out.push_back(static_cast<VertexId>(cur & 0xFFFFFFFFu));
    }
    idx = (idx + 1) & mask_;
  }
}

void ReachPairTable::append_source_slots(
    VertexId v, std::vector<std::pair<VertexId, std::uint64_t>>& out) const {
  std::uint64_t idx = mix64(v) & mask_;
  while (true) {
    const std::uint64_t cur = slots_[idx].load(std::memory_order_acquire);
    if (cur == kEmptySlot) return;
    if ((cur >> 32) == static_cast<std::uint64_t>(v)) {
      out.emplace_back(static_cast<VertexId>(cur & 0xFFFFFFFFu), idx);
    }
    idx = (idx + 1) & mask_;
  }
}

bool ReachPairTable::read_slot(std::uint64_t i, VertexId& v, VertexId& s) const {
  const std::uint64_t cur = slots_[i].load(std::memory_order_acquire);
  if (cur == kEmptySlot) return false;
  v = static_cast<VertexId>(cur >> 32);
  s = static_cast<VertexId>(cur & 0xFFFFFFFFu);
  return true;
}

// --- multi-source search ------------------------------------------------------

namespace {

// Pushes every source of x onwards across the edge (x, u) when u is alive
// and label-compatible. Returns true when u received at least one pair it
// did not have before.
bool propagate(ReachPairTable& table, std::span<const VertexId> sources, VertexId u) {
  bool any_new = false;
  for (VertexId s : sources) {
    if (table.insert(u, s)) any_new = true;
  }
  return any_new;
}

// Multi-source flavor of the budgeted local search. The frontier duty
// invariant: every vertex that receives a new pair is either fully
// re-scanned within the discovering task this round, or carries this
// round's stamp and re-enters the shared frontier. Private pushes skip the
// stamp so a later insert by another task can still re-queue the vertex;
// every bag insertion claims the stamp first.
void local_search_multi(const Graph& g, VertexId seed, std::span<const std::uint64_t> labels,
                        std::span<const std::uint8_t> done, ReachPairTable& table, HashBag& bag,
                        std::uint32_t* stamps, std::uint32_t round, std::uint32_t tau) {
  auto& ring = t_ring;
  const std::uint32_t cap = tau + 1;
  if (ring.size() < cap) ring.resize(cap);
  auto& sources = t_sources;
  std::uint32_t head = 0;
  std::uint32_t queued = 1;
  std::uint32_t budget = 0;
  ring[0] = seed;
  bool stopped = false;

  while (queued > 0 && !stopped) {
    const VertexId x = ring[head];
    head = head + 1 == cap ? 0 : head + 1;
    --queued;
    sources.clear();
    table.append_sources(x, sources);
    const std::uint64_t lx = labels[x];
    const auto neighbors = g.out_neighbors(x);
    std::size_t scanned = 0;
    for (; scanned < neighbors.size(); ++scanned) {
      if (budget == tau) break;
      ++budget;
      const VertexId u = neighbors[scanned];
      if (done[u] || labels[u] != lx) continue;
      if (propagate(table, sources, u)) {
        std::uint32_t slot = head + queued;
        if (slot >= cap) slot -= cap;
        ring[slot] = u;
        ++queued;
      }
      if (table.overflowed()) return;
    }
    if (scanned < neighbors.size()) {
      if (claim_round(stamps, x, round)) bag.insert(x);
      stopped = true;
    }
  }
  while (queued > 0) {
    const VertexId y = ring[head];
    head = head + 1 == cap ? 0 : head + 1;
    --queued;
    if (claim_round(stamps, y, round)) bag.insert(y);
  }
}

}  // namespace

MultiReachStats multi_reach(SearchView view, std::span<const VertexId> sources,
                            std::span<const std::uint64_t> labels,
                            std::span<const std::uint8_t> done, ReachPairTable& table,
                            const VgcParams& params) {
  const Graph& g = *view.fwd;
  const Graph& rev = *view.rev;
  if (labels.size() != g.n || done.size() != g.n) {
    throw std::invalid_argument("multi_reach: labels/done arrays must have one entry per vertex");
  }
  for (VertexId s : sources) {
    if (s >= g.n || done[s]) {
      throw std::invalid_argument("multi_reach: sources must be alive vertices");
    }
  }
  const std::uint32_t tau = params.enabled ? std::max<std::uint32_t>(params.tau, 1) : 1;

  MultiReachStats stats;
  const std::uint64_t base_pairs = table.size();
  HashBag bag(g.n, params.bag);

  parallel_for(0, sources.size(), [&](std::size_t i) { table.insert(sources[i], sources[i]); });
  if (table.overflowed()) throw PairTableOverflow(table.capacity());

  std::vector<VertexId> frontier(sources.begin(), sources.end());
  std::vector<std::uint32_t> stamps(g.n, 0);
  std::uint32_t round = 0;

  bool dense = false;
  std::vector<std::uint8_t> cur_flags;
  std::vector<std::uint8_t> next_flags;
  std::uint64_t frontier_size = frontier.size();

  while (frontier_size > 0) {
    ++round;
    std::uint64_t work = 0;
    if (dense) {
      work = parallel_sum(0, g.n,
                          [&](std::size_t v) { return cur_flags[v] ? g.out_degree(v) : 0; });
    } else {
      work = parallel_sum(0, frontier.size(),
                          [&](std::size_t i) { return g.out_degree(frontier[i]); });
    }
    const bool want_dense = decide_dense(params, work, g.m);
    if (want_dense && !dense) {
      cur_flags.assign(g.n, 0);
      const std::vector<VertexId>& f = frontier;
      parallel_for(0, f.size(), [&](std::size_t i) { cur_flags[f[i]] = 1; });
      frontier.clear();
      dense = true;
    } else if (!want_dense && dense) {
      frontier = pack_flags(cur_flags);
      dense = false;
    }
    stats.per_round.push_back({frontier_size, dense});
    ++stats.rounds;

    if (dense) {
      // Pull round: alive vertices union the source sets of all
      // label-compatible frontier in-neighbors (no early exit).
      if (next_flags.size() != static_cast<std::size_t>(g.n)) {
        next_flags.assign(g.n, 0);
      } else {
        parallel_for(0, g.n, [&](std::size_t v) { next_flags[v] = 0; });
      }
      parallel_for(0, g.n, [&](std::size_t vi) {
        const VertexId v = static_cast<VertexId>(vi);
        if (done[v] || table.overflowed()) return;
        bool any_new = false;
        auto& srcs = t_sources;
        for (VertexId u : rev.out_neighbors(v)) {
          if (!cur_flags[u] || labels[u] != labels[v]) continue;
          srcs.clear();
          table.append_sources(u, srcs);
          if (propagate(table, srcs, v)) any_new = true;
        }
        if (any_new) next_flags[v] = 1;
      });
      std::swap(cur_flags, next_flags);
      frontier_size = parallel_sum(0, g.n, [&](std::size_t v) { return cur_flags[v] ? 1u : 0u; });
    } else {
      const std::vector<VertexId>& f = frontier;
      parallel_for(0, f.size(), [&](std::size_t i) {
        if (table.overflowed()) return;
        const VertexId x = f[i];
        const auto neighbors = g.out_neighbors(x);
        if (neighbors.size() >= tau) {
          std::vector<VertexId> owned;  // plain local: nested tasks read it
          table.append_sources(x, owned);
          const std::uint64_t lx = labels[x];
          parallel_for(
              0, neighbors.size(),
              [&](std::size_t j) {
                const VertexId u = neighbors[j];
                if (done[u] || labels[u] != lx) return;
                if (propagate(table, owned, u) && claim_round(stamps.data(), u, round)) {
                  bag.insert(u);
                }
              },
              2048);
        } else {
          local_search_multi(g, x, labels, done, table, bag, stamps.data(), round, tau);
        }
      });
      if (bag.exhausted()) {
        throw std::runtime_error("multi_reach: frontier bag exhausted (bound violated)");
      }
      if (table.overflowed()) throw PairTableOverflow(table.capacity());
      frontier = bag.extract_all();
      frontier_size = frontier.size();
    }
    if (table.overflowed()) throw PairTableOverflow(table.capacity());
  }
  stats.pair_inserts = table.size() - base_pairs;
  return stats;
}

}  // namespace cgraph
