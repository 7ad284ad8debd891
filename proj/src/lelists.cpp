#include "cgraph/lelists.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cgraph/parallel.hpp"
#include "cgraph/timer.hpp"

namespace cgraph {
namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// A recorded triple: source's search saw target at the given hop distance.
struct Candidate {
  VertexId target;
  VertexId source;
  std::uint32_t distance;
};

// Claims v for the given frontier round; only the winning claimant may put
// v into the bag, so each vertex is extracted at most once per round.
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

thread_local std::vector<std::pair<VertexId, std::uint64_t>> t_pair_slots;

}  // namespace

std::vector<LeListEntry> filter_candidates(std::vector<LeListEntry> candidates,
                                           std::span<const std::uint32_t> rank) {
  std::sort(candidates.begin(), candidates.end(),
            [&](const LeListEntry& a, const LeListEntry& b) {
              return rank[a.source] < rank[b.source];
            });
  std::vector<LeListEntry> kept;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (const LeListEntry& entry : candidates) {
    if (entry.distance < best) {
      kept.push_back(entry);
      best = entry.distance;
    }
  }
  return kept;
}

LeLists run_lelists(const Graph& g, std::span<const VertexId> priority,
                    const LeListsParams& params) {
  if (!g.symmetric()) {
    throw std::invalid_argument("run_lelists requires a symmetric graph");
  }
  if (priority.size() != g.n) {
    throw std::invalid_argument("run_lelists: priority order must cover every vertex");
  }
  if (!(params.beta > 1.0)) {
    throw std::invalid_argument("run_lelists: beta must exceed 1");
  }

  LeLists out;
  out.offsets.assign(g.n + 1, 0);
  if (g.n == 0) return out;

  std::vector<std::uint32_t> rank(g.n, kUnreached);
  for (std::size_t i = 0; i < priority.size(); ++i) {
    const VertexId v = priority[i];
    if (v >= g.n || rank[v] != kUnreached) {
      throw std::invalid_argument("run_lelists: priority must be a permutation of the vertices");
    }
    rank[v] = static_cast<std::uint32_t>(i);
  }

  Timer timer;
  // Tentative distances: delta[v] is the closest distance any source of an
  // already-merged batch achieved. Frozen while a batch runs, so every
  // search in a batch prunes against the same snapshot, then folded at the
  // batch boundary.
  std::vector<std::uint32_t> delta(g.n, kUnreached);
  std::vector<std::uint32_t> stamps(g.n, 0);
  HashBag bag(g.n, params.bag);
  ReachPairTable table(64);
  // Hop distance per occupied table slot, written once right after the slot
  // is claimed. Readers tolerate the write race: until the store lands they
  // see the kUnreached fill, which never matches a fresh-round test, and the
  // end-of-round join publishes the value before the next round reads it.
  std::vector<std::uint32_t> pair_dist;

  const std::size_t workers = static_cast<std::size_t>(max_workers());
  std::vector<std::vector<Candidate>> recorded(workers);
  std::vector<std::size_t> mark(workers, 0);
  std::vector<VertexId> frontier;

  std::uint32_t stamp_round = 0;
  std::uint64_t prev_pairs = 1;
  std::uint64_t cap_floor = 0;  // last successful capacity: shrink gently
  std::uint64_t batch_size = 1;
  std::size_t pos = 0;
  while (pos < g.n) {
    const std::size_t take =
        static_cast<std::size_t>(std::min<std::uint64_t>(batch_size, g.n - pos));
    const std::span<const VertexId> batch = priority.subspan(pos, take);
    std::uint64_t hint = std::max<std::uint64_t>(
        {4 * static_cast<std::uint64_t>(take), 2 * prev_pairs, cap_floor / 4, 64});
    for (std::size_t w = 0; w < workers; ++w) mark[w] = recorded[w].size();

    bool settled = false;
    while (!settled) {
      Timer attempt;
      table.reset(hint);
      pair_dist.assign(table.slot_count(), kUnreached);
      for (std::size_t w = 0; w < workers; ++w) recorded[w].resize(mark[w]);

      // Seed every source with its own zero-distance pair. The hint covers
      // the batch, so seeding cannot overflow.
      parallel_for(0, take, [&](std::size_t i) {
        const VertexId s = batch[i];
        std::uint64_t slot = 0;
        if (table.insert(s, s, &slot)) {
          std::atomic_ref<std::uint32_t>(pair_dist[slot]).store(0, std::memory_order_relaxed);
          recorded[static_cast<std::size_t>(worker_id())].push_back(Candidate{s, s, 0});
        }
      });
      frontier.assign(batch.begin(), batch.end());

      std::uint32_t round = 0;
      std::uint64_t attempt_rounds = 0;
      bool overflow = false;
      while (!frontier.empty()) {
        ++round;
        ++stamp_round;
        const std::uint32_t reach_dist = round;  // distance written this round
        const std::uint32_t claim = stamp_round;
        parallel_for(0, frontier.size(), [&](std::size_t i) {
          if (table.overflowed()) return;
          const VertexId v = frontier[i];
          auto& fresh = t_pair_slots;
          fresh.clear();
          table.append_source_slots(v, fresh);
          // Keep the pairs discovered last round; older ones already
          // propagated, newer ones wait for the next round.
          std::size_t live = 0;
          for (const auto& [s, slot] : fresh) {
            const std::uint32_t d =
                std::atomic_ref<std::uint32_t>(pair_dist[slot]).load(std::memory_order_relaxed);
            if (d != kUnreached && d + 1 == reach_dist) fresh[live++] = {s, slot};
          }
          fresh.resize(live);
          if (fresh.empty()) return;
          for (EdgeIndex j = g.offsets[v]; j < g.offsets[v + 1]; ++j) {
            const VertexId u = g.targets[j];
            if (delta[u] <= reach_dist) continue;  // settled batches own u at this radius
            for (std::size_t k = 0; k < fresh.size(); ++k) {
              const VertexId s = fresh[k].first;
              std::uint64_t slot = 0;
              if (table.insert(u, s, &slot)) {
                std::atomic_ref<std::uint32_t>(pair_dist[slot])
                    .store(reach_dist, std::memory_order_relaxed);
                recorded[static_cast<std::size_t>(worker_id())].push_back(
                    Candidate{u, s, reach_dist});
                if (claim_round(stamps.data(), u, claim)) bag.insert(u);
              } else if (table.overflowed()) {
                return;
              }
            }
          }
        });
        if (bag.exhausted()) {
          throw std::runtime_error("run_lelists: frontier bag exhausted (bound violated)");
        }
        ++attempt_rounds;
        frontier = bag.extract_all();
        if (table.overflowed()) {
          overflow = true;
          break;
        }
      }
      if (overflow) {
        out.stats.resize_retries += 1;
        out.stats.table_resize_s += attempt.elapsed_s();
        hint *= 2;
        frontier.clear();
        continue;
      }
      out.stats.rounds += attempt_rounds;
      cap_floor = table.capacity();
      settled = true;
    }

    // Batch boundary: fold this batch's discoveries into the tentative
    // distances so later batches prune against them.
    for (std::size_t w = 0; w < workers; ++w) {
      std::span<const Candidate> fresh(recorded[w].data() + mark[w],
                                       recorded[w].size() - mark[w]);
      parallel_for(0, fresh.size(), [&](std::size_t i) {
        atomic_write_min(delta[fresh[i].target], fresh[i].distance);
      });
    }

    prev_pairs = std::max<std::uint64_t>(table.size(), 1);
    pos += take;
    batch_size = static_cast<std::uint64_t>(
        std::ceil(params.beta * static_cast<double>(batch_size)));
    out.stats.batches += 1;
  }
  out.stats.search_s = timer.elapsed_s();

  // Reduce the candidate triples to the exact lists: group by target, then
  // keep the running strict minimum along ascending priority.
  timer.reset();
  std::size_t total = 0;
  for (const auto& buf : recorded) total += buf.size();
  std::vector<Candidate> cands;
  cands.reserve(total);
  for (auto& buf : recorded) {
    cands.insert(cands.end(), buf.begin(), buf.end());
    std::vector<Candidate>().swap(buf);
  }
  out.stats.candidates = total;

  parallel_sort(cands, [&](const Candidate& a, const Candidate& b) {
    if (a.target != b.target) return a.target < b.target;
    return rank[a.source] < rank[b.source];
  });

  std::vector<std::uint64_t> start(g.n + 1);
  parallel_for(0, g.n + 1, [&](std::size_t v) {
    start[v] = static_cast<std::uint64_t>(
        std::lower_bound(cands.begin(), cands.end(), v,
                         [](const Candidate& c, std::size_t key) { return c.target < key; }) -
        cands.begin());
  });

  parallel_for(0, g.n, [&](std::size_t v) {
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t kept = 0;
    for (std::uint64_t i = start[v]; i < start[v + 1]; ++i) {
      if (cands[i].distance < best) {
        best = cands[i].distance;
        ++kept;
      }
    }
    out.offsets[v + 1] = kept;
  });
  for (std::size_t v = 0; v < g.n; ++v) out.offsets[v + 1] += out.offsets[v];
  out.entries.resize(out.offsets[g.n]);
  parallel_for(0, g.n, [&](std::size_t v) {
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t at = out.offsets[v];
    for (std::uint64_t i = start[v]; i < start[v + 1]; ++i) {
      if (cands[i].distance < best) {
        best = cands[i].distance;
        out.entries[at++] = LeListEntry{cands[i].source, cands[i].distance};
      }
    }
  });
  out.stats.filter_s = timer.elapsed_s();
  return out;
}

}  // namespace cgraph
