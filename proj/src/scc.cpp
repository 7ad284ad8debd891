#include "cgraph/scc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "cgraph/parallel.hpp"
#include "cgraph/rng.hpp"
#include "cgraph/timer.hpp"

namespace cgraph {

namespace {

constexpr std::uint64_t kSaltIn = 0x517cc1b727220a95ULL;
constexpr std::uint64_t kSaltOut = 0x2545f4914f6cdd1dULL;
constexpr std::uint64_t kNoCommon = ~std::uint64_t{0};

void require_labels(const Graph& g, const SccLabels& labels) {
  if (labels.label.size() != g.n || labels.done.size() != g.n) {
    throw std::invalid_argument("scc: label arrays must have one entry per vertex");
  }
}

}  // namespace

std::uint64_t trim_trivial(const Graph& g, SccLabels& labels) {
  require_labels(g, labels);
  return parallel_sum(0, g.n, [&](std::size_t vi) -> std::uint64_t {
    const VertexId v = static_cast<VertexId>(vi);
    if (labels.done[v]) return 0;
    if (g.out_degree(v) == 0 || g.in_degree(v) == 0) {
      labels.label[v] = v;
      labels.done[v] = 1;
      return 1;
    }
    return 0;
  });
}

VertexId pick_pivot(const Graph& g, const SccLabels& labels, PivotRule rule, std::uint64_t seed) {
  require_labels(g, labels);
  if (rule == PivotRule::kRandom) {
    std::vector<VertexId> alive;
    alive.reserve(g.n);
    for (VertexId v = 0; v < g.n; ++v) {
      if (!labels.done[v]) alive.push_back(v);
    }
    if (alive.empty()) return kNoVertex;
    SplitMix64 rng(seed ^ 0xb5ad4eceda1ce2a9ULL);
    return alive[rng.next_below(alive.size())];
  }
  VertexId best = kNoVertex;
  std::uint64_t best_score = 0;
  for (VertexId v = 0; v < g.n; ++v) {
    if (labels.done[v]) continue;
    const std::uint64_t score =
        static_cast<std::uint64_t>(g.in_degree(v)) * static_cast<std::uint64_t>(g.out_degree(v));
    if (best == kNoVertex || score > best_score) {
      best = v;
      best_score = score;
    }
  }
  return best;
}

std::uint64_t signature_in_term(VertexId s) { return mix64(static_cast<std::uint64_t>(s) ^ kSaltIn); }

std::uint64_t signature_out_term(VertexId s) {
  return mix64(static_cast<std::uint64_t>(s) ^ kSaltOut);
}

std::uint64_t signature_combine(std::uint64_t old_label, std::uint64_t in_acc,
                                std::uint64_t out_acc) {
  if (in_acc == 0 && out_acc == 0) return old_label;
  return mix64(mix64(old_label ^ in_acc) ^ out_acc);
}

std::uint64_t signature_hash(std::uint64_t old_label, std::span<const VertexId> in_sources,
                             std::span<const VertexId> out_sources) {
  std::uint64_t in_acc = 0;
  std::uint64_t out_acc = 0;
  for (VertexId s : in_sources) in_acc += signature_in_term(s);
  for (VertexId s : out_sources) out_acc += signature_out_term(s);
  return signature_combine(old_label, in_acc, out_acc);
}

std::uint64_t first_scc(const Graph& g, SccLabels& labels, const SccParams& params,
                        SccStats* stats) {
  require_labels(g, labels);
  const VertexId pivot = pick_pivot(g, labels, params.pivot, params.seed);
  if (pivot == kNoVertex) return 0;

  std::vector<std::uint8_t> fwd_visit(g.n, 0);
  std::vector<std::uint8_t> bwd_visit(g.n, 0);
  const SearchStats fwd = single_reach(forward_view(g), pivot, fwd_visit, params.vgc);
  const SearchStats bwd = single_reach(backward_view(g), pivot, bwd_visit, params.vgc);
  if (stats != nullptr) {
    stats->first_fwd_rounds = fwd.rounds;
    stats->first_bwd_rounds = bwd.rounds;
  }

  const std::uint64_t in_term = signature_in_term(pivot);
  const std::uint64_t out_term = signature_out_term(pivot);
  return parallel_sum(0, g.n, [&](std::size_t vi) -> std::uint64_t {
    const VertexId v = static_cast<VertexId>(vi);
    if (labels.done[v]) return 0;
    const bool f = fwd_visit[v] != 0;
    const bool b = bwd_visit[v] != 0;
    if (f && b) {
      labels.label[v] = pivot;
      labels.done[v] = 1;
      return 1;
    }
    if (f) {
      labels.label[v] = signature_combine(labels.label[v], in_term, 0);
    } else if (b) {
      labels.label[v] = signature_combine(labels.label[v], 0, out_term);
    }
    return 0;
  });
}

namespace {

struct BatchTableRun {
  MultiReachStats stats;
  double search_s = 0;
  double resize_s = 0;
  std::uint32_t retries = 0;
};

// Runs one direction of a batch search, growing the pair table and
// rerunning on overflow. Rerun time is booked as resize cost. cap_floor
// carries the last successful capacity between batches so the table never
// shrinks by more than one power of two at a time; per-source pair counts
// swing too wildly for the previous batch's total alone to be a safe hint.
BatchTableRun run_direction(SearchView view, std::span<const VertexId> sources,
                            const SccLabels& labels, ReachPairTable& table,
                            std::uint64_t capacity_hint, std::uint64_t& cap_floor,
                            const VgcParams& vgc) {
  BatchTableRun out;
  std::uint64_t hint = std::max({capacity_hint, static_cast<std::uint64_t>(sources.size()),
                                 cap_floor / 4});
  while (true) {
    Timer attempt;
    table.reset(hint);
    try {
      out.stats = multi_reach(view, sources, labels.label, labels.done, table, vgc);
      out.search_s += attempt.elapsed_s();
      cap_floor = table.capacity();
      return out;
    } catch (const PairTableOverflow&) {
      out.resize_s += attempt.elapsed_s();
      out.retries += 1;
      hint *= 2;
    }
  }
}

}  // namespace

SccResult run_scc(const Graph& g, const SccParams& params) {
  if (params.beta <= 1.0) {
    throw std::invalid_argument("run_scc: batch growth beta must exceed 1");
  }
  SccResult result;
  result.labels.label.assign(g.n, kUnsettledLabel);
  result.labels.done.assign(g.n, 0);
  SccLabels& labels = result.labels;
  SccStats& stats = result.stats;
  if (g.n == 0) return result;

  Timer phase;
  stats.trimmed = trim_trivial(g, labels);
  stats.phases.trim_s = phase.elapsed_s();

  phase.reset();
  stats.first_scc_size = first_scc(g, labels, params, &stats);
  stats.phases.first_scc_s = phase.elapsed_s();

  // Seeded permutation of the unsettled vertices, consumed in growing
  // batches.
  std::vector<VertexId> order;
  order.reserve(g.n);
  for (VertexId v = 0; v < g.n; ++v) {
    if (!labels.done[v]) order.push_back(v);
  }
  SplitMix64 perm_rng(params.seed ^ 0x94d049bb133111ebULL);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[perm_rng.next_below(i)]);
  }

  std::vector<std::uint64_t> in_acc(g.n, 0);
  std::vector<std::uint64_t> out_acc(g.n, 0);
  std::vector<std::uint64_t> common(g.n, kNoCommon);
  ReachPairTable fwd_table(64);
  ReachPairTable bwd_table(64);
  std::uint64_t prev_fwd_pairs = order.size();
  std::uint64_t prev_bwd_pairs = order.size();
  std::uint64_t fwd_cap_floor = 0;
  std::uint64_t bwd_cap_floor = 0;

  std::size_t batch_begin = 0;
  std::uint64_t batch_size = 1;
  std::vector<VertexId> batch;
  while (batch_begin < order.size()) {
    const std::size_t batch_end =
        std::min(order.size(), batch_begin + static_cast<std::size_t>(batch_size));
    batch.clear();
    for (std::size_t i = batch_begin; i < batch_end; ++i) {
      if (!labels.done[order[i]]) batch.push_back(order[i]);
    }
    batch_begin = batch_end;
    batch_size = static_cast<std::uint64_t>(std::ceil(params.beta * static_cast<double>(batch_size)));
    if (batch.empty()) continue;
    stats.batches += 1;

    const BatchTableRun fwd =
        run_direction(forward_view(g), batch, labels, fwd_table,
                      std::max<std::uint64_t>(4 * batch.size(), 2 * prev_fwd_pairs),
                      fwd_cap_floor, params.vgc);
    const BatchTableRun bwd =
        run_direction(backward_view(g), batch, labels, bwd_table,
                      std::max<std::uint64_t>(4 * batch.size(), 2 * prev_bwd_pairs),
                      bwd_cap_floor, params.vgc);
    stats.phases.multi_search_s += fwd.search_s + bwd.search_s;
    stats.phases.table_resize_s += fwd.resize_s + bwd.resize_s;
    stats.resize_retries += fwd.retries + bwd.retries;
    stats.multi_rounds += fwd.stats.rounds + bwd.stats.rounds;
    prev_fwd_pairs = std::max<std::uint64_t>(fwd.stats.pair_inserts, 1);
    prev_bwd_pairs = std::max<std::uint64_t>(bwd.stats.pair_inserts, 1);

    // Labeling: vertices sharing a source in both directions join that
    // source's component (ties to the largest source id, which is the same
    // choice for every member); one-sided reachability folds into the
    // label signature.
    phase.reset();
    parallel_for(0, g.n, [&](std::size_t v) {
      in_acc[v] = 0;
      out_acc[v] = 0;
      common[v] = kNoCommon;
    });
    parallel_for(0, bwd_table.slot_count(), [&](std::size_t i) {
      VertexId v;
      VertexId s;
      if (!bwd_table.read_slot(i, v, s)) return;
      std::atomic_ref<std::uint64_t> acc(out_acc[v]);
      acc.fetch_add(signature_out_term(s), std::memory_order_relaxed);
    });
    parallel_for(0, fwd_table.slot_count(), [&](std::size_t i) {
      VertexId v;
      VertexId s;
      if (!fwd_table.read_slot(i, v, s)) return;
      std::atomic_ref<std::uint64_t> acc(in_acc[v]);
      acc.fetch_add(signature_in_term(s), std::memory_order_relaxed);
      if (bwd_table.contains(v, s)) {
        std::atomic_ref<std::uint64_t> best(common[v]);
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        const std::uint64_t cand = static_cast<std::uint64_t>(s);
        while (cur == kNoCommon || cur < cand) {
          if (best.compare_exchange_weak(cur, cand, std::memory_order_relaxed)) break;
        }
      }
    });
    parallel_for(0, g.n, [&](std::size_t vi) {
      const VertexId v = static_cast<VertexId>(vi);
      if (labels.done[v]) return;
      if (common[v] != kNoCommon) {
        labels.label[v] = common[v];
        labels.done[v] = 1;
      } else {
        labels.label[v] = signature_combine(labels.label[v], in_acc[v], out_acc[v]);
      }
    });
    stats.phases.labeling_s += phase.elapsed_s();
  }

  // Every vertex is settled: trim and the first component handle their
  // share, and each batch finishes all of its own members.
  const std::uint64_t unsettled =
      parallel_sum(0, g.n, [&](std::size_t v) { return labels.done[v] ? 0u : 1u; });
  if (unsettled != 0) {
    throw std::logic_error("run_scc: unsettled vertices remain after final batch");
  }

  std::vector<std::uint64_t> sorted(labels.label);
  parallel_sort(sorted);
  std::uint64_t num = 0;
  std::uint64_t largest = 0;
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) {
      ++num;
      run = 0;
    }
    ++run;
    largest = std::max(largest, run);
  }
  stats.num_sccs = num;
  stats.largest_scc = largest;
  return result;
}

}  // namespace cgraph
