#include "cgraph/connectivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "cgraph/hash_bag.hpp"
#include "cgraph/parallel.hpp"
#include "cgraph/rng.hpp"
#include "cgraph/timer.hpp"

namespace cgraph {

UnionFind::UnionFind(std::size_t n) : parent_(n) {
  parallel_for(0, n, [&](std::size_t v) { parent_[v] = static_cast<VertexId>(v); });
}

VertexId UnionFind::find(VertexId v) {
  while (true) {
    std::atomic_ref<VertexId> slot(parent_[v]);
    VertexId p = slot.load(std::memory_order_acquire);
    if (p == v) return v;
    std::atomic_ref<VertexId> pslot(parent_[p]);
    const VertexId gp = pslot.load(std::memory_order_acquire);
    if (gp == p) return p;
    // Path halving; a lost race just means someone else shortened it.
    slot.compare_exchange_weak(p, gp, std::memory_order_acq_rel);
    v = gp;
  }
}

namespace {

// Strict total order on roots. Links always go from the smaller side to the
// larger, so concurrent unites cannot close a cycle; hashing first keeps
// the resulting trees shallow for adversarial id patterns.
bool link_below(VertexId a, VertexId b) {
  const std::uint64_t ha = mix64(a);
  const std::uint64_t hb = mix64(b);
  return ha < hb || (ha == hb && a < b);
}

}  // namespace

bool UnionFind::unite(VertexId a, VertexId b) {
  while (true) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (!link_below(a, b)) std::swap(a, b);
    std::atomic_ref<VertexId> slot(parent_[a]);
    VertexId expected = a;
    if (slot.compare_exchange_strong(expected, b, std::memory_order_acq_rel)) return true;
    // a stopped being a root under us; retry from the new roots.
  }
}

namespace {

using KeepFn = std::function<bool(VertexId, EdgeIndex)>;

// Claims u for cluster c. The winning claim records the traversal edge in
// parent; losers see false and leave u alone.
bool try_claim(VertexId* cluster, VertexId* parent, VertexId u, VertexId c, VertexId from) {
  std::atomic_ref<VertexId> slot(cluster[u]);
  VertexId unclaimed = kNoVertex;
  if (slot.compare_exchange_strong(unclaimed, c, std::memory_order_acq_rel,
                                   std::memory_order_relaxed)) {
    parent[u] = from;  // sole writer: this CAS just claimed u
    return true;
  }
  return false;
}

thread_local std::vector<VertexId> t_ring;

// Budgeted walk from a claimed seed, the cluster-growing flavor of the
// engine's local search: claimed vertices join the seed's cluster and keep
// walking until tau edges have been examined; an interrupted head and any
// queued leftovers spill into the bag for the next round. Rejected edges
// still spend budget.
void local_search_claim(const Graph& g, VertexId seed, VertexId* cluster, VertexId* parent,
                        const KeepFn& keep, HashBag& bag, std::uint32_t tau) {
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
    const VertexId c = cluster[x];
    const EdgeIndex begin = g.offsets[x];
    const EdgeIndex degree = g.offsets[x + 1] - begin;
    EdgeIndex scanned = 0;
    for (; scanned < degree; ++scanned) {
      if (budget == tau) break;
      ++budget;
      if (keep && !keep(x, begin + scanned)) continue;
      const VertexId u = g.targets[begin + scanned];
      if (try_claim(cluster, parent, u, c, x)) {
        std::uint32_t slot = head + queued;
        if (slot >= cap) slot -= cap;
        ring[slot] = u;
        ++queued;
      }
    }
    if (scanned < degree) {
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

LddResult ldd(const Graph& g, const LddParams& params, const KeepFn& keep) {
  if (!g.symmetric()) {
    throw std::invalid_argument("ldd: graph must be symmetric");
  }
  if (params.growth <= 1.0) {
    throw std::invalid_argument("ldd: batch growth must exceed 1");
  }
  const std::uint32_t tau =
      params.vgc.enabled ? std::max<std::uint32_t>(params.vgc.tau, 1) : 1;

  LddResult result;
  result.cluster.assign(g.n, kNoVertex);
  result.parent.assign(g.n, kNoVertex);
  if (g.n == 0) return result;
  VertexId* cluster = result.cluster.data();
  VertexId* parent = result.parent.data();

  // Seeded wake-up order: a vertex that is still unclaimed when its turn
  // comes becomes a center, so every vertex ends up clustered.
  std::vector<VertexId> order(g.n);
  for (VertexId v = 0; v < g.n; ++v) order[v] = v;
  SplitMix64 rng(params.seed ^ 0xd6e8feb86659fd93ULL);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.next_below(i)]);
  }

  HashBag bag(g.n, params.vgc.bag);
  std::vector<VertexId> frontier;
  bool dense = false;
  std::vector<std::uint8_t> cur_flags;
  std::vector<std::uint8_t> next_flags;
  std::uint64_t frontier_size = 0;

  std::size_t pos = 0;
  std::uint64_t batch_size = 1;
  while (pos < g.n || frontier_size > 0) {
    if (pos < g.n) {
      const std::size_t take =
          std::min<std::size_t>(g.n - pos, static_cast<std::size_t>(batch_size));
      for (std::size_t i = pos; i < pos + take; ++i) {
        const VertexId c = order[i];
        if (cluster[c] != kNoVertex) continue;
        cluster[c] = c;
        parent[c] = c;
        if (dense) {
          cur_flags[c] = 1;
        } else {
          frontier.push_back(c);
        }
        ++frontier_size;
      }
      pos += take;
      batch_size = static_cast<std::uint64_t>(
          std::ceil(params.growth * static_cast<double>(batch_size)));
    }
    if (frontier_size == 0) continue;

    std::uint64_t work = 0;
    if (dense) {
      work = parallel_sum(0, g.n,
                          [&](std::size_t v) { return cur_flags[v] ? g.out_degree(v) : 0; });
    } else {
      work = parallel_sum(0, frontier.size(),
                          [&](std::size_t i) { return g.out_degree(frontier[i]); });
    }
    const bool want_dense = decide_dense(params.vgc, work, g.m);
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
    result.rounds += 1;

    if (dense) {
      // Pull round: every unclaimed vertex adopts the cluster of its first
      // kept neighbor on the frontier.
      if (next_flags.size() != static_cast<std::size_t>(g.n)) {
        next_flags.assign(g.n, 0);
      } else {
        parallel_for(0, g.n, [&](std::size_t v) { next_flags[v] = 0; });
      }
      parallel_for(0, g.n, [&](std::size_t ui) {
        const VertexId u = static_cast<VertexId>(ui);
        if (cluster[u] != kNoVertex) return;
        for (EdgeIndex j = g.offsets[u]; j < g.offsets[u + 1]; ++j) {
          if (keep && !keep(u, j)) continue;
          const VertexId v = g.targets[j];
          // Frontier membership is checked first: cluster[v] is stable only
          // for vertices claimed in earlier rounds, and cur_flags marks
          // exactly those.
          if (!cur_flags[v]) continue;
          cluster[u] = cluster[v];  // u's task is the only writer this round
          parent[u] = v;
          next_flags[u] = 1;
          break;
        }
      });
      std::swap(cur_flags, next_flags);
      frontier_size = parallel_sum(0, g.n, [&](std::size_t v) { return cur_flags[v] ? 1u : 0u; });
    } else {
      const std::vector<VertexId>& f = frontier;
      parallel_for(0, f.size(), [&](std::size_t i) {
        const VertexId v = f[i];
        const EdgeIndex begin = g.offsets[v];
        const EdgeIndex degree = g.offsets[v + 1] - begin;
        if (degree >= tau) {
          // Wide vertex: scan its adjacency in parallel instead of walking.
          const VertexId c = cluster[v];
          parallel_for(
              0, degree,
              [&](std::size_t j) {
                if (keep && !keep(v, begin + j)) return;
                const VertexId u = g.targets[begin + j];
                if (try_claim(cluster, parent, u, c, v)) bag.insert(u);
              },
              2048);
        } else {
          local_search_claim(g, v, cluster, parent, keep, bag, tau);
        }
      });
      if (bag.exhausted()) {
        throw std::runtime_error("ldd: frontier bag exhausted (bound violated)");
      }
      frontier = bag.extract_all();
      frontier_size = frontier.size();
    }
  }
  return result;
}

namespace {

struct ClusterUnion {
  LddResult decomposition;
  std::vector<Edge> merge_edges;
  std::vector<VertexId> label;
  CcStats stats;
};

ClusterUnion cluster_and_union(const Graph& g, const LddParams& params, const KeepFn& keep) {
  if (!g.symmetric()) {
    throw std::invalid_argument("connected components require a symmetric graph");
  }
  ClusterUnion out;
  Timer t;
  out.decomposition = ldd(g, params, keep);
  out.stats.ldd_s = t.elapsed_s();
  out.stats.ldd_rounds = out.decomposition.rounds;
  const std::vector<VertexId>& cluster = out.decomposition.cluster;

  // Each successful unite strictly reduces the set count, so at most n - 1
  // edges land in the buffer.
  t.reset();
  UnionFind uf(g.n);
  std::vector<Edge> merges(g.n);
  std::atomic<std::uint64_t> merge_count{0};
  parallel_for(0, g.n, [&](std::size_t ui) {
    const VertexId u = static_cast<VertexId>(ui);
    for (EdgeIndex j = g.offsets[u]; j < g.offsets[u + 1]; ++j) {
      if (keep && !keep(u, j)) continue;
      const VertexId v = g.targets[j];
      if (cluster[u] == cluster[v]) continue;
      if (uf.unite(cluster[u], cluster[v])) {
        merges[merge_count.fetch_add(1, std::memory_order_relaxed)] = {u, v};
      }
    }
  });
  out.merge_edges.assign(merges.begin(),
                         merges.begin() + merge_count.load(std::memory_order_relaxed));
  out.stats.merge_edges = out.merge_edges.size();
  out.stats.union_s = t.elapsed_s();

  // Canonical labels: the smallest vertex id in each component, regardless
  // of which roots union-find happened to elect.
  t.reset();
  std::vector<VertexId> rep(g.n);
  parallel_for(0, g.n, [&](std::size_t v) { rep[v] = uf.find(cluster[v]); });
  std::vector<VertexId> min_id(g.n, kNoVertex);
  parallel_for(0, g.n,
               [&](std::size_t v) { atomic_write_min(min_id[rep[v]], static_cast<VertexId>(v)); });
  out.label.resize(g.n);
  parallel_for(0, g.n, [&](std::size_t v) { out.label[v] = min_id[rep[v]]; });
  out.stats.num_components = parallel_sum(
      0, g.n, [&](std::size_t v) -> std::uint64_t { return out.label[v] == v ? 1 : 0; });
  out.stats.finish_s = t.elapsed_s();
  return out;
}

}  // namespace

CcResult run_cc(const Graph& g, const LddParams& params) {
  ClusterUnion cu = cluster_and_union(g, params, nullptr);
  return {std::move(cu.label), cu.stats};
}

CcResult run_cc_filtered(const Graph& g, const LddParams& params, const KeepFn& keep) {
  ClusterUnion cu = cluster_and_union(g, params, keep);
  return {std::move(cu.label), cu.stats};
}

SpanningForest spanning_forest(const Graph& g, const LddParams& params) {
  ClusterUnion cu = cluster_and_union(g, params, nullptr);

  std::vector<Edge> tree_edges;
  tree_edges.reserve(g.n);
  for (VertexId v = 0; v < g.n; ++v) {
    if (cu.decomposition.parent[v] != v) tree_edges.emplace_back(v, cu.decomposition.parent[v]);
  }
  tree_edges.insert(tree_edges.end(), cu.merge_edges.begin(), cu.merge_edges.end());
  if (tree_edges.size() + cu.stats.num_components != g.n) {
    throw std::logic_error("spanning_forest: edge count does not match component count");
  }

  std::vector<Edge> both;
  both.reserve(2 * tree_edges.size());
  for (const Edge& e : tree_edges) {
    both.emplace_back(e.first, e.second);
    both.emplace_back(e.second, e.first);
  }
  const Graph forest = build_graph(g.n, std::move(both), /*with_transpose=*/false);

  // Re-root every tree at the smallest id in its component. The sweep is
  // sequential: forests are linear-size and a fixed root rule keeps the
  // output identical for any worker count.
  SpanningForest out;
  out.parent.assign(g.n, kNoVertex);
  out.root.assign(g.n, kNoVertex);
  std::vector<VertexId> queue;
  queue.reserve(g.n);
  for (VertexId r = 0; r < g.n; ++r) {
    if (out.root[r] != kNoVertex) continue;
    out.root[r] = r;
    out.parent[r] = r;
    out.num_components += 1;
    queue.clear();
    queue.push_back(r);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      for (const VertexId u : forest.out_neighbors(v)) {
        if (out.root[u] != kNoVertex) continue;
        out.root[u] = r;
        out.parent[u] = v;
        queue.push_back(u);
      }
    }
  }
  out.edges.reserve(g.n - out.num_components);
  for (VertexId v = 0; v < g.n; ++v) {
    if (out.parent[v] != v) out.edges.emplace_back(v, out.parent[v]);
  }
  return out;
}

}  // namespace cgraph
