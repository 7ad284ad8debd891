#include "cgraph/bcc.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <stdexcept>

#include "cgraph/parallel.hpp"
#include "cgraph/timer.hpp"

namespace cgraph {

namespace {

constexpr std::uint64_t kNilArc = ~std::uint64_t{0};

}  // namespace

EulerTour euler_tour(const SpanningForest& forest) {
  const std::size_t n = forest.parent.size();
  if (forest.root.size() != n) {
    throw std::invalid_argument("euler_tour: forest parent/root arrays disagree");
  }
  EulerTour tour;
  if (n == 0) return tour;

  // Doubled tree edges in CSR form; each entry is one arc of the circuit.
  std::vector<Edge> both;
  both.reserve(2 * forest.edges.size());
  for (const Edge& e : forest.edges) {
    both.emplace_back(e.first, e.second);
    both.emplace_back(e.second, e.first);
  }
  const Graph f = build_graph(static_cast<VertexId>(n), std::move(both), /*with_transpose=*/false);
  const std::uint64_t arcs = f.m;

  std::vector<VertexId> owner(arcs);
  parallel_for(0, n, [&](std::size_t v) {
    for (EdgeIndex j = f.offsets[v]; j < f.offsets[v + 1]; ++j) {
      owner[j] = static_cast<VertexId>(v);
    }
  });

  // rev[j]: index of the opposite arc; succ[j]: circuit successor. Arriving
  // at v along (u, v), the circuit leaves through v's cyclically next
  // neighbor after u, which traverses every arc of the tree exactly once.
  std::vector<std::uint64_t> rev(arcs);
  parallel_for(0, arcs, [&](std::size_t j) {
    const VertexId u = owner[j];
    const VertexId v = f.targets[j];
    const auto list = f.out_neighbors(v);
    const auto it = std::lower_bound(list.begin(), list.end(), u);
    rev[j] = f.offsets[v] + static_cast<std::uint64_t>(it - list.begin());
  });
  std::vector<std::uint64_t> next(arcs);
  parallel_for(0, arcs, [&](std::size_t j) {
    const VertexId v = f.targets[j];
    const std::uint64_t deg = f.offsets[v + 1] - f.offsets[v];
    next[j] = f.offsets[v] + (rev[j] - f.offsets[v] + 1) % deg;
  });

  // Cut each circuit at its root: the arc whose successor would be the
  // root's first outgoing arc becomes the tail.
  for (VertexId r = 0; r < n; ++r) {
    if (forest.parent[r] != r) continue;
    const std::uint64_t deg = f.offsets[r + 1] - f.offsets[r];
    if (deg > 0) next[rev[f.offsets[r] + deg - 1]] = kNilArc;
  }

  // Pointer-jumping list ranking: dist[j] counts arcs from j to the tail
  // inclusive, so the head's dist is the tree's arc count.
  std::vector<std::uint64_t> dist(arcs, 1);
  std::vector<std::uint64_t> dist_next(arcs);
  std::vector<std::uint64_t> jump(arcs);
  while (parallel_sum(0, arcs, [&](std::size_t j) { return next[j] == kNilArc ? 0u : 1u; }) > 0) {
    parallel_for(0, arcs, [&](std::size_t j) {
      if (next[j] == kNilArc) {
        dist_next[j] = dist[j];
        jump[j] = kNilArc;
      } else {
        dist_next[j] = dist[j] + dist[next[j]];
        jump[j] = next[next[j]];
      }
    });
    std::swap(dist, dist_next);
    std::swap(next, jump);
  }

  // Tree bases: trees are laid out in ascending root order, 2k-1 visit
  // positions for k vertices.
  std::vector<std::uint64_t> tree_size(n, 0);
  for (std::size_t v = 0; v < n; ++v) tree_size[forest.root[v]] += 1;
  std::vector<std::uint64_t> base(n, 0);
  std::uint64_t total = 0;
  for (VertexId r = 0; r < n; ++r) {
    if (forest.parent[r] != r) continue;
    base[r] = total;
    total += 2 * tree_size[r] - 1;
  }

  tour.order.assign(total, kNoVertex);
  parallel_for(0, arcs, [&](std::size_t j) {
    const VertexId u = owner[j];
    const VertexId r = forest.root[u];
    // dist[head] - dist[j] is j's rank within its tree's arc list.
    tour.order[base[r] + dist[f.offsets[r]] - dist[j]] = u;
  });
  parallel_for(0, n, [&](std::size_t vi) {
    const VertexId r = static_cast<VertexId>(vi);
    if (forest.parent[r] != r) return;
    tour.order[base[r] + 2 * (tree_size[r] - 1)] = r;  // closing visit
  });

  tour.first.assign(n, ~std::uint64_t{0});
  tour.last.assign(n, 0);
  parallel_for(0, total, [&](std::size_t i) {
    atomic_write_min(tour.first[tour.order[i]], static_cast<std::uint64_t>(i));
    atomic_write_max(tour.last[tour.order[i]], static_cast<std::uint64_t>(i));
  });
  return tour;
}

namespace {

// Range-extreme tables over the tour: standard doubling layout, 2 n log n
// words total, constant-time queries.
struct SparseTable {
  std::vector<std::vector<std::uint64_t>> levels;
  bool min_table = true;

  void build(std::vector<std::uint64_t> base, bool use_min) {
    min_table = use_min;
    levels.clear();
    levels.push_back(std::move(base));
    const std::size_t size = levels[0].size();
    for (std::size_t half = 1; half * 2 <= size; half *= 2) {
      const std::vector<std::uint64_t>& prev = levels.back();
      std::vector<std::uint64_t> cur(size - 2 * half + 1);
      parallel_for(0, cur.size(), [&](std::size_t i) {
        cur[i] = min_table ? std::min(prev[i], prev[i + half]) : std::max(prev[i], prev[i + half]);
      });
      levels.push_back(std::move(cur));
    }
  }

  // Inclusive range query.
  std::uint64_t query(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t len = b - a + 1;
    const int k = std::bit_width(len) - 1;
    const std::uint64_t left = levels[k][a];
    const std::uint64_t right = levels[k][b + 1 - (std::uint64_t{1} << k)];
    return min_table ? std::min(left, right) : std::max(left, right);
  }
};

bool is_tree_entry(const SpanningForest& forest, VertexId u, VertexId v) {
  return forest.parent[u] == v || forest.parent[v] == u;
}

}  // namespace

LowHigh compute_low_high(const Graph& g, const SpanningForest& forest, const EulerTour& tour) {
  if (!g.symmetric()) {
    throw std::invalid_argument("compute_low_high: graph must be symmetric");
  }
  LowHigh lh;
  lh.w1.assign(g.n, 0);
  lh.w2.assign(g.n, 0);
  lh.low.assign(g.n, 0);
  lh.high.assign(g.n, 0);
  if (g.n == 0) return lh;

  parallel_for(0, g.n, [&](std::size_t vi) {
    const VertexId v = static_cast<VertexId>(vi);
    std::uint64_t w1 = tour.first[v];
    std::uint64_t w2 = tour.first[v];
    for (const VertexId u : g.out_neighbors(v)) {
      if (is_tree_entry(forest, v, u)) continue;
      w1 = std::min(w1, tour.first[u]);
      w2 = std::max(w2, tour.first[u]);
    }
    lh.w1[v] = w1;
    lh.w2[v] = w2;
  });

  // Spread per-vertex values along the tour so a subtree becomes one
  // contiguous range.
  const std::size_t total = tour.order.size();
  std::vector<std::uint64_t> tour_w1(total);
  std::vector<std::uint64_t> tour_w2(total);
  parallel_for(0, total, [&](std::size_t i) {
    tour_w1[i] = lh.w1[tour.order[i]];
    tour_w2[i] = lh.w2[tour.order[i]];
  });
  SparseTable min_table;
  SparseTable max_table;
  min_table.build(std::move(tour_w1), /*use_min=*/true);
  max_table.build(std::move(tour_w2), /*use_min=*/false);

  parallel_for(0, g.n, [&](std::size_t v) {
    lh.low[v] = min_table.query(tour.first[v], tour.last[v]);
    lh.high[v] = max_table.query(tour.first[v], tour.last[v]);
  });
  return lh;
}

EdgeClassification classify_edges(const Graph& g, const SpanningForest& forest,
                                  const EulerTour& tour, const LowHigh& lh) {
  EdgeClassification out;
  out.kind.assign(g.m, EdgeKind::kCross);
  out.critical.assign(g.m, 0);
  parallel_for(0, g.n, [&](std::size_t ui) {
    const VertexId u = static_cast<VertexId>(ui);
    for (EdgeIndex j = g.offsets[u]; j < g.offsets[u + 1]; ++j) {
      const VertexId v = g.targets[j];
      if (is_tree_entry(forest, u, v)) {
        out.kind[j] = EdgeKind::kTree;
        const VertexId child = forest.parent[v] == u ? v : u;
        const VertexId parent = forest.parent[v] == u ? u : v;
        // Critical: nothing under child escapes the parent's subtree.
        out.critical[j] = lh.low[child] >= tour.first[parent] &&
                                  lh.high[child] <= tour.last[parent]
                              ? 1
                              : 0;
      } else if ((tour.first[u] <= tour.first[v] && tour.last[v] <= tour.last[u]) ||
                 (tour.first[v] <= tour.first[u] && tour.last[u] <= tour.last[v])) {
        // Nested tour intervals = ancestor relationship.
        out.kind[j] = EdgeKind::kBack;
      }
    }
  });
  return out;
}

BccResult run_bcc(const Graph& g, const LddParams& params) {
  if (!g.symmetric()) {
    throw std::invalid_argument("run_bcc: graph must be symmetric");
  }
  BccResult result;
  Timer phase;
  result.forest = spanning_forest(g, params);
  result.stats.phases.forest_s = phase.elapsed_s();

  phase.reset();
  const EulerTour tour = euler_tour(result.forest);
  result.stats.phases.tour_s = phase.elapsed_s();

  phase.reset();
  const LowHigh lh = compute_low_high(g, result.forest, tour);
  const EdgeClassification classes = classify_edges(g, result.forest, tour, lh);
  result.stats.phases.low_high_s = phase.elapsed_s();

  phase.reset();
  // Final connectivity over g minus back edges and critical tree edges;
  // its components are exactly the BCC member sets.
  const CcResult cc = run_cc_filtered(g, params, [&](VertexId, EdgeIndex j) {
    if (classes.kind[j] == EdgeKind::kBack) return false;
    if (classes.kind[j] == EdgeKind::kTree && classes.critical[j]) return false;
    return true;
  });

  BcLabeling& labeling = result.labeling;
  labeling.label.assign(g.n, kNoVertex);
  labeling.head.assign(g.n, kNoVertex);
  parallel_for(0, g.n, [&](std::size_t v) {
    if (result.forest.parent[v] != v) labeling.label[v] = cc.label[v];
  });

  // A label's head is the tree parent through which the component attaches
  // upward: the parent of any member whose parent edge crosses the component
  // boundary. Such an edge is always a skipped critical edge, but a critical
  // edge can also sit in the interior of a component (its shortcut kept by a
  // cross edge), in which case it names no head. Every component has at least
  // one boundary member (the one entered earliest on the tour), and all
  // boundary parents of a component agree.
  std::atomic<bool> conflict{false};
  std::atomic<bool> missing{false};
  parallel_for(0, g.n, [&](std::size_t vi) {
    const VertexId v = static_cast<VertexId>(vi);
    const VertexId label = labeling.label[v];
    if (label == kNoVertex) return;  // roots carry no label
    const VertexId parent = result.forest.parent[v];
    if (labeling.label[parent] == label) return;  // parent edge is interior
    std::atomic_ref<VertexId> slot(labeling.head[label]);
    VertexId expected = kNoVertex;
    if (!slot.compare_exchange_strong(expected, parent, std::memory_order_acq_rel) &&
        expected != parent) {
      conflict.store(true, std::memory_order_relaxed);
    }
  });
  parallel_for(0, g.n, [&](std::size_t v) {
    const VertexId label = labeling.label[v];
    if (label != kNoVertex && labeling.head[label] == kNoVertex) {
      missing.store(true, std::memory_order_relaxed);
    }
  });
  if (conflict.load() || missing.load()) {
    throw std::logic_error("run_bcc: labeling produced inconsistent component heads");
  }
  result.stats.phases.final_cc_s = phase.elapsed_s();

  std::vector<std::uint8_t> used(g.n, 0);
  parallel_for(0, g.n, [&](std::size_t v) {
    if (labeling.label[v] == kNoVertex) return;
    std::atomic_ref<std::uint8_t> slot(used[labeling.label[v]]);
    slot.store(1, std::memory_order_relaxed);
  });
  result.stats.num_bccs = parallel_sum(0, g.n, [&](std::size_t v) { return used[v] ? 1u : 0u; });
  result.stats.tree_edges = parallel_sum(0, g.m, [&](std::size_t j) {
                              return classes.kind[j] == EdgeKind::kTree ? 1u : 0u;
                            }) /
                            2;
  result.stats.back_edges = parallel_sum(0, g.m, [&](std::size_t j) {
                              return classes.kind[j] == EdgeKind::kBack ? 1u : 0u;
                            }) /
                            2;
  result.stats.cross_edges = g.m / 2 - result.stats.tree_edges - result.stats.back_edges;
  result.stats.critical_edges =
      parallel_sum(0, g.m, [&](std::size_t j) { return classes.critical[j] ? 1u : 0u; }) / 2;
  return result;
}

std::vector<VertexId> articulation_points(const BcLabeling& labeling) {
  const std::size_t n = labeling.label.size();
  std::vector<std::uint32_t> heads(n, 0);
  for (VertexId label = 0; label < n; ++label) {
    if (labeling.head[label] != kNoVertex) heads[labeling.head[label]] += 1;
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v) {
    const bool is_root = labeling.label[v] == kNoVertex;
    if (heads[v] >= (is_root ? 2u : 1u)) out.push_back(v);
  }
  return out;
}

std::vector<Edge> bridges(const BcLabeling& labeling, const SpanningForest& forest) {
  const std::size_t n = labeling.label.size();
  std::vector<std::uint32_t> members(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (labeling.label[v] != kNoVertex) members[labeling.label[v]] += 1;
  }
  std::vector<Edge> out;
  for (VertexId v = 0; v < n; ++v) {
    const VertexId label = labeling.label[v];
    if (label == kNoVertex || members[label] != 1 || label != v) continue;
    const VertexId head = labeling.head[label];
    if (forest.parent[v] != head) {
      throw std::logic_error("bridges: component head is not the member's tree parent");
    }
    out.emplace_back(std::min(head, v), std::max(head, v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cgraph
