#include "cgraph/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cgraph {
namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

// Canonicalizes per-vertex class representatives to the smallest member id
// and fills the summary counts.
void canonicalize_labels(std::vector<VertexId>& label, std::uint64_t& classes,
                         std::uint64_t& largest) {
  const std::size_t n = label.size();
  std::vector<VertexId> min_id(n, kNoVertex);
  for (std::size_t v = 0; v < n; ++v) {
    const VertexId rep = label[v];
    min_id[rep] = std::min(min_id[rep], static_cast<VertexId>(v));
  }
  std::vector<std::uint64_t> size(n, 0);
  classes = 0;
  largest = 0;
  for (std::size_t v = 0; v < n; ++v) {
    label[v] = min_id[label[v]];
    const std::uint64_t s = ++size[label[v]];
    largest = std::max(largest, s);
  }
  for (std::size_t v = 0; v < n; ++v) classes += label[v] == v ? 1 : 0;
}

}  // namespace

SeqScc tarjan_scc(const Graph& g) {
  SeqScc out;
  out.label.assign(g.n, kNoVertex);
  if (g.n == 0) return out;

  struct Frame {
    VertexId v;
    EdgeIndex next;
  };
  std::vector<std::uint32_t> disc(g.n, kUnset);
  std::vector<std::uint32_t> low(g.n, 0);
  std::vector<std::uint8_t> on_stack(g.n, 0);
  std::vector<VertexId> scc_stack;
  std::vector<Frame> call;
  std::uint32_t counter = 0;

  for (VertexId root = 0; root < g.n; ++root) {
    if (disc[root] != kUnset) continue;
    disc[root] = low[root] = counter++;
    on_stack[root] = 1;
    scc_stack.push_back(root);
    call.push_back(Frame{root, g.offsets[root]});
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < g.offsets[f.v + 1]) {
        const VertexId u = g.targets[f.next++];
        if (disc[u] == kUnset) {
          disc[u] = low[u] = counter++;
          on_stack[u] = 1;
          scc_stack.push_back(u);
          call.push_back(Frame{u, g.offsets[u]});
        } else if (on_stack[u]) {
          low[f.v] = std::min(low[f.v], disc[u]);
        }
        continue;
      }
      const VertexId v = f.v;
      call.pop_back();
      if (low[v] == disc[v]) {
        while (true) {
          const VertexId w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = 0;
          out.label[w] = v;
          if (w == v) break;
        }
      }
      if (!call.empty()) {
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  canonicalize_labels(out.label, out.num_sccs, out.largest);
  return out;
}

SeqBcc hopcroft_tarjan_bcc(const Graph& g) {
  if (!g.symmetric()) {
    throw std::invalid_argument("hopcroft_tarjan_bcc requires a symmetric graph");
  }
  SeqBcc out;
  if (g.n == 0) return out;

  struct Frame {
    VertexId v;
    VertexId parent;
    EdgeIndex next;
    bool parent_skipped;
    std::uint32_t children;
  };
  std::vector<std::uint32_t> disc(g.n, kUnset);
  std::vector<std::uint32_t> low(g.n, 0);
  std::vector<std::uint8_t> artic(g.n, 0);
  std::vector<Edge> edge_stack;
  std::vector<Frame> call;
  std::uint32_t counter = 0;

  auto pop_component = [&](VertexId parent, VertexId child) {
    std::vector<VertexId> members;
    while (true) {
      const Edge e = edge_stack.back();
      edge_stack.pop_back();
      members.push_back(e.first);
      members.push_back(e.second);
      if (e.first == parent && e.second == child) break;
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    out.components.push_back(std::move(members));
  };

  for (VertexId root = 0; root < g.n; ++root) {
    if (disc[root] != kUnset || g.out_degree(root) == 0) continue;
    disc[root] = low[root] = counter++;
    call.push_back(Frame{root, kNoVertex, g.offsets[root], false, 0});
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < g.offsets[f.v + 1]) {
        const EdgeIndex j = f.next++;
        const VertexId u = g.targets[j];
        if (u == f.parent && !f.parent_skipped) {
          f.parent_skipped = true;
          continue;
        }
        if (disc[u] == kUnset) {
          edge_stack.push_back(Edge{f.v, u});
          ++f.children;
          disc[u] = low[u] = counter++;
          const VertexId v = f.v;
          call.push_back(Frame{u, v, g.offsets[u], false, 0});
        } else if (disc[u] < disc[f.v]) {
          // Back edge toward an ancestor; the mirrored arc of an edge that
          // is already on the stack is skipped by the disc comparison.
          edge_stack.push_back(Edge{f.v, u});
          low[f.v] = std::min(low[f.v], disc[u]);
        }
        continue;
      }
      const VertexId v = f.v;
      const VertexId parent = f.parent;
      const std::uint32_t children = f.children;
      call.pop_back();
      if (parent == kNoVertex) {
        if (children >= 2) artic[v] = 1;
        continue;
      }
      low[parent] = std::min(low[parent], low[v]);
      if (low[v] >= disc[parent]) {
        // The tree edge (parent, v) closes a component. Every root child
        // lands here too, because disc[root] is minimal in its component.
        if (call.size() > 1) artic[parent] = 1;  // root handled via children
        if (low[v] > disc[parent]) {
          out.bridges.push_back(Edge{std::min(parent, v), std::max(parent, v)});
        }
        pop_component(parent, v);
      }
    }
  }

  for (VertexId v = 0; v < g.n; ++v) {
    if (artic[v]) out.articulation.push_back(v);
  }
  std::sort(out.components.begin(), out.components.end());
  std::sort(out.bridges.begin(), out.bridges.end());
  return out;
}

std::vector<std::vector<LeListEntry>> cohen_lelists(const Graph& g,
                                                    std::span<const VertexId> priority) {
  if (!g.symmetric()) {
    throw std::invalid_argument("cohen_lelists requires a symmetric graph");
  }
  if (priority.size() != g.n) {
    throw std::invalid_argument("cohen_lelists: priority order must cover every vertex");
  }
  std::vector<std::vector<LeListEntry>> lists(g.n);
  std::vector<std::uint32_t> delta(g.n, kUnset);
  std::vector<std::uint32_t> seen(g.n, kUnset);
  std::vector<VertexId> cur;
  std::vector<VertexId> next;

  for (std::size_t i = 0; i < priority.size(); ++i) {
    const VertexId s = priority[i];
    const std::uint32_t version = static_cast<std::uint32_t>(i);
    seen[s] = version;
    lists[s].push_back(LeListEntry{s, 0});
    delta[s] = 0;
    cur.assign(1, s);
    std::uint32_t d = 0;
    while (!cur.empty()) {
      ++d;
      next.clear();
      for (const VertexId v : cur) {
        for (const VertexId u : g.out_neighbors(v)) {
          if (seen[u] == version) continue;
          seen[u] = version;
          if (d < delta[u]) {
            lists[u].push_back(LeListEntry{s, d});
            delta[u] = d;
            next.push_back(u);
          }
        }
      }
      std::swap(cur, next);
    }
  }
  return lists;
}

std::vector<std::uint8_t> seq_bfs_reach(const Graph& g, VertexId src) {
  if (src >= g.n) throw std::invalid_argument("seq_bfs_reach: source out of range");
  std::vector<std::uint8_t> visited(g.n, 0);
  std::vector<VertexId> cur{src};
  visited[src] = 1;
  while (!cur.empty()) {
    std::vector<VertexId> next;
    for (const VertexId v : cur) {
      for (const VertexId u : g.out_neighbors(v)) {
        if (!visited[u]) {
          visited[u] = 1;
          next.push_back(u);
        }
      }
    }
    cur = std::move(next);
  }
  return visited;
}

SeqCc seq_components(const Graph& g) {
  if (!g.symmetric()) {
    throw std::invalid_argument("seq_components requires a symmetric graph");
  }
  SeqCc out;
  out.label.assign(g.n, kNoVertex);
  std::vector<VertexId> cur;
  for (VertexId root = 0; root < g.n; ++root) {
    if (out.label[root] != kNoVertex) continue;
    ++out.num_components;
    out.label[root] = root;  // roots ascend, so the label is the minimum id
    cur.assign(1, root);
    while (!cur.empty()) {
      std::vector<VertexId> next;
      for (const VertexId v : cur) {
        for (const VertexId u : g.out_neighbors(v)) {
          if (out.label[u] == kNoVertex) {
            out.label[u] = root;
            next.push_back(u);
          }
        }
      }
      cur = std::move(next);
    }
  }
  return out;
}

// --- definitional brute forces --------------------------------------------------

SeqScc brute_scc(const Graph& g) {
  SeqScc out;
  out.label.assign(g.n, kNoVertex);
  if (g.n == 0) return out;
  std::vector<std::vector<std::uint8_t>> reach(g.n);
  for (VertexId v = 0; v < g.n; ++v) reach[v] = seq_bfs_reach(g, v);
  for (VertexId v = 0; v < g.n; ++v) {
    for (VertexId u = 0; u <= v; ++u) {
      if (reach[u][v] && reach[v][u]) {
        out.label[v] = u;  // smallest mutually-reachable vertex
        break;
      }
    }
  }
  canonicalize_labels(out.label, out.num_sccs, out.largest);
  return out;
}

namespace {

// Counts connected components of the subgraph induced by the vertices in
// mask, optionally ignoring one suppressed undirected edge.
std::uint32_t masked_components(const Graph& g, std::uint32_t mask, Edge skip = {kNoVertex,
                                                                                 kNoVertex}) {
  std::uint32_t done = 0;
  std::uint32_t count = 0;
  for (VertexId root = 0; root < g.n; ++root) {
    const std::uint32_t bit = 1u << root;
    if (!(mask & bit) || (done & bit)) continue;
    ++count;
    std::vector<VertexId> stack{root};
    done |= bit;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const VertexId u : g.out_neighbors(v)) {
        if (!(mask & (1u << u)) || (done & (1u << u))) continue;
        if ((v == skip.first && u == skip.second) || (v == skip.second && u == skip.first)) {
          continue;
        }
        done |= 1u << u;
        stack.push_back(u);
      }
    }
  }
  return count;
}

// True when the subgraph induced by mask is connected and stays connected
// after removing any single vertex.
bool mask_biconnected(const Graph& g, std::uint32_t mask) {
  if (masked_components(g, mask) != 1) return false;
  for (VertexId v = 0; v < g.n; ++v) {
    const std::uint32_t bit = 1u << v;
    if (!(mask & bit)) continue;
    const std::uint32_t rest = mask & ~bit;
    if (rest == 0) continue;
    if (masked_components(g, rest) != 1) return false;
  }
  return true;
}

}  // namespace

SeqBcc brute_bcc(const Graph& g) {
  if (!g.symmetric()) throw std::invalid_argument("brute_bcc requires a symmetric graph");
  if (g.n > 20) throw std::invalid_argument("brute_bcc: graph too large for subset search");
  SeqBcc out;
  const std::uint32_t full = g.n == 32 ? ~0u : (1u << g.n) - 1;
  const std::uint32_t base = masked_components(g, full);

  std::vector<std::uint32_t> good;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    if (mask_biconnected(g, mask)) good.push_back(mask);
  }
  for (const std::uint32_t mask : good) {
    bool maximal = true;
    for (const std::uint32_t other : good) {
      if (other != mask && (other & mask) == mask) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;
    std::vector<VertexId> members;
    for (VertexId v = 0; v < g.n; ++v) {
      if (mask & (1u << v)) members.push_back(v);
    }
    out.components.push_back(std::move(members));
  }
  std::sort(out.components.begin(), out.components.end());

  for (VertexId v = 0; v < g.n; ++v) {
    if (masked_components(g, full & ~(1u << v)) > base) out.articulation.push_back(v);
  }
  for (VertexId v = 0; v < g.n; ++v) {
    for (const VertexId u : g.out_neighbors(v)) {
      if (u <= v) continue;
      if (masked_components(g, full, Edge{v, u}) > base) {
        out.bridges.push_back(Edge{v, u});
      }
    }
  }
  std::sort(out.bridges.begin(), out.bridges.end());
  return out;
}

std::vector<std::vector<LeListEntry>> brute_lelists(const Graph& g,
                                                    std::span<const VertexId> priority) {
  if (!g.symmetric()) {
    throw std::invalid_argument("brute_lelists requires a symmetric graph");
  }
  if (priority.size() != g.n) {
    throw std::invalid_argument("brute_lelists: priority order must cover every vertex");
  }
  // All-pairs hop distances, then a direct evaluation of the definition.
  std::vector<std::vector<std::uint32_t>> dist(g.n, std::vector<std::uint32_t>(g.n, kUnset));
  for (VertexId s = 0; s < g.n; ++s) {
    dist[s][s] = 0;
    std::vector<VertexId> cur{s};
    std::uint32_t d = 0;
    while (!cur.empty()) {
      ++d;
      std::vector<VertexId> next;
      for (const VertexId v : cur) {
        for (const VertexId u : g.out_neighbors(v)) {
          if (dist[s][u] == kUnset) {
            dist[s][u] = d;
            next.push_back(u);
          }
        }
      }
      cur = std::move(next);
    }
  }
  std::vector<std::vector<LeListEntry>> lists(g.n);
  for (VertexId v = 0; v < g.n; ++v) {
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const VertexId s : priority) {
      const std::uint32_t d = dist[s][v];
      if (d != kUnset && d < best) {
        lists[v].push_back(LeListEntry{s, d});
        best = d;
      }
    }
  }
  return lists;
}

}  // namespace cgraph
