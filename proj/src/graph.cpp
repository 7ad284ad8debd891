#include "cgraph/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cgraph/parallel.hpp"

namespace cgraph {

namespace {

// Edge list -> CSR, assuming edges are already clean (validated, no
// self-loops). Sorts, deduplicates, and fills offsets/targets.
void fill_csr(VertexId n, std::vector<Edge>&& edges, Graph& out) {
  parallel_sort(edges);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  out.n = n;
  out.m = edges.size();
  out.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  out.targets.resize(edges.size());

  // Count per-source degrees, then exclusive prefix sum.
  for (const Edge& e : edges) out.offsets[e.first + 1]++;
  for (std::size_t v = 1; v <= n; ++v) out.offsets[v] += out.offsets[v - 1];
  parallel_for(0, edges.size(), [&](std::size_t i) { out.targets[i] = edges[i].second; });
}

}  // namespace

Graph build_graph(VertexId n, std::vector<Edge> edges, bool with_transpose) {
  for (const Edge& e : edges) {
    if (e.first >= n || e.second >= n) {
      throw std::invalid_argument("build_graph: edge (" + std::to_string(e.first) + ", " +
                                  std::to_string(e.second) + ") out of range for n=" +
                                  std::to_string(n));
    }
  }
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });

  Graph g;
  if (with_transpose) {
    std::vector<Edge> reversed(edges.size());
    parallel_for(0, edges.size(),
                 [&](std::size_t i) { reversed[i] = {edges[i].second, edges[i].first}; });
    g.transpose = std::make_unique<Graph>();
    fill_csr(n, std::move(reversed), *g.transpose);
  }
  fill_csr(n, std::move(edges), g);
  return g;
}

Graph symmetrize(const Graph& g) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(g.m) * 2);
  for (VertexId v = 0; v < g.n; ++v) {
    for (VertexId u : g.out_neighbors(v)) {
      edges.emplace_back(v, u);
      edges.emplace_back(u, v);
    }
  }
  Graph s;
  fill_csr(g.n, std::move(edges), s);
  return s;
}

Graph clone(const Graph& g) {
  Graph c;
  c.n = g.n;
  c.m = g.m;
  c.offsets = g.offsets;
  c.targets = g.targets;
  if (g.transpose) c.transpose = std::make_unique<Graph>(clone(*g.transpose));
  return c;
}

}  // namespace cgraph
