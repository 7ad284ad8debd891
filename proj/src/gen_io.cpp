#include "cgraph/gen_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "cgraph/rng.hpp"

namespace cgraph {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("adjacency text, line " + std::to_string(line) + ": " + what);
}

std::uint64_t read_uint_line(std::istream& in, std::size_t& line, const char* what) {
  std::string text;
  while (std::getline(in, text)) {
    ++line;
    // Tolerate trailing carriage returns and surrounding spaces.
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ' || text.back() == '\t')) {
      text.pop_back();
    }
    std::size_t start = text.find_first_not_of(" \t");
    if (start == std::string::npos) continue;  // skip blank lines
    text = text.substr(start);
    std::uint64_t value = 0;
    for (char c : text) {
      if (c < '0' || c > '9') parse_fail(line, std::string("expected ") + what + ", got '" + text + "'");
      std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
      if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
        parse_fail(line, std::string(what) + " overflows 64 bits");
      }
      value = value * 10 + digit;
    }
    return value;
  }
  throw std::runtime_error("adjacency text: unexpected end of file while reading " +
                           std::string(what));
}

struct LatticeProbabilities {
  double forward;
  double backward;
};

LatticeProbabilities resolve_probabilities(const LatticeSpec& spec) {
  const bool oriented = spec.scheme == LatticeScheme::kOriented;
  double pf = spec.p_forward >= 0 ? spec.p_forward : (oriented ? 0.5 : 0.3);
  double pb = spec.p_backward >= 0 ? spec.p_backward : (oriented ? 1.0 - pf : 0.3);
  if (pf < 0 || pb < 0 || pf > 1 || pb > 1) {
    throw std::invalid_argument("gen_lattice: probabilities must lie in [0, 1]");
  }
  if (oriented) {
    if (std::abs(pf + pb - 1.0) > 1e-9) {
      throw std::invalid_argument("gen_lattice: oriented scheme needs p_forward + p_backward = 1");
    }
  } else if (pf + pb > 1.0 + 1e-12) {
    throw std::invalid_argument("gen_lattice: sampled scheme needs p_forward + p_backward <= 1");
  }
  return {pf, pb};
}

}  // namespace

Graph gen_lattice(const LatticeSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) {
    throw std::invalid_argument("gen_lattice: rows and cols must be positive");
  }
  const auto [pf, pb] = resolve_probabilities(spec);
  const std::uint64_t rows = spec.rows;
  const std::uint64_t cols = spec.cols;
  const std::uint64_t cells = rows * cols;
  if (cells > std::numeric_limits<VertexId>::max() - 1) {
    throw std::invalid_argument("gen_lattice: lattice too large for vertex id width");
  }

  SplitMix64 rng(spec.seed);
  std::vector<Edge> edges;
  edges.reserve(cells * 2);
  const bool oriented = spec.scheme == LatticeScheme::kOriented;

  auto draw = [&](VertexId u, VertexId v) {
    if (u == v) return;  // wrapped dimension of size 1
    const double x = rng.next_unit();
    if (oriented) {
      if (x < pf) {
        edges.emplace_back(u, v);
      } else {
        edges.emplace_back(v, u);
      }
    } else {
      if (x < pf) {
        edges.emplace_back(u, v);
      } else if (x < pf + pb) {
        edges.emplace_back(v, u);
      }
    }
  };

  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      const VertexId u = static_cast<VertexId>(r * cols + c);
      if (spec.wrap || c + 1 < cols) {
        draw(u, static_cast<VertexId>(r * cols + (c + 1) % cols));
      }
      if (spec.wrap || r + 1 < rows) {
        draw(u, static_cast<VertexId>(((r + 1) % rows) * cols + c));
      }
    }
  }
  return build_graph(static_cast<VertexId>(cells), std::move(edges));
}

Graph gen_random_digraph(VertexId n, EdgeIndex m, std::uint64_t seed) {
  const std::uint64_t total =
      n == 0 ? 0 : static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) - 1);
  if (m > total) {
    throw std::invalid_argument("gen_random_digraph: m exceeds n*(n-1)");
  }
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m);

  if (m > total / 2) {
    // Dense request: enumerate every ordered pair and keep a random prefix
    // of a partial shuffle. Only sensible for small n.
    if (n > 4096) {
      throw std::invalid_argument("gen_random_digraph: dense generation capped at n=4096");
    }
    std::vector<std::uint64_t> pool;
    pool.reserve(total);
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = 0; v < n; ++v) {
        if (u != v) pool.push_back(static_cast<std::uint64_t>(u) * n + v);
      }
    }
    for (EdgeIndex i = 0; i < m; ++i) {
      const std::uint64_t j = i + rng.next_below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      edges.emplace_back(static_cast<VertexId>(pool[i] / n), static_cast<VertexId>(pool[i] % n));
    }
  } else {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(m) * 2);
    while (edges.size() < m) {
      const VertexId u = static_cast<VertexId>(rng.next_below(n));
      const VertexId v = static_cast<VertexId>(rng.next_below(n));
      if (u == v) continue;
      if (seen.insert(static_cast<std::uint64_t>(u) * n + v).second) {
        edges.emplace_back(u, v);
      }
    }
  }
  return build_graph(n, std::move(edges));
}

Graph load_adjacency_text(std::istream& in) {
  std::size_t line = 0;
  std::string header;
  while (std::getline(in, header)) {
    ++line;
    while (!header.empty() && (header.back() == '\r' || header.back() == ' ')) header.pop_back();
    if (!header.empty()) break;
  }
  if (header != "AdjacencyGraph") {
    parse_fail(line, "expected 'AdjacencyGraph' header, got '" + header + "'");
  }

  const std::uint64_t n = read_uint_line(in, line, "vertex count");
  const std::uint64_t m = read_uint_line(in, line, "edge count");
  if (n >= static_cast<std::uint64_t>(kNoVertex)) {
    parse_fail(line, "vertex count too large for this build's id width");
  }

  std::vector<EdgeIndex> starts(n);
  for (std::uint64_t v = 0; v < n; ++v) {
    starts[v] = read_uint_line(in, line, "offset");
    if (starts[v] > m) parse_fail(line, "offset exceeds edge count");
    if (v > 0 && starts[v] < starts[v - 1]) parse_fail(line, "offsets must be non-decreasing");
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  std::uint64_t source = 0;
  for (std::uint64_t e = 0; e < m; ++e) {
    const std::uint64_t target = read_uint_line(in, line, "edge target");
    if (target >= n) parse_fail(line, "edge target " + std::to_string(target) + " out of range");
    while (source + 1 < n && starts[source + 1] <= e) ++source;
    edges.emplace_back(static_cast<VertexId>(source), static_cast<VertexId>(target));
  }
  return build_graph(static_cast<VertexId>(n), std::move(edges));
}

void write_adjacency_text(const Graph& g, std::ostream& out) {
  out << "AdjacencyGraph\n" << g.n << "\n" << g.m << "\n";
  for (VertexId v = 0; v < g.n; ++v) out << g.offsets[v] << "\n";
  for (EdgeIndex e = 0; e < g.m; ++e) out << g.targets[e] << "\n";
  if (!out) throw std::runtime_error("write_adjacency_text: stream write failed");
}

namespace {

constexpr char kMagic[4] = {'C', 'G', 'R', '1'};
constexpr std::uint32_t kFlagSymmetric = 1u << 0;
constexpr std::uint32_t kFlagWideTargets = 1u << 1;

template <class T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
T read_pod(std::istream& in, const char* what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw std::runtime_error(std::string("binary graph: truncated ") + what);
  return value;
}

}  // namespace

Graph load_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("binary graph: bad magic (expected CGR1)");
  }
  const auto flags = read_pod<std::uint32_t>(in, "flags");
  const auto n = read_pod<std::uint64_t>(in, "vertex count");
  const auto m = read_pod<std::uint64_t>(in, "edge count");
  if (n >= static_cast<std::uint64_t>(kNoVertex)) {
    throw std::runtime_error("binary graph: vertex count too large for this build's id width");
  }

  std::vector<EdgeIndex> offsets(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) offsets[i] = read_pod<std::uint64_t>(in, "offset");
  if (offsets[0] != 0 || offsets[n] != m || !std::is_sorted(offsets.begin(), offsets.end())) {
    throw std::runtime_error("binary graph: malformed offset array");
  }

  std::vector<Edge> edges;
  edges.reserve(m);
  std::uint64_t source = 0;
  for (std::uint64_t e = 0; e < m; ++e) {
    const std::uint64_t target = (flags & kFlagWideTargets)
                                     ? read_pod<std::uint64_t>(in, "target")
                                     : read_pod<std::uint32_t>(in, "target");
    if (target >= n) throw std::runtime_error("binary graph: edge target out of range");
    while (source + 1 < n && offsets[source + 1] <= e) ++source;
    edges.emplace_back(static_cast<VertexId>(source), static_cast<VertexId>(target));
  }
  return build_graph(static_cast<VertexId>(n), std::move(edges),
                     /*with_transpose=*/(flags & kFlagSymmetric) == 0);
}

void write_binary(const Graph& g, std::ostream& out) {
  out.write(kMagic, 4);
  std::uint32_t flags = 0;
  if (g.symmetric()) flags |= kFlagSymmetric;
  if constexpr (sizeof(VertexId) == 8) flags |= kFlagWideTargets;
  write_pod(out, flags);
  write_pod(out, static_cast<std::uint64_t>(g.n));
  write_pod(out, static_cast<std::uint64_t>(g.m));
  for (EdgeIndex off : g.offsets) write_pod(out, static_cast<std::uint64_t>(off));
  for (VertexId t : g.targets) write_pod(out, t);
  if (!out) throw std::runtime_error("write_binary: stream write failed");
}

namespace {

bool binary_extension(const std::string& path) {
  return path.ends_with(".bin") || path.ends_with(".cgr");
}

}  // namespace

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_graph: cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  const bool is_binary = in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  try {
    return is_binary ? load_binary(in) : load_adjacency_text(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_graph: cannot open " + path);
  if (binary_extension(path)) {
    write_binary(g, out);
  } else {
    write_adjacency_text(g, out);
  }
}

}  // namespace cgraph
