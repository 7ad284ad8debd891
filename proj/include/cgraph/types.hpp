#pragma once

#include <cstdint>

namespace cgraph {

// Vertex ids are dense 0-based indices. 32-bit by default to halve the
// memory traffic of adjacency arrays; build with CGRAPH_WIDE_VERTEX_IDS for
// graphs with 2^32 or more vertices.
#ifdef CGRAPH_WIDE_VERTEX_IDS
using VertexId = std::uint64_t;
#else
using VertexId = std::uint32_t;
#endif

// Edge offsets are always 64-bit; edge counts routinely exceed 2^32 even
// when vertex counts do not.
using EdgeIndex = std::uint64_t;

inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

}  // namespace cgraph
