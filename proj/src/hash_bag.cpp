#include "cgraph/hash_bag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cgraph/parallel.hpp"
#include "cgraph/rng.hpp"

namespace cgraph {

HashBag::HashBag(std::uint64_t upper_bound, const HashBagParams& params)
    : sigma_(params.sigma), kappa_(params.kappa) {
  if (params.lambda == 0 || params.sigma == 0 || params.kappa == 0 || params.alpha <= 0 ||
      params.alpha >= 1) {
    throw std::invalid_argument("HashBag: lambda/sigma/kappa must be positive, alpha in (0,1)");
  }
  // Enough chunks that the bag can hold upper_bound elements below load
  // factor alpha even if every chunk fills to alpha before growth, plus one
  // spare chunk so sampling variance near the end cannot exhaust the bag.
  const double needed = static_cast<double>(upper_bound) / params.alpha;
  std::uint64_t chunk = params.lambda;
  std::uint64_t total = 0;
  bool margin_added = false;
  while (true) {
    total += chunk;
    tails_.push_back(total);
    // Growth probability sigma / (alpha * |chunk|), compared against the
    // low 32 bits of the slot draw.
    const double rate = static_cast<double>(sigma_) / (params.alpha * static_cast<double>(chunk));
    const double scaled = rate * 4294967296.0;
    sample_thresholds_.push_back(
        scaled >= 4294967295.0 ? 0xFFFFFFFFu : static_cast<std::uint32_t>(scaled));
    if (static_cast<double>(total) >= needed && tails_.size() >= 2) {
      if (margin_added) break;
      margin_added = true;
    }
    // Chunk ends double (lambda, 2*lambda, 4*lambda, ...), so each new
    // chunk is as large as everything before it.
    chunk = total;
  }
  slots_ = std::vector<std::atomic<VertexId>>(total);
  parallel_for(0, total,
               [&](std::size_t i) { slots_[i].store(kNoVertex, std::memory_order_relaxed); });
  sample_counts_ = std::vector<std::atomic<std::uint32_t>>(tails_.size());
  for (auto& c : sample_counts_) c.store(0, std::memory_order_relaxed);
}

bool HashBag::try_grow(std::uint32_t seen_cursor) {
  if (seen_cursor + 1 >= tails_.size()) {
    exhausted_.store(true, std::memory_order_relaxed);
    return false;
  }
  std::uint32_t expected = seen_cursor;
  cursor_.compare_exchange_strong(expected, seen_cursor + 1, std::memory_order_acq_rel);
  // Whether this thread or a racing one advanced the cursor, the insert can
  // retry against the new chunk.
  return true;
}

bool HashBag::insert(VertexId v) {
  while (true) {
    const std::uint32_t chunk = cursor_.load(std::memory_order_acquire);
    const std::uint64_t begin = chunk_begin(chunk);
    const std::uint64_t size = tails_[chunk] - begin;

    // One draw serves both decisions: the low 32 bits drive the growth
    // sample, the full word picks the starting slot.
    const std::uint64_t draw = thread_rng().next();
    if (static_cast<std::uint32_t>(draw) < sample_thresholds_[chunk]) {
      const std::uint32_t samples =
          sample_counts_[chunk].fetch_add(1, std::memory_order_relaxed) + 1;
      if (samples >= sigma_) {
        if (!try_grow(chunk)) return false;
        continue;
      }
    }

    std::uint64_t slot = begin + reduce64(draw, size);
    for (std::uint32_t probe = 0; probe < kappa_; ++probe) {
      VertexId expected = kNoVertex;
      if (slots_[slot].compare_exchange_strong(expected, v, std::memory_order_release,
                                               std::memory_order_relaxed)) {
        return true;
      }
      ++slot;
      if (slot == tails_[chunk]) slot = begin;  // wrap within the chunk
    }
    // kappa consecutive occupied slots: the chunk is effectively full.
    if (!try_grow(chunk)) return false;
  }
}

std::uint64_t HashBag::scan_range() const {
  return tails_[cursor_.load(std::memory_order_acquire)];
}

std::uint64_t HashBag::occupied_in(std::uint64_t begin, std::uint64_t end) const {
  std::uint64_t count = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    if (slots_[i].load(std::memory_order_relaxed) != kNoVertex) ++count;
  }
  return count;
}

std::vector<VertexId> HashBag::extract_all() {
  const std::uint64_t limit = scan_range();
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (limit + kBlock - 1) / kBlock;

  // Two-pass pack keeps the output in slot order for any worker count.
  std::vector<std::uint64_t> counts(blocks + 1, 0);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(limit, lo + kBlock);
    std::uint64_t c = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (slots_[i].load(std::memory_order_acquire) != kNoVertex) ++c;
    }
    counts[b + 1] = c;
  });
  for (std::uint64_t b = 0; b < blocks; ++b) counts[b + 1] += counts[b];

  std::vector<VertexId> out(counts[blocks]);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(limit, lo + kBlock);
    std::uint64_t at = counts[b];
    for (std::uint64_t i = lo; i < hi; ++i) {
      const VertexId v = slots_[i].load(std::memory_order_acquire);
      if (v != kNoVertex) {
        out[at++] = v;
        slots_[i].store(kNoVertex, std::memory_order_relaxed);
      }
    }
  });

  cursor_.store(0, std::memory_order_release);
  for (auto& c : sample_counts_) c.store(0, std::memory_order_relaxed);
  return out;
}

}  // namespace cgraph
