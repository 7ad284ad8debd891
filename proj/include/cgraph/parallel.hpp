#pragma once

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace cgraph {

// Number of worker threads used by the parallel loops below. Defaults to
// the machine parallelism; the CLI and tests override it. With one worker
// every parallel_for degenerates to a plain sequential loop — that is the
// mechanism behind the single-thread determinism guarantee.
int num_workers();
void set_num_workers(int workers);

// Id of the calling worker within the active team (0 outside any team).
// Used to index per-worker scratch buffers.
inline int worker_id() { return omp_get_thread_num(); }

// Upper bound on worker ids that can appear, independent of later
// set_num_workers calls. Used to size per-worker scratch arrays.
int max_workers();

template <class F>
void parallel_for(std::size_t lo, std::size_t hi, F&& f, std::size_t grain = 0) {
  if (hi <= lo) return;
  const std::size_t count = hi - lo;
  const int workers = num_workers();
  if (workers <= 1 || count == 1) {
    for (std::size_t i = lo; i < hi; ++i) f(i);
    return;
  }
  if (grain == 0) {
    grain = count / (static_cast<std::size_t>(workers) * 8);
    if (grain == 0) grain = 1;
  }
  if (omp_in_parallel()) {
    // Already inside a team: spawn child tasks so nested loops compose
    // without oversubscribing.
#pragma omp taskloop grainsize(grain) shared(f)
    for (std::size_t i = lo; i < hi; ++i) f(i);
  } else {
#pragma omp parallel num_threads(workers)
#pragma omp single
    {
#pragma omp taskloop grainsize(grain) shared(f)
      for (std::size_t i = lo; i < hi; ++i) f(i);
    }
  }
}

// Sum of f(i) over [lo, hi). f must be pure.
template <class F>
std::uint64_t parallel_sum(std::size_t lo, std::size_t hi, F&& f) {
  if (hi <= lo) return 0;
  const int workers = num_workers();
  if (workers <= 1) {
    std::uint64_t acc = 0;
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    return acc;
  }
  struct alignas(64) Cell {
    std::uint64_t value = 0;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(max_workers()));
  parallel_for(lo, hi, [&](std::size_t i) { cells[worker_id()].value += f(i); });
  std::uint64_t acc = 0;
  for (const Cell& c : cells) acc += c.value;
  return acc;
}

// Stable parallel sort: chunked std::stable_sort plus pairwise stable
// merges. Stability makes the output independent of the worker count, which
// keeps downstream results reproducible.
template <class T, class Cmp = std::less<T>>
void parallel_sort(std::vector<T>& items, Cmp cmp = Cmp{}) {
  const std::size_t n = items.size();
  const int workers = num_workers();
  if (workers <= 1 || n < (1u << 13)) {
    std::stable_sort(items.begin(), items.end(), cmp);
    return;
  }
  std::size_t chunks = 1;
  while (chunks < static_cast<std::size_t>(workers) * 2) chunks <<= 1;
  std::vector<std::size_t> bounds(chunks + 1);
  for (std::size_t i = 0; i <= chunks; ++i) bounds[i] = n * i / chunks;
  parallel_for(
      0, chunks,
      [&](std::size_t c) {
        std::stable_sort(items.begin() + bounds[c], items.begin() + bounds[c + 1], cmp);
      },
      1);
  for (std::size_t width = 1; width < chunks; width <<= 1) {
    parallel_for(
        0, chunks / (2 * width),
        [&](std::size_t pair) {
          const std::size_t a = 2 * width * pair;
          std::inplace_merge(items.begin() + bounds[a], items.begin() + bounds[a + width],
                             items.begin() + bounds[a + 2 * width], cmp);
        },
        1);
  }
}

template <class T>
bool atomic_write_min(std::atomic<T>& target, T value) {
  T current = target.load(std::memory_order_relaxed);
  while (value < current) {
    if (target.compare_exchange_weak(current, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

template <class T>
bool atomic_write_max(std::atomic<T>& target, T value) {
  T current = target.load(std::memory_order_relaxed);
  while (current < value) {
    if (target.compare_exchange_weak(current, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

// Same, but for plain storage shared across workers.
template <class T>
bool atomic_write_min(T& target, T value) {
  std::atomic_ref<T> ref(target);
  T current = ref.load(std::memory_order_relaxed);
  while (value < current) {
    if (ref.compare_exchange_weak(current, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

template <class T>
bool atomic_write_max(T& target, T value) {
  std::atomic_ref<T> ref(target);
  T current = ref.load(std::memory_order_relaxed);
  while (current < value) {
    if (ref.compare_exchange_weak(current, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

}  // namespace cgraph
