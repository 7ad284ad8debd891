#include "cgraph/parallel.hpp"

#include <atomic>

#include "cgraph/rng.hpp"

namespace cgraph {

namespace {

int initial_workers() {
  omp_set_dynamic(0);
  return omp_get_max_threads();
}

std::atomic<int>& worker_count() {
  static std::atomic<int> count{initial_workers()};
  return count;
}

std::atomic<int>& worker_high_water() {
  static std::atomic<int> high{initial_workers()};
  return high;
}

std::atomic<std::uint64_t> g_rng_base_seed{0x8f1bbcdcbfa53e0bULL};
std::atomic<std::uint64_t> g_rng_thread_counter{0};

struct ThreadStream {
  SplitMix64 gen;
  std::uint64_t base = ~std::uint64_t{0};
};

thread_local ThreadStream t_stream;

}  // namespace

int num_workers() { return worker_count().load(std::memory_order_relaxed); }

void set_num_workers(int workers) {
  if (workers < 1) workers = 1;
  worker_count().store(workers, std::memory_order_relaxed);
  atomic_write_max(worker_high_water(), workers);
  omp_set_num_threads(workers);
}

int max_workers() {
  int hw = worker_high_water().load(std::memory_order_relaxed);
  int omp_max = omp_get_max_threads();
  return hw > omp_max ? hw : omp_max;
}

SplitMix64& thread_rng() {
  const std::uint64_t base = g_rng_base_seed.load(std::memory_order_relaxed);
  if (t_stream.base != base) {
    const std::uint64_t id = g_rng_thread_counter.fetch_add(1, std::memory_order_relaxed);
    t_stream.gen = SplitMix64(mix64(base) ^ mix64(id * 0x9e3779b97f4a7c15ULL + 1));
    t_stream.base = base;
  }
  return t_stream.gen;
}

void reseed_rng(std::uint64_t base_seed) {
  g_rng_base_seed.store(base_seed, std::memory_order_relaxed);
  g_rng_thread_counter.store(0, std::memory_order_relaxed);
  // Force the calling thread to re-derive its stream immediately so a
  // single-threaded caller gets stream id 0 deterministically.
  t_stream.base = ~std::uint64_t{0};
  (void)thread_rng();
}

}  // namespace cgraph
