#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace spikefield {

// Worker cap shared by every parallel loop. 0 = hardware concurrency.
inline int& max_threads_ref() {
  static int n = 0;
  return n;
}

inline void set_max_threads(int n) { max_threads_ref() = n; }

inline int worker_count() {
  int cap = max_threads_ref();
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (cap > 0 && cap < hw) return cap;
  return hw;
}

// Runs fn(chunk_index, begin, end) over a FIXED grid of `n_chunks` contiguous
// chunks of [0, n). The grid does not depend on the worker count, so any
// computation whose writes are disjoint per chunk (or reduced in chunk order
// afterwards) produces byte-identical results for every --threads setting.
// `align` forces chunk boundaries onto multiples of align (e.g. 8 so that
// bit-packed pixel bytes are never shared between chunks).
template <typename Fn>
void parallel_chunks(std::int64_t n, int n_chunks, Fn&& fn, std::int64_t align = 1) {
  if (n <= 0) return;
  if (n_chunks < 1) n_chunks = 1;
  std::vector<std::pair<std::int64_t, std::int64_t>> chunks;
  chunks.reserve(n_chunks);
  for (int c = 0; c < n_chunks; ++c) {
    std::int64_t b = n * c / n_chunks;
    std::int64_t e = n * (c + 1) / n_chunks;
    b = (b / align) * align;
    e = (c == n_chunks - 1) ? n : (e / align) * align;
    if (b < e) chunks.emplace_back(b, e);
  }
  int workers = worker_count();
  if (workers <= 1 || chunks.size() <= 1) {
    for (std::size_t c = 0; c < chunks.size(); ++c)
      fn(static_cast<int>(c), chunks[c].first, chunks[c].second);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks.size()) return;
      fn(static_cast<int>(c), chunks[c].first, chunks[c].second);
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<int>(workers, static_cast<int>(chunks.size()));
  pool.reserve(spawn - 1);
  for (int i = 0; i < spawn - 1; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

// Element-wise parallel loop; fn(i) writes must be disjoint across i.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn, std::int64_t align = 1) {
  int n_chunks = worker_count() * 8;
  parallel_chunks(
      n, n_chunks,
      [&](int, std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) fn(i);
      },
      align);
}

}  // namespace spikefield
