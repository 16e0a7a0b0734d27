#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace nts {

// Worker count: explicit request, else NTS_THREADS, else hardware. Trial
// results never depend on it (each trial derives its own seed and writes its
// own slot).
int resolve_threads(int requested);

template <class F>
void parallel_for(std::uint64_t count, int threads, F&& body) {
  int workers = resolve_threads(threads);
  if (workers <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::uint64_t chunk = std::max<std::uint64_t>(1, count / (8u * workers));
  auto run = [&] {
    for (;;) {
      std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      std::uint64_t end = std::min(count, begin + chunk);
      for (std::uint64_t i = begin; i < end; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace nts
