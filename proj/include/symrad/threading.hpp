#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace symrad {

// Thread cap: SYMRAD_THREADS if set (0 or unset means hardware concurrency).
// Read once; a process keeps one policy for its lifetime.
inline unsigned thread_cap() {
  static const unsigned cap = [] {
    if (const char* env = std::getenv("SYMRAD_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
  }();
  return cap;
}

// Static contiguous partition of [0, count).  Every index is computed by
// exactly one worker and written to its own output slot, so results are
// bitwise identical for any thread count.
template <typename F>
inline void parallel_for(std::size_t count, F&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_cap(), count ? count : 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace symrad
