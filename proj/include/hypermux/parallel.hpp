#pragma once
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hypermux {

// Worker cap: HYPERMUX_THREADS if set, else the OpenMP default.
int max_threads();

// Deterministic parallel map over a fixed chunk grid. Results are keyed by
// chunk index and combined by the caller in index order, so the outcome is
// identical for any thread count (including 1).
template <class T, class F>
std::vector<T> map_chunks(int64_t n, int num_chunks, F&& body) {
  if (num_chunks < 1) num_chunks = 1;
  std::vector<T> out(static_cast<size_t>(num_chunks));
  const int64_t per = (n + num_chunks - 1) / num_chunks;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
#endif
  for (int c = 0; c < num_chunks; ++c) {
    const int64_t lo = static_cast<int64_t>(c) * per;
    const int64_t hi = lo + per < n ? lo + per : n;
    if (lo < hi) out[static_cast<size_t>(c)] = body(lo, hi);
  }
  return out;
}

// Independent trials, each seeded on its own; results by trial index.
template <class T, class F>
std::vector<T> map_trials(int trials, F&& body) {
  std::vector<T> out(static_cast<size_t>(trials < 0 ? 0 : trials));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
#endif
  for (int t = 0; t < trials; ++t) out[static_cast<size_t>(t)] = body(t);
  return out;
}

}  // namespace hypermux
