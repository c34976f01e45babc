#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bbound {

// Worker cap: BARRIER_BOUND_WORKERS env var, else hardware concurrency.
inline int worker_budget() {
  if (const char* env = std::getenv("BARRIER_BOUND_WORKERS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

// Static row partition; fn(first, last) runs on disjoint ranges, so results
// are bitwise independent of the worker count for Jacobi-style sweeps.
template <class Fn>
void parallel_rows(int n_rows, Fn&& fn) {
  int workers = std::min(worker_budget(), n_rows);
  if (workers <= 1) {
    fn(0, n_rows);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  int chunk = (n_rows + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    int first = w * chunk, last = std::min(n_rows, (w + 1) * chunk);
    if (first >= last) break;
    pool.emplace_back([&fn, first, last] { fn(first, last); });
  }
  fn(0, std::min(chunk, n_rows));
  for (auto& t : pool) t.join();
}

}  // namespace bbound
