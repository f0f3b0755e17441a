#include "stochascope/threads.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stochascope {

namespace {

std::atomic<int> g_cap{0};

int env_cap() {
  static const int cached = [] {
    const char* v = std::getenv("STOCHASCOPE_THREADS");
    if (!v) return 0;
    const int n = std::atoi(v);
    return n >= 1 ? n : 0;
  }();
  return cached;
}

}  // namespace

int effective_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
  const int cap = g_cap.load(std::memory_order_relaxed);
  const int env = env_cap();
  if (cap >= 1 && cap < n) n = cap;
  if (cap == 0 && env >= 1 && env < n) n = env;
  return n < 1 ? 1 : n;
#else
  return 1;
#endif
}

void set_thread_cap(int cap) { g_cap.store(cap < 0 ? 0 : cap, std::memory_order_relaxed); }

}  // namespace stochascope
