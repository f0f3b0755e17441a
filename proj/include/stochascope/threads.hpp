#pragma once

namespace stochascope {

// Number of worker threads the parallel kernels may use. Reads the
// STOCHASCOPE_THREADS environment variable once (values < 1 are ignored)
// and caps it at the OpenMP hardware maximum. Returns 1 when OpenMP is
// unavailable.
int effective_threads();

// Override the cap programmatically (0 restores the environment default).
// Intended for benchmarks and tests.
void set_thread_cap(int cap);

}  // namespace stochascope
