// Times the serial reference kernels against their OpenMP counterparts and
// the two analysis hot spots built on them (local coherence, block norms).
// Usage: stochascope_bench [--reps N]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "stochascope/kernels.hpp"
#include "stochascope/operators.hpp"
#include "stochascope/partitions.hpp"
#include "stochascope/rng.hpp"
#include "stochascope/sa_factor.hpp"
#include "stochascope/threads.hpp"

using namespace stochascope;

namespace {

using clock_t_ = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& fn) {
  fn();  // warm up
  const auto start = clock_t_::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double, std::milli>(clock_t_::now() - start).count() /
         static_cast<double>(reps);
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

std::vector<double> random_vec(std::uint64_t seed, std::size_t len) {
  Rng rng = Rng::stream(seed, "bench");
  std::vector<double> v(len);
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 20;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--reps") == 0) reps = std::atoi(argv[i + 1]);
  std::printf("threads available: %d (STOCHASCOPE_THREADS caps this)\n", effective_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    const index_t n = 2000, d = 2000;
    const auto op = build_random_ensemble({EnsembleKind::kGaussian, 0.0, 1.0}, n, d, 1);
    const auto x = random_vec(2, static_cast<std::size_t>(d));
    const auto y = random_vec(3, static_cast<std::size_t>(n));
    std::vector<double> out_n(static_cast<std::size_t>(n)), out_d(static_cast<std::size_t>(d));
    const double* a = op.matrix.dense_values().data();
    report("dense matvec 2000x2000",
           time_ms(reps, [&] { kernels::dense_matvec_serial(n, d, a, x.data(), out_n.data()); }),
           time_ms(reps, [&] { kernels::dense_matvec_parallel(n, d, a, x.data(), out_n.data()); }));
    report("dense matvec_t 2000x2000",
           time_ms(reps, [&] { kernels::dense_matvec_t_serial(n, d, a, y.data(), out_d.data()); }),
           time_ms(reps, [&] { kernels::dense_matvec_t_parallel(n, d, a, y.data(), out_d.data()); }));
    std::vector<double> norms(static_cast<std::size_t>(n));
    report("dense row norms 2000x2000",
           time_ms(reps, [&] { kernels::dense_row_norms_sq_serial(n, d, a, norms.data()); }),
           time_ms(reps, [&] { kernels::dense_row_norms_sq_parallel(n, d, a, norms.data()); }));
  }

  {
    const auto blur = build_space_varying_blur({96, 96, 0.0, 6.0});
    const Matrix& m = blur.matrix;
    const auto x = random_vec(4, static_cast<std::size_t>(m.cols()));
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    report("csr matvec blur 96x96",
           time_ms(reps * 5,
                   [&] {
                     kernels::csr_matvec_serial(m.rows(), m.row_ptr().data(),
                                                m.col_indices().data(), m.values().data(),
                                                x.data(), out.data());
                   }),
           time_ms(reps * 5, [&] {
             kernels::csr_matvec_parallel(m.rows(), m.row_ptr().data(), m.col_indices().data(),
                                          m.values().data(), x.data(), out.data());
           }));

    const Partition part = make_partition(PartitionScheme::kInterleaved, m.rows(), 16);
    const double serial_mu = [&] {
      set_thread_cap(1);
      const double v = time_ms(3, [&] { (void)local_accumulated_coherence(blur, part); });
      set_thread_cap(0);
      return v;
    }();
    const double parallel_mu =
        time_ms(3, [&] { (void)local_accumulated_coherence(blur, part); });
    report("local coherence K=16", serial_mu, parallel_mu);

    const double serial_lb = [&] {
      set_thread_cap(1);
      const double v = time_ms(3, [&] { (void)batch_lipschitz(blur, part); });
      set_thread_cap(0);
      return v;
    }();
    const double parallel_lb = time_ms(3, [&] { (void)batch_lipschitz(blur, part); });
    report("block norms K=16", serial_lb, parallel_lb);
  }

  return 0;
}
