// Timing harness comparing the serial reference kernels against the OpenMP
// ones, plus one end-to-end see-saw batch. Build target: choilab_bench.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "choilab/choi.hpp"
#include "choilab/kernels.hpp"
#include "choilab/norms.hpp"
#include "choilab/rng.hpp"
#include "choilab/tensor_distill.hpp"

using namespace choilab;

namespace {

double time_ms(const std::function<void()> &fn, int reps) {
  fn(); // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i)
    fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string &name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx\n",
              name.c_str(), serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

} // namespace

int main() {
  std::printf("workers available: %d\n", resolve_threads());
  RandomStream rng(42);

  {
    const std::size_t n = 384;
    const CMatrix a = rng.gaussian_matrix(n, n);
    const CMatrix b = rng.gaussian_matrix(n, n);
    report("matmul 384x384",
           time_ms([&] { kernels::matmul_serial(a, b); }, 3),
           time_ms([&] { kernels::matmul_omp(a, b); }, 3));
  }
  {
    const CMatrix a = rng.gaussian_matrix(36, 36);
    const CMatrix b = rng.gaussian_matrix(36, 36);
    report("kron 36x36 (x) 36x36",
           time_ms([&] { kernels::kron_serial(a, b); }, 5),
           time_ms([&] { kernels::kron_omp(a, b); }, 5));
  }
  {
    const std::size_t n = 1024;
    const CMatrix a = rng.gaussian_matrix(n, n);
    const CMatrix b = rng.gaussian_matrix(n, n);
    report("hs_inner 1024x1024",
           time_ms([&] { kernels::hs_inner_serial(a, b); }, 20),
           time_ms([&] { kernels::hs_inner_omp(a, b); }, 20));
  }
  {
    // Two-copy compression at d = 5: the hot loop of every see-saw sweep.
    const std::size_t m = 25, n = 25, k = 2;
    CMatrix a = rng.gaussian_matrix(m * n, m * n);
    a += adjoint(a);
    CMatrix z = rng.gaussian_matrix(n, k);
    orthonormalize_columns(z);
    report("compress 625 -> 50",
           time_ms([&] { kernels::compressed_for_left_serial(a, z, m, n, k); }, 3),
           time_ms([&] { kernels::compressed_for_left_omp(a, z, m, n, k); }, 3));
  }
  {
    // Restart batch: serial worker pool vs the default one.
    CMatrix v = CMatrix::identity(5);
    v *= cplx(1.0 / std::sqrt(5.0), 0.0);
    const LinearMap doubled = tensor_power_map(phi_lambda_ad_v(v, 1.25), 2);
    RunConfig cfg;
    cfg.restarts = 8;
    cfg.max_sweeps = 40;
    const auto run = [&] {
      seesaw_extremum(doubled.choi, 25, 25, 2, false, cfg);
    };
    set_max_threads(1);
    const double serial = time_ms(run, 1);
    set_max_threads(0);
    const double parallel = time_ms(run, 1);
    report("seesaw batch d=5 n=2", serial, parallel);
  }
  return 0;
}
