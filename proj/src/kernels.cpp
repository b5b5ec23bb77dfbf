#include "choilab/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <vector>

#ifdef CHOILAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace choilab {

namespace {

std::atomic<int> g_thread_cap{0};

// Below this many output elements the parallel dispatch is not worth it.
constexpr std::size_t kParallelCutoff = 4096;

bool use_parallel(std::size_t work) {
#ifdef CHOILAB_HAVE_OPENMP
  if (omp_in_parallel())
    return false; // nested regions stay serial
  if (g_thread_cap.load(std::memory_order_relaxed) == 1)
    return false;
  return work >= kParallelCutoff;
#else
  (void)work;
  return false;
#endif
}

} // namespace

void set_max_threads(int n) { g_thread_cap.store(n, std::memory_order_relaxed); }

int max_threads() { return g_thread_cap.load(std::memory_order_relaxed); }

int resolve_threads() {
#ifdef CHOILAB_HAVE_OPENMP
  const int cap = g_thread_cap.load(std::memory_order_relaxed);
  const int avail = omp_get_max_threads();
  if (cap <= 0)
    return avail;
  return cap < avail ? cap : avail;
#else
  return 1;
#endif
}

namespace kernels {

//=========================================================================
// Serial reference kernels
//=========================================================================

namespace {

void check_matmul_shapes(const CMatrix &a, const CMatrix &b) {
  if (a.cols() != b.rows())
    throw ShapeMismatch("matmul inner dimension mismatch");
}

inline cplx matmul_entry(const CMatrix &a, const CMatrix &b, std::size_t i,
                         std::size_t j) {
  cplx s = 0.0;
  const std::size_t inner = a.cols();
  for (std::size_t t = 0; t < inner; ++t)
    s += a(i, t) * b(t, j);
  return s;
}

inline cplx kron_entry(const CMatrix &a, const CMatrix &b, std::size_t i,
                       std::size_t j) {
  const std::size_t rb = b.rows(), cb = b.cols();
  return a(i / rb, j / cb) * b(i % rb, j % cb);
}

// Fixed chunking makes the reduced sum independent of the thread count.
constexpr std::size_t kReduceChunk = 8192;

cplx hs_inner_chunked(const CMatrix &a, const CMatrix &b, bool parallel) {
  if (!a.same_shape(b))
    throw ShapeMismatch("hs_inner shape mismatch");
  const std::size_t total = a.size();
  const std::size_t chunks = total == 0 ? 0 : (total - 1) / kReduceChunk + 1;
  std::vector<cplx> partial(chunks, cplx(0.0));
  const cplx *pa = a.data();
  const cplx *pb = b.data();

  auto chunk_sum = [&](std::size_t c) {
    const std::size_t lo = c * kReduceChunk;
    const std::size_t hi = std::min(total, lo + kReduceChunk);
    cplx s = 0.0;
    for (std::size_t t = lo; t < hi; ++t)
      s += pa[t] * std::conj(pb[t]);
    partial[c] = s;
  };

#ifdef CHOILAB_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(resolve_threads())
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c)
      chunk_sum(static_cast<std::size_t>(c));
  } else
#endif
  {
    (void)parallel;
    for (std::size_t c = 0; c < chunks; ++c)
      chunk_sum(c);
  }

  cplx s = 0.0;
  for (const cplx &p : partial)
    s += p;
  return s;
}

// Shared element loops for the compression kernels. Stage one contracts the
// column side, stage two the row side; both stages keep a fixed inner
// summation order.
CMatrix compress_left_stage(const CMatrix &a, const CMatrix &z, std::size_t m,
                            std::size_t n, std::size_t k, bool parallel);
CMatrix compress_right_stage(const CMatrix &a, const CMatrix &x, std::size_t m,
                             std::size_t n, std::size_t k, bool parallel);

CMatrix compress_left_stage(const CMatrix &a, const CMatrix &z, std::size_t m,
                            std::size_t n, std::size_t k, bool parallel) {
  if (a.rows() != m * n || a.cols() != m * n)
    throw ShapeMismatch("compression: operator must be (m n) x (m n)");
  if (z.rows() != n || z.cols() != k)
    throw ShapeMismatch("compression: Z must be n x k");

  // c1[(i n + j),(i' k + a')] = sum_{j'} A[(i n + j),(i' n + j')] Z(j', a')
  CMatrix c1(m * n, m * k);
  auto fill_c1_row = [&](std::size_t row) {
    for (std::size_t ip = 0; ip < m; ++ip)
      for (std::size_t ap = 0; ap < k; ++ap) {
        cplx s = 0.0;
        for (std::size_t jp = 0; jp < n; ++jp)
          s += a(row, ip * n + jp) * z(jp, ap);
        c1(row, ip * k + ap) = s;
      }
  };

  // b[(i k + a),(col)] = sum_j conj(Z(j, a)) c1[(i n + j),(col)]
  CMatrix b(m * k, m * k);
  auto fill_b_row = [&](std::size_t row) {
    const std::size_t i = row / k;
    const std::size_t aa = row % k;
    for (std::size_t col = 0; col < m * k; ++col) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        s += std::conj(z(j, aa)) * c1(i * n + j, col);
      b(row, col) = s;
    }
  };

#ifdef CHOILAB_HAVE_OPENMP
  if (parallel) {
    const int nt = resolve_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(m * n); ++r)
      fill_c1_row(static_cast<std::size_t>(r));
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(m * k); ++r)
      fill_b_row(static_cast<std::size_t>(r));
    return b;
  }
#endif
  (void)parallel;
  for (std::size_t r = 0; r < m * n; ++r)
    fill_c1_row(r);
  for (std::size_t r = 0; r < m * k; ++r)
    fill_b_row(r);
  return b;
}

CMatrix compress_right_stage(const CMatrix &a, const CMatrix &x, std::size_t m,
                             std::size_t n, std::size_t k, bool parallel) {
  if (a.rows() != m * n || a.cols() != m * n)
    throw ShapeMismatch("compression: operator must be (m n) x (m n)");
  if (x.rows() != m || x.cols() != k)
    throw ShapeMismatch("compression: X must be m x k");

  // c1[(i n + j),(j' k + a')] = sum_{i'} A[(i n + j),(i' n + j')] X(i', a')
  CMatrix c1(m * n, n * k);
  auto fill_c1_row = [&](std::size_t row) {
    for (std::size_t jp = 0; jp < n; ++jp)
      for (std::size_t ap = 0; ap < k; ++ap) {
        cplx s = 0.0;
        for (std::size_t ip = 0; ip < m; ++ip)
          s += a(row, ip * n + jp) * x(ip, ap);
        c1(row, jp * k + ap) = s;
      }
  };

  // b[(j k + a),(col)] = sum_i conj(X(i, a)) c1[(i n + j),(col)]
  CMatrix b(n * k, n * k);
  auto fill_b_row = [&](std::size_t row) {
    const std::size_t j = row / k;
    const std::size_t aa = row % k;
    for (std::size_t col = 0; col < n * k; ++col) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        s += std::conj(x(i, aa)) * c1(i * n + j, col);
      b(row, col) = s;
    }
  };

#ifdef CHOILAB_HAVE_OPENMP
  if (parallel) {
    const int nt = resolve_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(m * n); ++r)
      fill_c1_row(static_cast<std::size_t>(r));
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(n * k); ++r)
      fill_b_row(static_cast<std::size_t>(r));
    return b;
  }
#endif
  (void)parallel;
  for (std::size_t r = 0; r < m * n; ++r)
    fill_c1_row(r);
  for (std::size_t r = 0; r < n * k; ++r)
    fill_b_row(r);
  return b;
}

} // namespace

CMatrix matmul_serial(const CMatrix &a, const CMatrix &b) {
  check_matmul_shapes(a, b);
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      out(i, j) = matmul_entry(a, b, i, j);
  return out;
}

CMatrix kron_serial(const CMatrix &a, const CMatrix &b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) = kron_entry(a, b, i, j);
  return out;
}

cplx hs_inner_serial(const CMatrix &a, const CMatrix &b) {
  return hs_inner_chunked(a, b, false);
}

CMatrix compressed_for_left_serial(const CMatrix &a, const CMatrix &z,
                                   std::size_t m, std::size_t n,
                                   std::size_t k) {
  return compress_left_stage(a, z, m, n, k, false);
}

CMatrix compressed_for_right_serial(const CMatrix &a, const CMatrix &x,
                                    std::size_t m, std::size_t n,
                                    std::size_t k) {
  return compress_right_stage(a, x, m, n, k, false);
}

//=========================================================================
// OpenMP kernels
//=========================================================================

CMatrix matmul_omp(const CMatrix &a, const CMatrix &b) {
  check_matmul_shapes(a, b);
  CMatrix out(a.rows(), b.cols());
#ifdef CHOILAB_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads())
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(a.rows()); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      out(static_cast<std::size_t>(i), j) =
          matmul_entry(a, b, static_cast<std::size_t>(i), j);
  return out;
}

CMatrix kron_omp(const CMatrix &a, const CMatrix &b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
#ifdef CHOILAB_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads())
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(out.rows()); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(static_cast<std::size_t>(i), j) =
          kron_entry(a, b, static_cast<std::size_t>(i), j);
  return out;
}

cplx hs_inner_omp(const CMatrix &a, const CMatrix &b) {
  return hs_inner_chunked(a, b, true);
}

CMatrix compressed_for_left_omp(const CMatrix &a, const CMatrix &z,
                                std::size_t m, std::size_t n, std::size_t k) {
  return compress_left_stage(a, z, m, n, k, true);
}

CMatrix compressed_for_right_omp(const CMatrix &a, const CMatrix &x,
                                 std::size_t m, std::size_t n, std::size_t k) {
  return compress_right_stage(a, x, m, n, k, true);
}

} // namespace kernels

//=========================================================================
// Dispatch
//=========================================================================

CMatrix matmul(const CMatrix &a, const CMatrix &b) {
  const std::size_t work = a.rows() * b.cols();
  return use_parallel(work) ? kernels::matmul_omp(a, b)
                            : kernels::matmul_serial(a, b);
}

CMatrix kron(const CMatrix &a, const CMatrix &b, std::size_t dim_cap) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > dim_cap || cols > dim_cap)
    throw DimensionOverflow("kron result dimension " +
                            std::to_string(std::max(rows, cols)) +
                            " exceeds cap " + std::to_string(dim_cap));
  return use_parallel(rows * cols) ? kernels::kron_omp(a, b)
                                   : kernels::kron_serial(a, b);
}

cplx hs_inner(const CMatrix &a, const CMatrix &b) {
  return use_parallel(a.size()) ? kernels::hs_inner_omp(a, b)
                                : kernels::hs_inner_serial(a, b);
}

CMatrix compressed_for_left(const CMatrix &a, const CMatrix &z, std::size_t m,
                            std::size_t n, std::size_t k) {
  return use_parallel(a.size())
             ? kernels::compressed_for_left_omp(a, z, m, n, k)
             : kernels::compressed_for_left_serial(a, z, m, n, k);
}

CMatrix compressed_for_right(const CMatrix &a, const CMatrix &x, std::size_t m,
                             std::size_t n, std::size_t k) {
  return use_parallel(a.size())
             ? kernels::compressed_for_right_omp(a, x, m, n, k)
             : kernels::compressed_for_right_serial(a, x, m, n, k);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &f) {
#ifdef CHOILAB_HAVE_OPENMP
  if (!omp_in_parallel() && g_thread_cap.load(std::memory_order_relaxed) != 1 &&
      count > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads())
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < count; ++i)
    f(i);
}

} // namespace choilab
