#ifndef CHOILAB_KERNELS_HPP
#define CHOILAB_KERNELS_HPP

#include <cstddef>
#include <functional>

#include "choilab/cmatrix.hpp"

namespace choilab {

// Global worker cap for every OpenMP kernel and batch loop.
// 0 means "use the OpenMP default". 1 forces the serial paths.
void set_max_threads(int n);
int max_threads();
// Effective worker count for a parallel region.
int resolve_threads();

inline constexpr std::size_t kDefaultKronCap = 4096;

namespace kernels {

// Serial reference kernels. The OpenMP variants below compute every output
// element with the same accumulation order, so the two families agree bit
// for bit; tests rely on that.
CMatrix matmul_serial(const CMatrix &a, const CMatrix &b);
CMatrix kron_serial(const CMatrix &a, const CMatrix &b);
cplx hs_inner_serial(const CMatrix &a, const CMatrix &b);

// Compression kernels for rank-k bipartite quadratic forms. A is Hermitian
// of shape (m n) x (m n) over C^m (x) C^n; a Schmidt-rank-k vector is
// psi[i*n+j] = sum_a X(i,a) Z(j,a).
//
// compressed_for_left: with Z fixed (orthonormal columns), returns the
// (m k) x (m k) matrix B with B[(i k + a),(i' k + a')] =
//   sum_{j j'} conj(Z(j,a)) A[(i n + j),(i' n + j')] Z(j',a').
// compressed_for_right: the mirror image with X fixed, (n k) x (n k).
CMatrix compressed_for_left_serial(const CMatrix &a, const CMatrix &z,
                                   std::size_t m, std::size_t n, std::size_t k);
CMatrix compressed_for_right_serial(const CMatrix &a, const CMatrix &x,
                                    std::size_t m, std::size_t n, std::size_t k);

CMatrix matmul_omp(const CMatrix &a, const CMatrix &b);
CMatrix kron_omp(const CMatrix &a, const CMatrix &b);
cplx hs_inner_omp(const CMatrix &a, const CMatrix &b);
CMatrix compressed_for_left_omp(const CMatrix &a, const CMatrix &z,
                                std::size_t m, std::size_t n, std::size_t k);
CMatrix compressed_for_right_omp(const CMatrix &a, const CMatrix &x,
                                 std::size_t m, std::size_t n, std::size_t k);

} // namespace kernels

// Dispatching entry points: OpenMP when available and worthwhile, otherwise
// the serial reference. Results are identical either way.
CMatrix matmul(const CMatrix &a, const CMatrix &b);
CMatrix kron(const CMatrix &a, const CMatrix &b,
             std::size_t dim_cap = kDefaultKronCap);
cplx hs_inner(const CMatrix &a, const CMatrix &b);
CMatrix compressed_for_left(const CMatrix &a, const CMatrix &z, std::size_t m,
                            std::size_t n, std::size_t k);
CMatrix compressed_for_right(const CMatrix &a, const CMatrix &x, std::size_t m,
                             std::size_t n, std::size_t k);

// Runs f(i) for i in [0, count) on the worker pool; every slot independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &f);

} // namespace choilab

#endif
