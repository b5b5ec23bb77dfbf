#ifndef CHOILAB_TEST_HELPERS_HPP
#define CHOILAB_TEST_HELPERS_HPP

#include <cmath>
#include <vector>

#include "choilab/choi.hpp"
#include "choilab/cmatrix.hpp"
#include "choilab/eig.hpp"
#include "choilab/kernels.hpp"
#include "choilab/rng.hpp"

namespace testutil {

using namespace choilab;

inline CMatrix random_hermitian(std::size_t d, RandomStream &rng) {
  const CMatrix g = rng.gaussian_matrix(d, d);
  CMatrix out = g;
  out += adjoint(g);
  return out;
}

inline CMatrix random_psd(std::size_t d, RandomStream &rng) {
  const CMatrix g = rng.gaussian_matrix(d, d);
  return matmul(g, adjoint(g));
}

// Kraus map with `terms` random operators, n x m each.
inline LinearMap random_kraus_map(std::size_t m, std::size_t n,
                                  std::size_t terms, RandomStream &rng) {
  std::vector<CMatrix> ops;
  for (std::size_t t = 0; t < terms; ++t)
    ops.push_back(rng.gaussian_matrix(n, m));
  return kraus_choi(ops);
}

inline std::vector<cplx> psi_plus(std::size_t d) {
  std::vector<cplx> v(d * d, cplx(0.0));
  for (std::size_t i = 0; i < d; ++i)
    v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline CMatrix max_entangled_projection(std::size_t d) {
  const std::vector<cplx> v = psi_plus(d);
  return CMatrix::dyad(v, v);
}

inline CMatrix normalized_identity(std::size_t d) {
  CMatrix v = CMatrix::identity(d);
  v *= cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0);
  return v;
}

inline CMatrix unit_hs_norm(CMatrix v) {
  v *= cplx(1.0 / fro_norm(v), 0.0);
  return v;
}

inline bool matrices_close(const CMatrix &a, const CMatrix &b, double tol) {
  return a.same_shape(b) && max_abs_diff(a, b) <= tol;
}

inline bool bitwise_equal(const CMatrix &a, const CMatrix &b) {
  if (!a.same_shape(b))
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.flat()[i] != b.flat()[i])
      return false;
  return true;
}

} // namespace testutil

#endif
