#ifndef CHOILAB_CHOI_HPP
#define CHOILAB_CHOI_HPP

#include <functional>
#include <span>

#include "choilab/cmatrix.hpp"

namespace choilab {

/// A linear map phi: B(C^m) -> B(C^n), carried canonically by its Choi
/// matrix C[(i n + r),(j n + s)] = phi(e_ij)[r,s]. The first tensor factor
/// indexes the input space, the second the output space.
struct LinearMap {
  std::size_t in_dim = 0;  // m
  std::size_t out_dim = 0; // n
  CMatrix choi;            // (m n) x (m n)

  std::size_t choi_dim() const { return in_dim * out_dim; }
};

using MapFn = std::function<CMatrix(const CMatrix &)>;

// Builds the Choi matrix of `apply` by evaluating it on matrix units, then
// cross-checks linearity on random probes. Throws NonLinearInput when the
// probes disagree with the linear extension beyond lin_tol (relative).
LinearMap choi_of_map(const MapFn &apply, std::size_t m, std::size_t n,
                      double lin_tol = 1e-9);

// phi(x) for an m x m input, read off the Choi blocks.
CMatrix apply_map(const LinearMap &phi, const CMatrix &x);

// Ad_V: x -> V x V^* for V of shape n x m. The Choi matrix is the dyad on
// the vectorization ups[j*n + i] = V(i, j).
LinearMap ad_v_choi(const CMatrix &v);
// Convenience: the vectorization above as a flat vector.
std::vector<cplx> vectorize_kraus(const CMatrix &v);

// Sum of Ad_V over a Kraus family (all of the same shape).
LinearMap kraus_choi(std::span<const CMatrix> kraus);

// The trace map x -> Tr(x) 1_n; its Choi matrix is the identity.
LinearMap trace_map(std::size_t m, std::size_t n);

LinearMap identity_map(std::size_t d);

// phi_lambda = Tr - lambda * phi, same in/out dimensions as phi.
LinearMap phi_lambda(const LinearMap &phi, double lambda);
// Shortcut for the Tr - lambda Ad_V family.
LinearMap phi_lambda_ad_v(const CMatrix &v, double lambda);

// Adjoint with respect to the trace pairing Tr(phi(a) b) = Tr(a phi*(b)).
LinearMap adjoint_map(const LinearMap &phi);

// x -> phi(x^T)^T; on Choi matrices this is the global transpose.
LinearMap transpose_conjugate(const LinearMap &phi);

// outer o inner, evaluated blockwise on matrix units.
LinearMap compose(const LinearMap &outer, const LinearMap &inner);

/// Orthogonal decomposition C = C+ - C- of a Hermitian Choi matrix, plus the
/// support projection and rank of the negative part. Eigenvalues within
/// +-tol * ||C|| of zero are dropped from both parts.
struct ChoiSplit {
  CMatrix positive_part;
  CMatrix negative_part;
  CMatrix support_neg;
  std::size_t rank_neg = 0;
};

ChoiSplit split_choi(const LinearMap &phi, double tol = 1e-9);

} // namespace choilab

#endif
