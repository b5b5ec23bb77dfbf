#ifndef CHOILAB_EIG_HPP
#define CHOILAB_EIG_HPP

#include <vector>

#include "choilab/cmatrix.hpp"

namespace choilab {

/// Spectral decomposition of a Hermitian matrix. Eigenvalues are sorted
/// descending; eigenvectors sit in the matching columns, each with its first
/// significant entry rotated to the positive real axis so repeated runs
/// produce identical output.
struct HermEig {
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;

  std::vector<cplx> eigenvector(std::size_t i) const;
  // max_i |lambda_i|, 0 for the empty matrix.
  double spectral_radius() const;
};

// Throws NotHermitian when ||A - A^*|| > tol * ||A||, NumericalFailure when
// the solver does not converge.
HermEig herm_eig(const CMatrix &a, double tol = 1e-9);

/// A = U diag(singular_values) V^*, with U, V full unitaries and the values
/// sorted descending. Phases are canonicalized like HermEig.
struct SVDResult {
  std::vector<double> singular_values;
  CMatrix u;
  CMatrix v;
};

SVDResult svd(const CMatrix &a);

} // namespace choilab

#endif
