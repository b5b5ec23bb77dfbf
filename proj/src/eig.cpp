#include "choilab/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace choilab {

namespace {

using EMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EMatrix to_eigen(const CMatrix &a) {
  return Eigen::Map<const EMatrix>(a.data(), static_cast<Eigen::Index>(a.rows()),
                                   static_cast<Eigen::Index>(a.cols()));
}

CMatrix from_eigen(const EMatrix &m) {
  CMatrix out(static_cast<std::size_t>(m.rows()),
              static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

// Rotate the first significant entry of each column onto the positive real
// axis. For the SVD the same rotation must hit the matching column of the
// partner matrix to keep U diag(s) V^* intact.
void canonicalize_column_phases(CMatrix &vecs, CMatrix *partner = nullptr,
                                std::size_t paired_cols = 0) {
  const std::size_t rows = vecs.rows(), cols = vecs.cols();
  for (std::size_t c = 0; c < cols; ++c) {
    double colmax = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
      colmax = std::max(colmax, std::abs(vecs(r, c)));
    if (colmax == 0.0)
      continue;
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows; ++r)
      if (std::abs(vecs(r, c)) > 1e-8 * colmax) {
        lead = r;
        break;
      }
    const cplx z = vecs(lead, c);
    const double az = std::abs(z);
    if (az == 0.0)
      continue;
    const cplx phase = std::conj(z) / az;
    for (std::size_t r = 0; r < rows; ++r)
      vecs(r, c) *= phase;
    if (partner && c < paired_cols)
      for (std::size_t r = 0; r < partner->rows(); ++r)
        (*partner)(r, c) *= phase;
  }
}

} // namespace

std::vector<cplx> HermEig::eigenvector(std::size_t i) const {
  std::vector<cplx> v(eigenvectors.rows());
  for (std::size_t r = 0; r < v.size(); ++r)
    v[r] = eigenvectors(r, i);
  return v;
}

double HermEig::spectral_radius() const {
  double m = 0.0;
  for (double ev : eigenvalues)
    m = std::max(m, std::abs(ev));
  return m;
}

HermEig herm_eig(const CMatrix &a, double tol) {
  if (a.rows() != a.cols())
    throw NotHermitian("eigendecomposition needs a square matrix");
  const double defect = hermiticity_defect(a);
  if (defect > tol)
    throw NotHermitian("matrix is not Hermitian: relative defect " +
                       std::to_string(defect));

  const std::size_t d = a.rows();
  if (d == 0)
    return {};

  // Exact symmetrization so the solver sees a genuinely Hermitian input.
  EMatrix m = to_eigen(a);
  m = cplx(0.5) * (m + m.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<EMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigensolver did not converge");

  // Eigen returns ascending order; flip to descending.
  HermEig out;
  out.eigenvalues.resize(d);
  out.eigenvectors = CMatrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const Eigen::Index src = static_cast<Eigen::Index>(d - 1 - i);
    out.eigenvalues[i] = solver.eigenvalues()(src);
    for (std::size_t r = 0; r < d; ++r)
      out.eigenvectors(r, i) = solver.eigenvectors()(static_cast<Eigen::Index>(r), src);
  }
  canonicalize_column_phases(out.eigenvectors);
  return out;
}

SVDResult svd(const CMatrix &a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  SVDResult out;
  if (rows == 0 || cols == 0) {
    out.u = CMatrix::identity(rows);
    out.v = CMatrix::identity(cols);
    return out;
  }

  Eigen::JacobiSVD<EMatrix> solver(to_eigen(a),
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("SVD did not converge");

  const std::size_t nsv = std::min(rows, cols);
  out.singular_values.resize(nsv);
  for (std::size_t i = 0; i < nsv; ++i)
    out.singular_values[i] = solver.singularValues()(static_cast<Eigen::Index>(i));

  out.u = from_eigen(solver.matrixU());
  out.v = from_eigen(solver.matrixV());
  canonicalize_column_phases(out.u, &out.v, nsv);
  return out;
}

} // namespace choilab
