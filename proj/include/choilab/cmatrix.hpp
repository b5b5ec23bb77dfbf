#ifndef CHOILAB_CMATRIX_HPP
#define CHOILAB_CMATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "choilab/errors.hpp"

namespace choilab {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. Immutable by convention once
/// built: all library operations return fresh values.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static CMatrix identity(std::size_t d);
  // Matrix unit e_ij inside a rows x cols grid.
  static CMatrix unit(std::size_t rows, std::size_t cols, std::size_t i,
                      std::size_t j);
  static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  // Rank-one dyad v w^*, as a square matrix when v == w.
  static CMatrix dyad(std::span<const cplx> v, std::span<const cplx> w);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  cplx *data() { return data_.data(); }
  const cplx *data() const { return data_.data(); }
  std::span<const cplx> flat() const { return data_; }

  bool same_shape(const CMatrix &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  CMatrix &operator+=(const CMatrix &other);
  CMatrix &operator-=(const CMatrix &other);
  CMatrix &operator*=(cplx s);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix &b);
CMatrix operator-(CMatrix a, const CMatrix &b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(double s, CMatrix a);

CMatrix adjoint(const CMatrix &a);
CMatrix transpose(const CMatrix &a);
CMatrix conjugate(const CMatrix &a);

cplx trace(const CMatrix &a);
double fro_norm(const CMatrix &a);
// Largest entrywise deviation |a_ij - b_ij|.
double max_abs_diff(const CMatrix &a, const CMatrix &b);
// Frobenius distance of A from its own adjoint, relative to ||A||_F.
double hermiticity_defect(const CMatrix &a);

// <psi|A|psi> for a square matrix; real part is returned, the imaginary part
// is noise for Hermitian A.
double quadratic_form(const CMatrix &a, std::span<const cplx> psi);

double vec_norm(std::span<const cplx> v);
void normalize(std::span<cplx> v);
cplx vec_inner(std::span<const cplx> a, std::span<const cplx> b); // <a|b>

} // namespace choilab

#endif
