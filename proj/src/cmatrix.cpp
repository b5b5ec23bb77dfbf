#include "choilab/cmatrix.hpp"

#include <cmath>
#include <utility>

namespace choilab {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw ShapeMismatch("matrix data length does not match rows*cols");
}

CMatrix CMatrix::identity(std::size_t d) {
  CMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    out(i, i) = 1.0;
  return out;
}

CMatrix CMatrix::unit(std::size_t rows, std::size_t cols, std::size_t i,
                      std::size_t j) {
  if (i >= rows || j >= cols)
    throw ShapeMismatch("matrix unit index out of range");
  CMatrix out(rows, cols);
  out(i, j) = 1.0;
  return out;
}

CMatrix CMatrix::from_rows(
    std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  CMatrix out(r, c);
  std::size_t i = 0;
  for (const auto &row : rows) {
    if (row.size() != c)
      throw ShapeMismatch("ragged initializer rows");
    std::size_t j = 0;
    for (const cplx &z : row)
      out(i, j++) = z;
    ++i;
  }
  return out;
}

CMatrix CMatrix::dyad(std::span<const cplx> v, std::span<const cplx> w) {
  CMatrix out(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      out(i, j) = v[i] * std::conj(w[j]);
  return out;
}

bool CMatrix::all_finite() const {
  for (const cplx &z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      return false;
  return true;
}

CMatrix &CMatrix::operator+=(const CMatrix &other) {
  if (!same_shape(other))
    throw ShapeMismatch("matrix addition shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += other.data_[i];
  return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &other) {
  if (!same_shape(other))
    throw ShapeMismatch("matrix subtraction shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] -= other.data_[i];
  return *this;
}

CMatrix &CMatrix::operator*=(cplx s) {
  for (cplx &z : data_)
    z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix &b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix &b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(double s, CMatrix a) { return a *= cplx(s, 0.0); }

CMatrix adjoint(const CMatrix &a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(j, i) = std::conj(a(i, j));
  return out;
}

CMatrix transpose(const CMatrix &a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(j, i) = a(i, j);
  return out;
}

CMatrix conjugate(const CMatrix &a) {
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(i, j) = std::conj(a(i, j));
  return out;
}

cplx trace(const CMatrix &a) {
  if (a.rows() != a.cols())
    throw ShapeMismatch("trace of a non-square matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    t += a(i, i);
  return t;
}

double fro_norm(const CMatrix &a) {
  double s = 0.0;
  for (const cplx &z : a.flat())
    s += std::norm(z);
  return std::sqrt(s);
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
  if (!a.same_shape(b))
    throw ShapeMismatch("max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

double hermiticity_defect(const CMatrix &a) {
  if (a.rows() != a.cols())
    throw ShapeMismatch("hermiticity defect of a non-square matrix");
  double num = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      num += std::norm(a(i, j) - std::conj(a(j, i)));
  const double den = fro_norm(a);
  if (den == 0.0)
    return 0.0;
  return std::sqrt(num) / den;
}

double quadratic_form(const CMatrix &a, std::span<const cplx> psi) {
  if (a.rows() != a.cols() || a.rows() != psi.size())
    throw ShapeMismatch("quadratic form shape mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
      row += a(i, j) * psi[j];
    acc += std::conj(psi[i]) * row;
  }
  return acc.real();
}

double vec_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx &z : v)
    s += std::norm(z);
  return std::sqrt(s);
}

void normalize(std::span<cplx> v) {
  const double n = vec_norm(v);
  if (n == 0.0)
    return;
  for (cplx &z : v)
    z /= n;
}

cplx vec_inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size())
    throw ShapeMismatch("inner product length mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::conj(a[i]) * b[i];
  return s;
}

} // namespace choilab
