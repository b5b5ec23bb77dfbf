#include "choilab/rng.hpp"

#include <cmath>
#include <numbers>

namespace choilab {

std::uint64_t RandomStream::next_u64() {
  // splitmix64 (Vigna); passes BigCrush, two words of state mixing.
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  do {
    u = uniform01();
  } while (u == 0.0);
  const double v = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

cplx RandomStream::cgaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

CMatrix RandomStream::gaussian_matrix(std::size_t rows, std::size_t cols) {
  CMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out(i, j) = cgaussian();
  return out;
}

std::vector<cplx> RandomStream::gaussian_vector(std::size_t n) {
  std::vector<cplx> v(n);
  for (cplx &z : v)
    z = cgaussian();
  return v;
}

std::vector<cplx> RandomStream::unit_vector(std::size_t n) {
  std::vector<cplx> v = gaussian_vector(n);
  normalize(v);
  return v;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void orthonormalize_columns(CMatrix &a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  for (std::size_t c = 0; c < cols; ++c) {
    for (int pass = 0; pass < 2; ++pass) { // re-orthogonalize once
      for (std::size_t p = 0; p < c; ++p) {
        cplx overlap = 0.0;
        for (std::size_t r = 0; r < rows; ++r)
          overlap += std::conj(a(r, p)) * a(r, c);
        for (std::size_t r = 0; r < rows; ++r)
          a(r, c) -= overlap * a(r, p);
      }
    }
    double norm2 = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
      norm2 += std::norm(a(r, c));
    double nrm = std::sqrt(norm2);
    if (nrm < 1e-12) {
      // Column collapsed; cycle through basis vectors until one survives.
      for (std::size_t cand = 0; cand < rows; ++cand) {
        for (std::size_t r = 0; r < rows; ++r)
          a(r, c) = (r == cand) ? 1.0 : 0.0;
        for (std::size_t p = 0; p < c; ++p) {
          cplx overlap = 0.0;
          for (std::size_t r = 0; r < rows; ++r)
            overlap += std::conj(a(r, p)) * a(r, c);
          for (std::size_t r = 0; r < rows; ++r)
            a(r, c) -= overlap * a(r, p);
        }
        norm2 = 0.0;
        for (std::size_t r = 0; r < rows; ++r)
          norm2 += std::norm(a(r, c));
        nrm = std::sqrt(norm2);
        if (nrm > 0.5)
          break;
      }
    }
    for (std::size_t r = 0; r < rows; ++r)
      a(r, c) /= nrm;
  }
}

CMatrix haar_projection(std::size_t d, std::size_t k, RandomStream &rng) {
  if (k > d)
    throw BadK("projection rank exceeds dimension");
  CMatrix q = rng.gaussian_matrix(d, k);
  orthonormalize_columns(q);
  CMatrix f(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cplx s = 0.0;
      for (std::size_t c = 0; c < k; ++c)
        s += q(i, c) * std::conj(q(j, c));
      f(i, j) = s;
    }
  return f;
}

CMatrix random_density_on_span(const CMatrix &basis, RandomStream &rng) {
  const std::size_t d = basis.rows(), r = basis.cols();
  const CMatrix g = rng.gaussian_matrix(r, r);
  // column span lift: M = basis * g, rho = M M^+ / Tr
  CMatrix mm(d, r);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      cplx s = 0.0;
      for (std::size_t t = 0; t < r; ++t)
        s += basis(i, t) * g(t, j);
      mm(i, j) = s;
    }
  CMatrix rho(d, d);
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cplx s = 0.0;
      for (std::size_t t = 0; t < r; ++t)
        s += mm(i, t) * std::conj(mm(j, t));
      rho(i, j) = s;
      if (i == j)
        tr += s.real();
    }
  if (tr <= 0.0)
    throw NumericalFailure("degenerate random density sample");
  rho *= cplx(1.0 / tr, 0.0);
  return rho;
}

} // namespace choilab
