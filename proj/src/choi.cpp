#include "choilab/choi.hpp"

#include <cmath>

#include "choilab/eig.hpp"
#include "choilab/kernels.hpp"
#include "choilab/rng.hpp"

namespace choilab {

namespace {

void check_square_map(const LinearMap &phi) {
  const std::size_t d = phi.choi_dim();
  if (phi.choi.rows() != d || phi.choi.cols() != d)
    throw ShapeMismatch("Choi matrix shape does not match m*n");
}

} // namespace

LinearMap choi_of_map(const MapFn &apply, std::size_t m, std::size_t n,
                      double lin_tol) {
  if (m == 0 || n == 0)
    throw ShapeMismatch("map dimensions must be positive");

  LinearMap out{m, n, CMatrix(m * n, m * n)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const CMatrix img = apply(CMatrix::unit(m, m, i, j));
      if (img.rows() != n || img.cols() != n)
        throw ShapeMismatch("map image has wrong shape");
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          out.choi(i * n + r, j * n + s) = img(r, s);
    }

  // Linearity probe: the function must agree with the linear extension of
  // its matrix-unit values on random inputs.
  RandomStream rng(0xC401u);
  for (int probe = 0; probe < 2; ++probe) {
    const CMatrix x = rng.gaussian_matrix(m, m);
    const CMatrix direct = apply(x);
    if (direct.rows() != n || direct.cols() != n)
      throw ShapeMismatch("map image has wrong shape");
    const CMatrix extended = apply_map(out, x);
    const double scale = std::max(1.0, fro_norm(direct));
    if (fro_norm(direct - extended) > lin_tol * scale)
      throw NonLinearInput("function disagrees with its linear extension");
  }
  return out;
}

CMatrix apply_map(const LinearMap &phi, const CMatrix &x) {
  check_square_map(phi);
  const std::size_t m = phi.in_dim, n = phi.out_dim;
  if (x.rows() != m || x.cols() != m)
    throw ShapeMismatch("apply_map input must be m x m");
  CMatrix out(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const cplx w = x(i, j);
      if (w == cplx(0.0))
        continue;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          out(r, s) += w * phi.choi(i * n + r, j * n + s);
    }
  return out;
}

std::vector<cplx> vectorize_kraus(const CMatrix &v) {
  const std::size_t n = v.rows(), m = v.cols();
  std::vector<cplx> ups(m * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      ups[j * n + i] = v(i, j);
  return ups;
}

LinearMap ad_v_choi(const CMatrix &v) {
  const std::size_t n = v.rows(), m = v.cols();
  if (m == 0 || n == 0)
    throw ShapeMismatch("Kraus operator must be non-empty");
  const std::vector<cplx> ups = vectorize_kraus(v);
  return {m, n, CMatrix::dyad(ups, ups)};
}

LinearMap kraus_choi(std::span<const CMatrix> kraus) {
  if (kraus.empty())
    throw ShapeMismatch("empty Kraus family");
  LinearMap out = ad_v_choi(kraus[0]);
  for (std::size_t t = 1; t < kraus.size(); ++t) {
    if (kraus[t].rows() != kraus[0].rows() || kraus[t].cols() != kraus[0].cols())
      throw ShapeMismatch("Kraus operators must share a shape");
    out.choi += ad_v_choi(kraus[t]).choi;
  }
  return out;
}

LinearMap trace_map(std::size_t m, std::size_t n) {
  return {m, n, CMatrix::identity(m * n)};
}

LinearMap identity_map(std::size_t d) {
  // C_id = sum_ij e_ij (x) e_ij
  LinearMap out{d, d, CMatrix(d * d, d * d)};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.choi(i * d + i, j * d + j) = 1.0;
  return out;
}

LinearMap phi_lambda(const LinearMap &phi, double lambda) {
  if (lambda < 0.0)
    throw NegativeLambda("phi_lambda requires lambda >= 0");
  check_square_map(phi);
  CMatrix c = CMatrix::identity(phi.choi_dim());
  c -= lambda * phi.choi;
  return {phi.in_dim, phi.out_dim, std::move(c)};
}

LinearMap phi_lambda_ad_v(const CMatrix &v, double lambda) {
  return phi_lambda(ad_v_choi(v), lambda);
}

LinearMap adjoint_map(const LinearMap &phi) {
  check_square_map(phi);
  const std::size_t m = phi.in_dim, n = phi.out_dim;
  // Tr(phi(e_ij) e_rs) = Tr(e_ij phi*(e_rs)) pins the index shuffle:
  // C*[(r m + a),(s m + b)] = C[(b n + s),(a n + r)].
  LinearMap out{n, m, CMatrix(m * n, m * n)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          out.choi(r * m + a, s * m + b) = phi.choi(b * n + s, a * n + r);
  return out;
}

LinearMap transpose_conjugate(const LinearMap &phi) {
  check_square_map(phi);
  return {phi.in_dim, phi.out_dim, transpose(phi.choi)};
}

LinearMap compose(const LinearMap &outer, const LinearMap &inner) {
  check_square_map(outer);
  check_square_map(inner);
  if (outer.in_dim != inner.out_dim)
    throw ShapeMismatch("compose: dimension mismatch between maps");
  const std::size_t m = inner.in_dim, g = outer.out_dim;
  LinearMap out{m, g, CMatrix(m * g, m * g)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const CMatrix img = apply_map(outer, apply_map(inner, CMatrix::unit(m, m, i, j)));
      for (std::size_t u = 0; u < g; ++u)
        for (std::size_t w = 0; w < g; ++w)
          out.choi(i * g + u, j * g + w) = img(u, w);
    }
  return out;
}

ChoiSplit split_choi(const LinearMap &phi, double tol) {
  check_square_map(phi);
  const HermEig eig = herm_eig(phi.choi, tol);
  const std::size_t d = phi.choi_dim();
  const double cut = tol * eig.spectral_radius();

  ChoiSplit out;
  out.positive_part = CMatrix(d, d);
  out.negative_part = CMatrix(d, d);
  out.support_neg = CMatrix(d, d);
  for (std::size_t t = 0; t < d; ++t) {
    const double ev = eig.eigenvalues[t];
    if (std::abs(ev) <= cut)
      continue; // dead zone around zero: assigned to neither part
    for (std::size_t i = 0; i < d; ++i) {
      const cplx vi = eig.eigenvectors(i, t);
      for (std::size_t j = 0; j < d; ++j) {
        const cplx term = vi * std::conj(eig.eigenvectors(j, t));
        if (ev > 0.0) {
          out.positive_part(i, j) += ev * term;
        } else {
          out.negative_part(i, j) += -ev * term;
          out.support_neg(i, j) += term;
        }
      }
    }
    if (ev < 0.0)
      ++out.rank_neg;
  }
  return out;
}

} // namespace choilab
