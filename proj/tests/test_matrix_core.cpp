#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"

using namespace choilab;
using namespace testutil;

namespace {

// Independent oracle: spectral reconstruction residual.
double reconstruction_residual(const CMatrix &a, const HermEig &eig) {
  const std::size_t d = a.rows();
  CMatrix rebuilt(d, d);
  for (std::size_t t = 0; t < d; ++t)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        rebuilt(i, j) += eig.eigenvalues[t] * eig.eigenvectors(i, t) *
                         std::conj(eig.eigenvectors(j, t));
  return fro_norm(a - rebuilt);
}

} // namespace

TEST_CASE("herm_eig on the identity") {
  const HermEig eig = herm_eig(CMatrix::identity(3));
  REQUIRE(eig.eigenvalues.size() == 3);
  for (double ev : eig.eigenvalues)
    CHECK(ev == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("herm_eig on diag(2,-1)") {
  const CMatrix a = CMatrix::from_rows({{2.0, 0.0}, {0.0, -1.0}});
  const HermEig eig = herm_eig(a);
  CHECK(eig.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("herm_eig reconstruction and unitarity at d = 6") {
  RandomStream rng(11);
  const CMatrix a = random_hermitian(6, rng);
  const HermEig eig = herm_eig(a);

  CHECK(reconstruction_residual(a, eig) <= 1e-10 * fro_norm(a));

  // descending order
  for (std::size_t i = 1; i < eig.eigenvalues.size(); ++i)
    CHECK(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);

  const CMatrix gram = matmul(adjoint(eig.eigenvectors), eig.eigenvectors);
  CHECK(matrices_close(gram, CMatrix::identity(6), 1e-10));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  RandomStream rng(12);
  const CMatrix g = rng.gaussian_matrix(4, 4);
  CHECK_THROWS_AS(herm_eig(g), NotHermitian);
  CHECK_THROWS_AS(herm_eig(rng.gaussian_matrix(2, 3)), NotHermitian);
}

TEST_CASE("herm_eig output is reproducible") {
  RandomStream rng(13);
  const CMatrix a = random_hermitian(5, rng);
  const HermEig e1 = herm_eig(a);
  const HermEig e2 = herm_eig(a);
  CHECK(bitwise_equal(e1.eigenvectors, e2.eigenvectors));
}

TEST_CASE("svd of diag(3,4) and the zero matrix") {
  const CMatrix a = CMatrix::from_rows({{3.0, 0.0}, {0.0, 4.0}});
  const SVDResult dec = svd(a);
  CHECK(dec.singular_values[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(dec.singular_values[1] == doctest::Approx(3.0).epsilon(1e-14));

  const SVDResult z = svd(CMatrix(3, 2));
  for (double s : z.singular_values)
    CHECK(s == 0.0);
}

TEST_CASE("svd squares match the eigenvalues of AA*") {
  RandomStream rng(14);
  const CMatrix a = rng.gaussian_matrix(4, 4);
  const SVDResult dec = svd(a);
  const HermEig eig = herm_eig(matmul(a, adjoint(a)), 1e-7);
  const double scale = fro_norm(a) * fro_norm(a);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(dec.singular_values[i] * dec.singular_values[i] -
                   eig.eigenvalues[i]) <= 1e-10 * scale);
}

TEST_CASE("svd reconstructs rectangular input") {
  RandomStream rng(15);
  const CMatrix a = rng.gaussian_matrix(3, 5);
  const SVDResult dec = svd(a);
  CMatrix sigma(3, 5);
  for (std::size_t i = 0; i < dec.singular_values.size(); ++i)
    sigma(i, i) = dec.singular_values[i];
  const CMatrix rebuilt = matmul(matmul(dec.u, sigma), adjoint(dec.v));
  CHECK(fro_norm(a - rebuilt) <= 1e-10 * fro_norm(a));
}

TEST_CASE("kron of identities and matrix units") {
  CHECK(matrices_close(kron(CMatrix::identity(2), CMatrix::identity(2)),
                       CMatrix::identity(4), 0.0));
  // e_11 (x) e_22 puts its single 1 at flat position (0*2+1, 0*2+1)
  const CMatrix k =
      kron(CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1));
  CHECK(k(1, 1) == cplx(1.0));
  CHECK(fro_norm(k) == doctest::Approx(1.0));
}

TEST_CASE("kron eigenvalues are products of factor eigenvalues") {
  RandomStream rng(16);
  const CMatrix a = random_hermitian(3, rng);
  const CMatrix b = random_hermitian(2, rng);
  const HermEig ea = herm_eig(a);
  const HermEig eb = herm_eig(b);

  std::vector<double> products;
  for (double x : ea.eigenvalues)
    for (double y : eb.eigenvalues)
      products.push_back(x * y);
  std::sort(products.begin(), products.end(), std::greater<>());

  const HermEig ek = herm_eig(kron(a, b), 1e-7);
  for (std::size_t i = 0; i < products.size(); ++i)
    CHECK(ek.eigenvalues[i] ==
          doctest::Approx(products[i]).epsilon(1e-10).scale(fro_norm(a) * fro_norm(b)));
}

TEST_CASE("kron associativity") {
  RandomStream rng(17);
  const CMatrix a = rng.gaussian_matrix(2, 3);
  const CMatrix b = rng.gaussian_matrix(3, 2);
  const CMatrix c = rng.gaussian_matrix(2, 2);
  CHECK(matrices_close(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-13));
}

TEST_CASE("kron refuses to exceed the dimension cap") {
  CHECK_THROWS_AS(kron(CMatrix::identity(70), CMatrix::identity(70)),
                  DimensionOverflow);
  CHECK_NOTHROW(kron(CMatrix::identity(70), CMatrix::identity(4), 280));
}

TEST_CASE("hs_inner basics") {
  CHECK(hs_inner(CMatrix::identity(3), CMatrix::identity(3)) == cplx(3.0));
  const CMatrix e12 = CMatrix::unit(3, 3, 0, 1);
  CHECK(hs_inner(e12, e12) == cplx(1.0));
  CHECK_THROWS_AS(hs_inner(CMatrix(2, 2), CMatrix(2, 3)), ShapeMismatch);
}

TEST_CASE("hs_inner equals entrywise summation") {
  RandomStream rng(18);
  const CMatrix v = rng.gaussian_matrix(4, 4);
  const CMatrix w = rng.gaussian_matrix(4, 4);
  cplx direct = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      direct += v(i, j) * std::conj(w(i, j));
  CHECK(std::abs(hs_inner(v, w) - direct) <= 1e-12);
}

TEST_CASE("Frobenius norm squared equals the sum of squared singular values") {
  RandomStream rng(19);
  for (int rep = 0; rep < 5; ++rep) {
    const CMatrix a = rng.gaussian_matrix(3 + rep % 2, 4);
    const SVDResult dec = svd(a);
    double sum = 0.0;
    for (double s : dec.singular_values)
      sum += s * s;
    const double f2 = fro_norm(a) * fro_norm(a);
    CHECK(std::abs(sum - f2) <= 1e-10 * f2);
  }
}
