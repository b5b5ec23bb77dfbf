#include <doctest.h>

#include "choilab/norms.hpp"
#include "helpers.hpp"

using namespace choilab;
using namespace testutil;

// The OpenMP kernels must agree with the serial references bit for bit;
// every element keeps a fixed accumulation order in both variants.

TEST_CASE("matmul serial and omp agree bitwise") {
  RandomStream rng(21);
  for (std::size_t n : {7u, 80u}) {
    const CMatrix a = rng.gaussian_matrix(n, n + 1);
    const CMatrix b = rng.gaussian_matrix(n + 1, n);
    CHECK(bitwise_equal(kernels::matmul_serial(a, b), kernels::matmul_omp(a, b)));
  }
}

TEST_CASE("kron serial and omp agree bitwise") {
  RandomStream rng(22);
  const CMatrix a = rng.gaussian_matrix(9, 8);
  const CMatrix b = rng.gaussian_matrix(8, 9);
  CHECK(bitwise_equal(kernels::kron_serial(a, b), kernels::kron_omp(a, b)));
}

TEST_CASE("hs_inner serial and omp agree bitwise") {
  RandomStream rng(23);
  const CMatrix a = rng.gaussian_matrix(101, 97);
  const CMatrix b = rng.gaussian_matrix(101, 97);
  CHECK(kernels::hs_inner_serial(a, b) == kernels::hs_inner_omp(a, b));
}

TEST_CASE("compression kernels match the dense construction") {
  RandomStream rng(24);
  const std::size_t m = 3, n = 4, k = 2;
  const CMatrix a = random_hermitian(m * n, rng);

  CMatrix z = rng.gaussian_matrix(n, k);
  orthonormalize_columns(z);
  // dense oracle: S = kron(I_m, Z), B = S^H A S
  const CMatrix s = kron(CMatrix::identity(m), z);
  const CMatrix expected = matmul(adjoint(s), matmul(a, s));
  const CMatrix got = kernels::compressed_for_left_serial(a, z, m, n, k);
  CHECK(matrices_close(got, expected, 1e-12));
  CHECK(bitwise_equal(got, kernels::compressed_for_left_omp(a, z, m, n, k)));

  CMatrix x = rng.gaussian_matrix(m, k);
  orthonormalize_columns(x);
  // dense oracle for the mirror: T[(i n + j),(j' k + a)] = X(i,a) delta_jj'
  CMatrix t(m * n, n * k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < k; ++c)
        t(i * n + j, j * k + c) = x(i, c);
  const CMatrix expected_r = matmul(adjoint(t), matmul(a, t));
  const CMatrix got_r = kernels::compressed_for_right_serial(a, x, m, n, k);
  CHECK(matrices_close(got_r, expected_r, 1e-12));
  CHECK(bitwise_equal(got_r, kernels::compressed_for_right_omp(a, x, m, n, k)));
}

TEST_CASE("compression preserves the quadratic form") {
  RandomStream rng(25);
  const std::size_t m = 4, n = 3, k = 2;
  const CMatrix a = random_hermitian(m * n, rng);
  CMatrix z = rng.gaussian_matrix(n, k);
  orthonormalize_columns(z);
  const CMatrix x = rng.gaussian_matrix(m, k);

  // psi = vec(X Z^T); <psi|A|psi> must equal <vec X|B|vec X>
  std::vector<cplx> psi(m * n), xf(m * k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < k; ++c)
      xf[i * k + c] = x(i, c);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx sum = 0.0;
      for (std::size_t c = 0; c < k; ++c)
        sum += x(i, c) * z(j, c);
      psi[i * n + j] = sum;
    }
  const CMatrix b = kernels::compressed_for_left_serial(a, z, m, n, k);
  CHECK(quadratic_form(a, psi) ==
        doctest::Approx(quadratic_form(b, xf)).epsilon(1e-12));
}

TEST_CASE("worker cap does not change see-saw results") {
  RandomStream rng(26);
  const CMatrix a = random_hermitian(9, rng);
  RunConfig cfg;
  cfg.restarts = 8;

  set_max_threads(1);
  const NormResult serial = schmidt_op_norm(a, 3, 3, 1, cfg);
  set_max_threads(0);
  const NormResult parallel = schmidt_op_norm(a, 3, 3, 1, cfg);
  set_max_threads(0);

  CHECK(serial.value == parallel.value);
  CHECK(serial.signed_sup == parallel.signed_sup);
  REQUIRE(serial.maximizer.size() == parallel.maximizer.size());
  for (std::size_t i = 0; i < serial.maximizer.size(); ++i)
    CHECK(serial.maximizer[i] == parallel.maximizer[i]);
}

TEST_CASE("parallel_for covers every slot exactly once") {
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits)
    CHECK(h == 1);
}
